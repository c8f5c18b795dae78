"""Exact matrix semantics over Z[1/2][w], w a primitive 2^m-th root of unity.

An element of order-exponent ``m`` is a vector of 2^(m-1) dyadic
coefficients on the basis 1, w, ..., w^(2^(m-1)-1), with w^(2^(m-1)) = -1.
Matrices store integer coefficient arrays over one shared power-of-two
denominator, which keeps sums over millions of paths in integer arithmetic.
"""

from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .poly import BoolPoly, Monomial
from .term import SopTerm, phase_level

DEFAULT_VAR_CAP = 22
_CHUNK = 1 << 16


class NonDyadicError(ValueError):
    """The phase has a coefficient whose denominator is not a power of two."""


class VariableCapError(ValueError):
    """Too many summation variables for exhaustive evaluation."""


class OrderError(ValueError):
    pass


def _nlen(m: int) -> int:
    return 1 << (m - 1)


class CycloNum:
    """Exact element of Z[1/2][e^{i pi / 2^(m-1)}]."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Sequence):
        if m < 1:
            raise OrderError("order exponent must be at least 1")
        n = _nlen(m)
        c = [Fraction(0)] * n
        for j, a in enumerate(coeffs):
            q, r = divmod(j, n)
            c[r] += -Fraction(a) if q % 2 else Fraction(a)
        self.m = m
        self.coeffs = tuple(c)

    @classmethod
    def from_int(cls, a, m: int = 1) -> "CycloNum":
        return cls(m, [a])

    @classmethod
    def omega(cls, m: int, j: int = 1) -> "CycloNum":
        """e^{2 i pi j / 2^m}."""
        n = _nlen(m)
        j %= 2 * n
        c = [0] * n
        c[j % n] = -1 if j >= n else 1
        return cls(m, c)

    @classmethod
    def inv_sqrt2(cls) -> "CycloNum":
        # 1/sqrt2 = (w8 + w8^-1)/2 = (w8 - w8^3)/2
        return cls(3, [0, Fraction(1, 2), 0, Fraction(-1, 2)])

    def promote(self, m: int) -> "CycloNum":
        if m < self.m:
            raise OrderError(f"cannot demote order 2^{self.m} to 2^{m}")
        if m == self.m:
            return self
        step = 1 << (m - self.m)
        c = [Fraction(0)] * _nlen(m)
        for j, a in enumerate(self.coeffs):
            c[j * step] = a
        return CycloNum(m, c)

    def _align(self, other) -> Tuple["CycloNum", "CycloNum"]:
        if not isinstance(other, CycloNum):
            other = CycloNum.from_int(other)
        m = max(self.m, other.m)
        return self.promote(m), other.promote(m)

    def __add__(self, other) -> "CycloNum":
        a, b = self._align(other)
        return CycloNum(a.m, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "CycloNum":
        return CycloNum(self.m, [-x for x in self.coeffs])

    def __sub__(self, other) -> "CycloNum":
        return self + (-other if isinstance(other, CycloNum) else CycloNum.from_int(-Fraction(other)))

    def __rsub__(self, other) -> "CycloNum":
        return (-self) + other

    def __mul__(self, other) -> "CycloNum":
        a, b = self._align(other)
        n = _nlen(a.m)
        c = [Fraction(0)] * (2 * n)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        c[i + j] += x * y
        return CycloNum(a.m, c)

    __rmul__ = __mul__

    def conj(self) -> "CycloNum":
        n = _nlen(self.m)
        c = [Fraction(0)] * n
        c[0] = self.coeffs[0]
        for j in range(1, n):
            c[n - j] -= self.coeffs[j]
        return CycloNum(self.m, c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (CycloNum, int, Fraction)):
            return NotImplemented
        a, b = self._align(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # hash on the minimal order so that promoted copies agree
        x = self
        while x.m > 1 and all(a == 0 for a in x.coeffs[1::2]):
            x = CycloNum(x.m - 1, x.coeffs[0::2])
        return hash((x.m, x.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __complex__(self) -> complex:
        w = cmath.exp(1j * math.pi / _nlen(self.m))
        return complex(sum(float(a) * w**j for j, a in enumerate(self.coeffs)))

    def __repr__(self) -> str:
        return f"CycloNum(m={self.m}, {[str(a) for a in self.coeffs]})"


# ---------------------------------------------------------------------------
# matrices


def _negacyclic(a: np.ndarray, b: np.ndarray, op) -> np.ndarray:
    """Product of coefficient arrays (last axis = basis index) under w^n = -1."""
    n = a.shape[-1]
    out = None
    for i in range(n):
        ai = a[..., i]
        if not ai.any():
            continue
        for j in range(n):
            bj = b[..., j]
            if not bj.any():
                continue
            prod = op(ai, bj)
            if out is None:
                out = np.zeros(prod.shape + (n,), dtype=object)
            k = i + j
            if k >= n:
                out[..., k - n] -= prod
            else:
                out[..., k] += prod
    return out


class CycloMatrix:
    """Matrix with entries in Z[1/2][w], stored as ``coeffs / 2**e``."""

    __slots__ = ("m", "e", "coeffs")

    def __init__(self, m: int, coeffs: np.ndarray, e: int = 0):
        coeffs = np.asarray(coeffs, dtype=object)
        if coeffs.ndim != 3 or coeffs.shape[2] != _nlen(m):
            raise OrderError(f"coefficient array shape {coeffs.shape} does not match order 2^{m}")
        if e < 0:
            coeffs = coeffs * (1 << -e)
            e = 0
        while e > 0 and coeffs.size and all(int(x) % 2 == 0 for x in coeffs.flat):
            coeffs = coeffs // 2
            e -= 1
        if not coeffs.size:
            e = 0
        self.m = m
        self.e = e
        self.coeffs = coeffs

    @property
    def shape(self) -> Tuple[int, int]:
        return self.coeffs.shape[0], self.coeffs.shape[1]

    @classmethod
    def zeros(cls, rows: int, cols: int, m: int = 1) -> "CycloMatrix":
        return cls(m, np.zeros((rows, cols, _nlen(m)), dtype=object))

    @classmethod
    def identity(cls, n: int, m: int = 1) -> "CycloMatrix":
        c = np.zeros((n, n, _nlen(m)), dtype=object)
        for i in range(n):
            c[i, i, 0] = 1
        return cls(m, c)

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence]) -> "CycloMatrix":
        ents = [[x if isinstance(x, CycloNum) else CycloNum.from_int(x) for x in r] for r in rows]
        m = max((x.m for r in ents for x in r), default=1)
        denom = 1
        for r in ents:
            for x in r:
                for a in x.promote(m).coeffs:
                    denom = max(denom, a.denominator)
        e = denom.bit_length() - 1
        if 1 << e != denom:
            raise ValueError("entries must be dyadic")
        c = np.zeros((len(ents), len(ents[0]) if ents else 0, _nlen(m)), dtype=object)
        for i, r in enumerate(ents):
            for j, x in enumerate(r):
                for k, a in enumerate(x.promote(m).coeffs):
                    c[i, j, k] = int(a * denom)
        return cls(m, c, e)

    @classmethod
    def scalar(cls, x: CycloNum) -> "CycloMatrix":
        return cls.from_entries([[x]])

    def promote(self, m: int) -> "CycloMatrix":
        if m < self.m:
            raise OrderError(f"cannot demote order 2^{self.m} to 2^{m}")
        if m == self.m:
            return self
        step = 1 << (m - self.m)
        c = np.zeros(self.coeffs.shape[:2] + (_nlen(m),), dtype=object)
        c[..., ::step] = self.coeffs
        return CycloMatrix(m, c, self.e)

    def _with_e(self, e: int) -> np.ndarray:
        return self.coeffs * (1 << (e - self.e))

    @staticmethod
    def _align(a: "CycloMatrix", b: "CycloMatrix"):
        m = max(a.m, b.m)
        a, b = a.promote(m), b.promote(m)
        e = max(a.e, b.e)
        return m, e, a._with_e(e), b._with_e(e)

    def __getitem__(self, ij) -> CycloNum:
        i, j = ij
        return CycloNum(self.m, [Fraction(int(x), 1 << self.e) for x in self.coeffs[i, j]])

    def __add__(self, other: "CycloMatrix") -> "CycloMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        m, e, a, b = self._align(self, other)
        return CycloMatrix(m, a + b, e)

    def __neg__(self) -> "CycloMatrix":
        return CycloMatrix(self.m, -self.coeffs, self.e)

    def __sub__(self, other: "CycloMatrix") -> "CycloMatrix":
        return self + (-other)

    def __matmul__(self, other: "CycloMatrix") -> "CycloMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        m = max(self.m, other.m)
        a, b = self.promote(m), other.promote(m)
        out = _negacyclic(a.coeffs, b.coeffs, np.dot)
        if out is None:
            return CycloMatrix.zeros(self.shape[0], other.shape[1], m)
        return CycloMatrix(m, out, a.e + b.e)

    def kron(self, other: "CycloMatrix") -> "CycloMatrix":
        m = max(self.m, other.m)
        a, b = self.promote(m), other.promote(m)
        (r1, c1), (r2, c2) = a.shape, b.shape

        def op(x, y):
            return np.multiply.outer(x, y).transpose(0, 2, 1, 3).reshape(r1 * r2, c1 * c2)

        out = _negacyclic(a.coeffs, b.coeffs, op)
        if out is None:
            return CycloMatrix.zeros(r1 * r2, c1 * c2, m)
        return CycloMatrix(m, out, a.e + b.e)

    def scale(self, x: CycloNum) -> "CycloMatrix":
        return CycloMatrix.scalar(x).kron(self)

    def conj(self) -> "CycloMatrix":
        n = _nlen(self.m)
        c = np.zeros_like(self.coeffs)
        c[..., 0] = self.coeffs[..., 0]
        for j in range(1, n):
            c[..., n - j] = -self.coeffs[..., j]
        return CycloMatrix(self.m, c, self.e)

    def dagger(self) -> "CycloMatrix":
        return CycloMatrix(self.m, self.conj().coeffs.transpose(1, 0, 2), self.e)

    def is_zero(self) -> bool:
        return not any(int(x) for x in self.coeffs.flat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycloMatrix):
            return NotImplemented
        return mat_eq(self, other)

    __hash__ = None

    def to_complex(self) -> np.ndarray:
        n = _nlen(self.m)
        w = np.exp(1j * np.pi * np.arange(n) / n)
        return (self.coeffs.astype(float) @ w) / float(1 << self.e)

    def __repr__(self) -> str:
        return f"CycloMatrix(order=2^{self.m}, shape={self.shape})"

    def dumps(self) -> str:
        return dumps_matrix(self)


def mat_eq(a: CycloMatrix, b: CycloMatrix) -> bool:
    if a.shape != b.shape:
        return False
    _, _, x, y = CycloMatrix._align(a, b)
    return bool(np.all(x == y))


def mat_eq_approx(a, b, tol: float = 1e-9) -> bool:
    a = a.to_complex() if isinstance(a, CycloMatrix) else np.asarray(a, dtype=complex)
    b = b.to_complex() if isinstance(b, CycloMatrix) else np.asarray(b, dtype=complex)
    return a.shape == b.shape and (a.size == 0 or float(np.max(np.abs(a - b))) <= tol)


# ---------------------------------------------------------------------------
# interpretation


def _assignments(nv: int):
    total = 1 << nv
    shifts = np.arange(nv - 1, -1, -1, dtype=np.int64) if nv else np.zeros(0, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        yield ((idx[:, None] >> shifts[None, :]) & 1).astype(np.int64)


def _mono_values(bits: np.ndarray, col: dict, m: Monomial) -> np.ndarray:
    if not m:
        return np.ones(bits.shape[0], dtype=np.int64)
    v = bits[:, col[m[0]]]
    for x in m[1:]:
        v = v & bits[:, col[x]]
    return v


def _index(bits, col, polys: Sequence[BoolPoly]) -> np.ndarray:
    idx = np.zeros(bits.shape[0], dtype=np.int64)
    for q in polys:
        b = np.zeros(bits.shape[0], dtype=np.int64)
        for m in q.monomials:
            b ^= _mono_values(bits, col, m)
        idx = (idx << 1) | b
    return idx


def _check_cap(t: SopTerm, cap: Optional[int]) -> None:
    cap = DEFAULT_VAR_CAP if cap is None else cap
    if len(t.vars) > cap:
        raise VariableCapError(f"{len(t.vars)} variables exceed the cap of {cap}")


def interp(t: SopTerm, cap: Optional[int] = None) -> CycloMatrix:
    """Exact value of a dyadic term, by summing over every assignment."""
    _check_cap(t, cap)
    k = phase_level(t.phase)
    if k is None:
        raise NonDyadicError("phase is not dyadic; use interp_approx")
    n_ph = 1 << k
    rows, cols = 1 << t.n_out, 1 << t.n_in
    col = {v: i for i, v in enumerate(t.vars)}
    terms = [(m, int(c * n_ph)) for m, c in t.phase.items()]
    counts = np.zeros(rows * cols * n_ph, dtype=np.int64)
    for bits in _assignments(len(t.vars)):
        ph = np.zeros(bits.shape[0], dtype=np.int64)
        for m, a in terms:
            ph += a * _mono_values(bits, col, m)
        ph %= n_ph
        r = _index(bits, col, t.outs)
        c = _index(bits, col, t.ins)
        counts += np.bincount((r * cols + c) * n_ph + ph, minlength=counts.size)
    counts = counts.reshape(rows, cols, n_ph)
    half = n_ph // 2
    coeffs = (counts[..., :half] - counts[..., half:]).astype(object)
    p = t.scalar
    odd = p % 2
    e = (p - odd) // 2
    out = CycloMatrix(k, coeffs, e)
    if odd:
        out = out.scale(CycloNum.inv_sqrt2())
    return out


def interp_approx(t: SopTerm, cap: Optional[int] = None) -> np.ndarray:
    """Double-precision value of any term (rational phases allowed)."""
    _check_cap(t, cap)
    rows, cols = 1 << t.n_out, 1 << t.n_in
    col = {v: i for i, v in enumerate(t.vars)}
    terms = [(m, float(c)) for m, c in t.phase.items()]
    re = np.zeros(rows * cols)
    im = np.zeros(rows * cols)
    for bits in _assignments(len(t.vars)):
        ph = np.zeros(bits.shape[0])
        for m, a in terms:
            ph += a * _mono_values(bits, col, m)
        amp = np.exp(2j * np.pi * ph)
        idx = _index(bits, col, t.outs) * cols + _index(bits, col, t.ins)
        re += np.bincount(idx, weights=amp.real, minlength=re.size)
        im += np.bincount(idx, weights=amp.imag, minlength=im.size)
    return (re + 1j * im).reshape(rows, cols) * (2.0 ** (-t.scalar / 2))


class _Factor:
    __slots__ = ("labels", "arr")

    def __init__(self, labels, arr):
        self.labels = list(labels)
        self.arr = arr


def _fmul(a: _Factor, b: _Factor, n: int) -> _Factor:
    labels = a.labels + [x for x in b.labels if x not in a.labels]
    r = len(labels)

    def spread(f):
        # move f's axes to their place in ``labels``, size-1 elsewhere
        src = f.arr
        order = sorted(range(len(f.labels)), key=lambda i: labels.index(f.labels[i]))
        src = np.transpose(src, order + [len(f.labels)])
        shape = [1] * r + [n]
        for i in order:
            shape[labels.index(f.labels[i])] = 2
        return src.reshape(shape)

    x, y = spread(a), spread(b)
    out = np.zeros(np.broadcast_shapes(x.shape[:-1], y.shape[:-1]) + (n,), dtype=np.int64)
    for i in range(n):
        xi = x[..., i]
        if not xi.any():
            continue
        for j in range(n):
            yj = y[..., j]
            if not yj.any():
                continue
            k = i + j
            if k >= n:
                out[..., k - n] -= xi * yj
            else:
                out[..., k] += xi * yj
    return _Factor(labels, out)


def interp_contract(t: SopTerm, max_rank: int = 24) -> CycloMatrix:
    """Exact value of a dyadic term by summing variables out one at a time.

    Every phase monomial and every boundary polynomial is a small factor;
    variables are eliminated greedily, smallest resulting factor first.  This
    agrees with :func:`interp` and stays cheap for terms with many variables
    as long as they interact sparsely.
    """
    k = phase_level(t.phase)
    if k is None:
        raise NonDyadicError("phase is not dyadic; use interp_approx")
    if len(t.vars) > 60:
        raise VariableCapError("too many variables for 64-bit path counts")
    n = _nlen(k)
    full = 1 << k
    factors: List[_Factor] = []
    for m, c in t.phase.items():
        a = int(c * full) % full
        arr = np.zeros((2,) * len(m) + (n,), dtype=np.int64)
        arr[..., 0] = 1
        arr[(1,) * len(m)] = 0
        arr[(1,) * len(m) + (a % n,)] = -1 if a >= n else 1
        factors.append(_Factor(m, arr))
    for tag, polys in (("o", t.outs), ("i", t.ins)):
        for i, q in enumerate(polys):
            vs = sorted(q.vars())
            if len(vs) + 1 > max_rank:
                raise VariableCapError("boundary polynomial too wide")
            arr = np.zeros((2,) * (len(vs) + 1) + (n,), dtype=np.int64)
            for bits in itertools.product((0, 1), repeat=len(vs)):
                val = q.eval(dict(zip(vs, bits)))
                arr[(val,) + bits + (0,)] = 1
            factors.append(_Factor([(tag, i)] + vs, arr))
    free = [v for v in t.vars]
    while free:
        best = None
        for v in free:
            touching = [f for f in factors if v in f.labels]
            width = len({x for f in touching for x in f.labels}) - 1
            if best is None or width < best[0]:
                best = (width, v, touching)
        width, v, touching = best
        if width > max_rank:
            raise VariableCapError(f"elimination needs a factor of rank {width}")
        free.remove(v)
        if not touching:
            acc = _Factor([], np.array([2] + [0] * (n - 1), dtype=np.int64))
        else:
            acc = touching[0]
            for f in touching[1:]:
                acc = _fmul(acc, f, n)
            ax = acc.labels.index(v)
            acc = _Factor([x for x in acc.labels if x != v], acc.arr.sum(axis=ax))
        factors = [f for f in factors if v not in f.labels] + [acc]
    acc = _Factor([], np.array([1] + [0] * (n - 1), dtype=np.int64))
    for f in factors:
        acc = _fmul(acc, f, n)
    want = [("o", i) for i in range(t.n_out)] + [("i", j) for j in range(t.n_in)]
    arr = np.transpose(acc.arr, [acc.labels.index(x) for x in want] + [len(want)])
    arr = arr.reshape(1 << t.n_out, 1 << t.n_in, n).astype(object)
    p = t.scalar
    odd = p % 2
    out = CycloMatrix(k, arr, (p - odd) // 2)
    if odd:
        out = out.scale(CycloNum.inv_sqrt2())
    return out


def psi_k(mat: CycloMatrix, k: int) -> CycloMatrix:
    """Encode a matrix over order 2^(k+1) as one of twice the size over order 2^k.

    Each entry x = x1 + e^{i pi/2^k} x2 becomes x1 I2 + x2 X_k with
    X_k = [[0, 1], [e^{i pi/2^(k-1)}, 0]].
    """
    if k < 1:
        raise OrderError("k must be at least 1")
    if mat.m > k + 1:
        raise OrderError(f"matrix over order 2^{mat.m} is not at order 2^{k + 1}")
    mat = mat.promote(k + 1)
    a = CycloMatrix(k, mat.coeffs[..., 0::2], mat.e)
    b = CycloMatrix(k, mat.coeffs[..., 1::2], mat.e)
    xk = CycloMatrix.from_entries([[0, 1], [CycloNum.omega(k, 1), 0]])
    return a.kron(CycloMatrix.identity(2, k)) + b.kron(xk)


# ---------------------------------------------------------------------------
# text dumps


def _dyadic(a: int, e: int) -> str:
    while e > 0 and a % 2 == 0:
        a //= 2
        e -= 1
    return str(a) if e == 0 else f"{a}/2^{e}"


def dumps_matrix(mat: CycloMatrix) -> str:
    rows, cols = mat.shape
    lines = [f"cyclo order=2^{mat.m} {rows} {cols}"]
    for i in range(rows):
        ents = []
        for j in range(cols):
            ents.append(",".join(_dyadic(int(x), mat.e) for x in mat.coeffs[i, j]) + "|")
        lines.append("".join(ents))
    return "\n".join(lines) + "\n"


def loads_matrix(text: str) -> CycloMatrix:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip() and not ln.startswith("#")]
    head = lines[0].split()
    if head[0] != "cyclo" or not head[1].startswith("order=2^"):
        raise ValueError("not a cyclotomic matrix dump")
    m = int(head[1][len("order=2^"):])
    rows, cols = int(head[2]), int(head[3])
    ents = []
    for ln in lines[1 : 1 + rows]:
        row = []
        for ent in ln.split("|")[:cols]:
            cs = []
            for a in ent.split(","):
                num, _, den = a.partition("/2^")
                cs.append(Fraction(int(num), 1 << int(den or 0)))
            row.append(CycloNum(m, cs))
        ents.append(row)
    out = CycloMatrix.from_entries(ents) if rows else CycloMatrix.zeros(0, cols, m)
    return out.promote(m) if out.m < m else out


def dumps_float(a: np.ndarray) -> str:
    a = np.asarray(a, dtype=complex)
    return "".join(",".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row) + "\n" for row in a)
