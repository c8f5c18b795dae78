"""Controlled terms, and sums and concatenations built from them.

A controlled term has one extra input wire, placed first.  With the control
set to 0 it is the all-ones map; with the control set to 1 it is the
controlee.  Sums and concatenations of controlees are then plain diagrams of
controlled terms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .poly import BoolPoly, PhasePoly, scaled_hat
from .rewrite import simplify
from .semantics import CycloNum, NonDyadicError, interp
from .term import SopTerm, compose, compose_all, dagger, mk_identity, mk_ket, mk_swap, tensor, tensor_all

HALF = Fraction(1, 2)


class ControlError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalars


@dataclass(frozen=True)
class ScalarSpec:
    """s = 2^n cos(alpha pi) e^{i theta pi}, or 0.

    For the primed control the magnitude is (2^n - 1) cos(alpha pi) instead.
    ``alpha`` and ``theta`` are rationals (multiples of pi).
    """

    zero: bool = False
    n: int = 0
    alpha: Fraction = Fraction(0)
    theta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "theta", Fraction(self.theta) % 2)
        if not self.zero and not 0 <= self.alpha < HALF:
            raise ValueError("alpha must lie in [0, pi/2)")

    @classmethod
    def zero_spec(cls) -> "ScalarSpec":
        return cls(zero=True)

    @classmethod
    def from_sqrt2_power(cls, p: int, theta=0) -> "ScalarSpec":
        """s = (1/sqrt2)^p e^{i theta pi}."""
        if p % 2 == 0:
            return cls(n=-p // 2, alpha=Fraction(0), theta=theta)
        return cls(n=(1 - p) // 2, alpha=Fraction(1, 4), theta=theta)

    @classmethod
    def from_complex(cls, s: complex, primed: bool = False, max_den: int = 64, tol: float = 1e-9) -> "ScalarSpec":
        """Recognize s with rational alpha/pi and theta/pi; reject otherwise."""
        if abs(s) < tol:
            return cls.zero_spec()
        r = abs(s)
        n = math.ceil(math.log2(r + 1)) if primed else math.ceil(math.log2(r) - 1e-12)
        top = (2**n - 1) if primed else 2.0**n
        alpha = Fraction(math.acos(min(1.0, r / top)) / math.pi).limit_denominator(max_den)
        theta = Fraction(cmath.phase(s) / math.pi).limit_denominator(max_den)
        if alpha >= HALF:
            raise ValueError(f"{s} has no representable control")
        spec = cls(n=n, alpha=alpha, theta=theta)
        if abs(spec.value(primed) - s) > tol:
            raise ValueError(f"{s} is not 2^n cos(a pi) e^(i b pi) with small rationals a, b")
        return spec

    def value(self, primed: bool = False) -> complex:
        if self.zero:
            return 0j
        top = (2**self.n - 1) if primed else 2.0**self.n
        return top * math.cos(math.pi * self.alpha) * cmath.exp(1j * math.pi * self.theta)


def _ctrl_phase(spec: ScalarSpec, y0: int, yp: int) -> PhasePoly:
    # alpha/pi y0 y' + (theta - alpha)/(2 pi) y0
    return PhasePoly({(y0, yp): spec.alpha, (y0,): (spec.theta - spec.alpha) / 2})


def ctrl_scalar(spec: ScalarSpec) -> SopTerm:
    """1 -> 0 term whose matrix is <0| + s <1|."""
    if spec.zero:
        return SopTerm(0, (), PhasePoly.zero(), (), (BoolPoly.zero(),))
    n = spec.n
    k = abs(n)
    y0, yp = 0, 1
    ys = list(range(2, 2 + k))
    yq = list(range(2 + k, 2 + 2 * k))
    terms = {(y0, a, b): HALF for a, b in zip(ys, yq)}
    if n >= 0:
        # y_i y_i' (1 + y0) / 2
        terms.update({(a, b): HALF for a, b in zip(ys, yq)})
        p = 2 * (n + 1)
    else:
        p = 2 - 4 * n
    ph = PhasePoly(terms) + _ctrl_phase(spec, y0, yp)
    return SopTerm(p, tuple([y0, yp] + ys + yq), ph, (), (BoolPoly.var(y0),))


def ctrl_scalar_prime(spec: ScalarSpec) -> SopTerm:
    """1 -> 0 term with matrix <0| + s <1|, s = (2^n - 1) cos(alpha pi) e^{i theta pi}."""
    if spec.zero:
        return SopTerm(0, (), PhasePoly.zero(), (), (BoolPoly.zero(),))
    if spec.n < 1:
        raise ControlError("the primed control needs n >= 1")
    y0, yp, ypp = 0, 1, 2
    ys = tuple(range(3, 3 + spec.n))
    ph = PhasePoly({ys + (ypp,): HALF, (ypp,): HALF, (y0, ypp): HALF}) + _ctrl_phase(spec, y0, yp)
    return SopTerm(4, (y0, yp, ypp) + ys, ph, (), (BoolPoly.var(y0),))


# ---------------------------------------------------------------------------
# controlled terms


@dataclass(frozen=True)
class ControlledTerm:
    inner: SopTerm
    note: str = ""

    @property
    def n_in(self) -> int:
        return self.inner.n_in - 1

    @property
    def n_out(self) -> int:
        return self.inner.n_out

    def slice(self, b: int, reduce: bool = True) -> SopTerm:
        """Control fixed to ``b``; reduced with sound rules unless ``reduce`` is off."""
        t = compose(self.inner, tensor(mk_ket([b]), mk_identity(self.n_in)))
        return simplify(t, "th-prime")[0] if reduce else t

    def controlee(self, reduce: bool = True) -> SopTerm:
        return self.slice(1, reduce)


def is_controlled(inner: SopTerm, cap: Optional[int] = None) -> bool:
    """Exact check that the control-0 slice is the all-ones matrix."""
    c = ControlledTerm(inner)
    m = interp(c.slice(0), cap)
    if m.e != 0 or m.coeffs.size == 0:
        return False
    return bool((m.coeffs[..., 0] == 1).all() and (m.coeffs[..., 1:] == 0).all())


def mk_cp(n: int) -> SopTerm:
    """sum |y, y><y|, copying n wires."""
    ys = tuple(BoolPoly.var(i) for i in range(n))
    return SopTerm(0, tuple(range(n)), PhasePoly.zero(), ys + ys, ys)


def mk_tplus() -> SopTerm:
    y0, y1, y3 = (BoolPoly.var(i) for i in (0, 1, 3))
    return SopTerm(2, (0, 1, 3), PhasePoly({(0, 1, 3): HALF}), (y0, y1), (y0 ^ y1,))


def mk_tc() -> SopTerm:
    y0, y1 = BoolPoly.var(0), BoolPoly.var(1)
    return SopTerm(0, (0, 1), PhasePoly.zero(), (y0, y0 * y1 ^ y1, y0 * y1), (y1,))


def _lambda_tilde(t: SopTerm) -> Tuple[SopTerm, int]:
    """Unscaled controlled core of t, and the number of summed variables of t."""
    n, m = t.n_in, t.n_out
    base = t.max_var() + 1
    x0 = base
    x1 = list(range(base + 1, base + 1 + m))
    x2 = list(range(base + 1 + m, base + 1 + m + n))
    X0 = BoolPoly.var(x0)
    phase = t.phase.times_monomial((x0,))
    outs = tuple(X0 * o ^ BoolPoly.var(a) ^ X0 * BoolPoly.var(a) for o, a in zip(t.outs, x1))
    ins = (X0,) + tuple(X0 * i ^ BoolPoly.var(a) ^ X0 * BoolPoly.var(a) for i, a in zip(t.ins, x2))
    nv = len(t.vars)
    core = SopTerm(2 * nv, t.vars + (x0,) + tuple(x1) + tuple(x2), phase, outs, ins)
    return core, nv


def _attach_scalar(lam: SopTerm, core: SopTerm, n: int) -> SopTerm:
    # (lam (x) core) . (cp_1 (x) id_n)
    return compose(tensor(lam, core), tensor(mk_cp(1), mk_identity(n)))


def ctrl_term(t: SopTerm, scalar_control: str = "standard") -> ControlledTerm:
    """Generic control of any term with a sqrt2-power scalar.

    ``scalar_control="prime"`` controls the compensating scalar with the
    primed construction, which only works when its angle is a rational
    multiple of pi.
    """
    n, m = t.n_in, t.n_out
    core, nv = _lambda_tilde(t)
    # s 2^(|y| - n - m) as a power of 1/sqrt2
    p = t.scalar - 2 * nv + 2 * (n + m)
    if scalar_control == "standard":
        lam = ctrl_scalar(ScalarSpec.from_sqrt2_power(p))
    elif scalar_control == "prime":
        try:
            spec = ScalarSpec.from_complex(2 ** (-p / 2), primed=True)
        except ValueError as e:
            raise ControlError(f"primed scalar control unavailable: {e}") from None
        lam = ctrl_scalar_prime(spec)
    else:
        raise ValueError(f"unknown scalar control {scalar_control!r}")
    return ControlledTerm(_attach_scalar(lam, core, n), f"ctrl_term/{scalar_control}")


def _target(rho_p: int, theta: Fraction) -> CycloNum:
    x = CycloNum.from_int(1)
    r = CycloNum.inv_sqrt2() if rho_p >= 0 else CycloNum.inv_sqrt2() * CycloNum.from_int(2)
    for _ in range(abs(rho_p)):
        x = x * r
    half = Fraction(theta) / 2
    d = half.denominator
    k = d.bit_length() - 1
    if 1 << k != d:
        raise NonDyadicError("theta must be a dyadic multiple of pi")
    if k:
        x = x * CycloNum.omega(k, half.numerator)
    return x


def ctrl_term_hint(t: SopTerm, v1: Sequence[int], v2: Sequence[int], rho_p: int, theta, check: bool = True) -> ControlledTerm:
    """Control of ``t`` using one known non-zero entry <v1|t|v2> = rho e^{i theta pi},
    with rho = (1/sqrt2)^rho_p.

    The scalar of ``t`` is absorbed in the core and the scalar control only
    carries rho e^{i theta pi}, which keeps the control-0 slice at all-ones
    whatever the scalar of ``t``.
    """
    n, m = t.n_in, t.n_out
    theta = Fraction(theta)
    if len(v1) != m or len(v2) != n:
        raise ControlError(f"hint vectors must have lengths {m} and {n}")
    if check:
        entry = interp(t)[_bits_index(v1), _bits_index(v2)]
        if entry != _target(rho_p, theta):
            raise ControlError(f"<v1|t|v2> = {complex(entry):.6g} does not match the hint")
    base = t.max_var() + 1
    x0 = base
    x1 = list(range(base + 1, base + 1 + m))
    x2 = list(range(base + 1 + m, base + 1 + m + n))
    x1p = list(range(base + 1 + m + n, base + 1 + 2 * m + n))
    x2p = list(range(base + 1 + 2 * m + n, base + 1 + 2 * m + 2 * n))
    phase = t.phase + PhasePoly({(): -theta / 2})

    def gadget(polys, xs, xps, vs):
        ph = PhasePoly.zero()
        for q, a, ap, v in zip(polys, xs, xps, vs):
            ph = ph + scaled_hat(q, HALF, (ap,))
            terms = {tuple(sorted((a, ap))): HALF, tuple(sorted((x0, a, ap))): HALF}
            if v:
                terms[tuple(sorted((x0, ap)))] = HALF
            ph = ph + PhasePoly(terms)
        return ph

    phase = phase + gadget(t.outs, x1, x1p, v1) + gadget(t.ins, x2, x2p, v2)
    X0 = BoolPoly.var(x0)
    core = SopTerm(
        t.scalar - rho_p + 2 * (n + m),
        t.vars + (x0,) + tuple(x1 + x2 + x1p + x2p),
        phase,
        tuple(BoolPoly.var(a) for a in x1),
        (X0 ^ BoolPoly.one(),) + tuple(BoolPoly.var(a) for a in x2),
    )
    lam = ctrl_scalar(ScalarSpec.from_sqrt2_power(rho_p, theta))
    return ControlledTerm(_attach_scalar(lam, core, n), "ctrl_term_hint")


def _bits_index(bits: Sequence[int]) -> int:
    i = 0
    for b in bits:
        i = 2 * i + int(b)
    return i


def _check_same(c1: ControlledTerm, c2: ControlledTerm) -> Tuple[int, int]:
    if (c1.n_in, c1.n_out) != (c2.n_in, c2.n_out):
        raise ControlError(f"arity mismatch: {c1.n_in}->{c1.n_out} vs {c2.n_in}->{c2.n_out}")
    return c1.n_in, c1.n_out


def ctrl_sum(c1: ControlledTerm, c2: ControlledTerm) -> ControlledTerm:
    """Controlled term whose controlee is the sum of both controlees."""
    n, m = _check_same(c1, c2)
    t = compose_all(
        dagger(mk_cp(m)),
        tensor(c1.inner, c2.inner),
        tensor_all(mk_identity(1), mk_swap(1, n), mk_identity(n)),
        tensor(mk_tplus(), mk_cp(n)),
    )
    return ControlledTerm(t, "ctrl_sum")


def ctrl_concat(c1: ControlledTerm, c2: ControlledTerm) -> ControlledTerm:
    """Controlled term whose controlee is |0> (x) controlee1 + |1> (x) controlee2."""
    n, m = _check_same(c1, c2)
    t = compose_all(
        tensor(mk_identity(1), dagger(mk_cp(m))),
        tensor_all(mk_identity(1), c1.inner, c2.inner),
        tensor_all(mk_identity(2), mk_swap(1, n), mk_identity(n)),
        tensor(mk_tc(), mk_cp(n)),
    )
    return ControlledTerm(t, "ctrl_concat")


def _controlled_pipeline(c: ControlledTerm, rules: str) -> SopTerm:
    out, _ = simplify(c.controlee(reduce=False), rules)
    return out


def add_terms(t0: SopTerm, t1: SopTerm, rules: str = "th-prime") -> SopTerm:
    """Term whose matrix is the sum of both matrices."""
    return _controlled_pipeline(ctrl_sum(ctrl_term(t0), ctrl_term(t1)), rules)


def concat_terms(t0: SopTerm, t1: SopTerm, rules: str = "th-prime") -> SopTerm:
    """Term whose matrix is |0> (x) t0 + |1> (x) t1."""
    return _controlled_pipeline(ctrl_concat(ctrl_term(t0), ctrl_term(t1)), rules)
