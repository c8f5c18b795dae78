"""Multilinear polynomials over F2 (boolean, in ANF) and over Q mod 1 (phases).

Monomials are sorted tuples of variable indices; the empty tuple is the
constant monomial.  Every value here is immutable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

Monomial = Tuple[int, ...]
Rational = Union[int, Fraction]

ONE: Monomial = ()


class MissingVariableError(KeyError):
    """An assignment does not cover a variable of the polynomial."""


def mono(*vs: int) -> Monomial:
    return tuple(sorted(set(vs)))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b or a == b:
        return a
    return tuple(sorted(set(a).union(b)))


def mono_str(m: Monomial) -> str:
    return "*".join(f"y{v}" for v in m) if m else "1"


def _mono_key(m: Monomial):
    # graded lexicographic order, used for every printed or iterated form
    return (len(m), m)


def _eval_mono(m: Monomial, a: Mapping[int, int]) -> int:
    try:
        for v in m:
            if not a[v]:
                return 0
    except KeyError as e:
        raise MissingVariableError(f"no value for y{e.args[0]}") from None
    return 1


class BoolPoly:
    """Polynomial over the binary field, stored as its set of ANF monomials."""

    __slots__ = ("monomials", "_hash")

    def __init__(self, monomials: Iterable[Iterable[int]] = ()):
        acc: set = set()
        for m in monomials:
            m = m if isinstance(m, tuple) and _is_sorted(m) else mono(*m)
            acc ^= {m}
        self.monomials = frozenset(acc)
        self._hash = None

    @classmethod
    def _raw(cls, monomials: frozenset) -> "BoolPoly":
        p = cls.__new__(cls)
        p.monomials = monomials
        p._hash = None
        return p

    @classmethod
    def zero(cls) -> "BoolPoly":
        return _ZERO

    @classmethod
    def one(cls) -> "BoolPoly":
        return _ONE

    @classmethod
    def var(cls, v: int) -> "BoolPoly":
        return cls._raw(frozenset([(v,)]))

    @classmethod
    def const(cls, bit: int) -> "BoolPoly":
        return _ONE if bit & 1 else _ZERO

    def __xor__(self, other: "BoolPoly") -> "BoolPoly":
        return BoolPoly._raw(self.monomials ^ other.monomials)

    __add__ = __xor__

    def __mul__(self, other: "BoolPoly") -> "BoolPoly":
        acc: set = set()
        for a in self.monomials:
            for b in other.monomials:
                acc ^= {mono_mul(a, b)}
        return BoolPoly._raw(frozenset(acc))

    __and__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, BoolPoly) and self.monomials == other.monomials

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.monomials)
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(sorted(self.monomials, key=_mono_key))

    def __len__(self) -> int:
        return len(self.monomials)

    def vars(self) -> frozenset:
        return frozenset(v for m in self.monomials for v in m)

    def degree(self) -> int:
        return max((len(m) for m in self.monomials), default=0)

    def is_var(self) -> bool:
        return len(self.monomials) == 1 and len(next(iter(self.monomials))) == 1

    def subst(self, v: int, r: "BoolPoly") -> "BoolPoly":
        return bp_subst(self, v, r)

    def eval(self, assignment: Mapping[int, int]) -> int:
        return bp_eval(self, assignment)

    def rename(self, mapping: Mapping[int, int]) -> "BoolPoly":
        return BoolPoly(tuple(mapping.get(v, v) for v in m) for m in self.monomials)

    def __str__(self) -> str:
        return " ^ ".join(mono_str(m) for m in self) if self.monomials else "0"

    def __repr__(self) -> str:
        return f"BoolPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "BoolPoly":
        text = text.strip()
        if not text:
            raise ValueError("empty boolean polynomial")
        acc = []
        for term in text.split("^"):
            vs = []
            const = 1
            for f in term.split("*"):
                f = f.strip()
                if f == "1":
                    continue
                if f == "0":
                    const = 0
                    continue
                if not _VAR_RE.fullmatch(f):
                    raise ValueError(f"bad boolean factor {f!r}")
                vs.append(int(f[1:]))
            if const:
                acc.append(mono(*vs))
        return cls(acc)


def _is_sorted(m: tuple) -> bool:
    return all(m[i] < m[i + 1] for i in range(len(m) - 1))


_ZERO = BoolPoly._raw(frozenset())
_ONE = BoolPoly._raw(frozenset([ONE]))
_VAR_RE = re.compile(r"y\d+")


def bp_add(a: BoolPoly, b: BoolPoly) -> BoolPoly:
    return a ^ b


def bp_mul(a: BoolPoly, b: BoolPoly) -> BoolPoly:
    return a * b


def bp_subst(p: BoolPoly, v: int, r: BoolPoly) -> BoolPoly:
    keep = set()
    touched = []
    for m in p.monomials:
        if v in m:
            touched.append(tuple(x for x in m if x != v))
        else:
            keep.add(m)
    if not touched:
        return p
    acc = keep
    for rest in touched:
        for rm in r.monomials:
            acc ^= {mono_mul(rest, rm)}
    return BoolPoly._raw(frozenset(acc))


def bp_eval(p: BoolPoly, assignment: Mapping[int, int]) -> int:
    bit = 0
    for m in p.monomials:
        bit ^= _eval_mono(m, assignment)
    return bit


class RealPoly:
    """Multilinear polynomial with exact rational coefficients, not reduced mod 1.

    Used for hat images, whose integer coefficients (such as the -2 of an
    XOR) only disappear once the polynomial is multiplied by something and
    read as a phase.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        self.terms: Dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            if c:
                self.terms[m] = Fraction(c)

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "RealPoly":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def monomial(cls, m: Monomial, c: Rational = 1) -> "RealPoly":
        return cls({m: c})

    def __add__(self, other: "RealPoly") -> "RealPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return RealPoly._raw(out)

    def __neg__(self) -> "RealPoly":
        return RealPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "RealPoly") -> "RealPoly":
        return self + (-other)

    def __mul__(self, other: Union["RealPoly", Rational]) -> "RealPoly":
        if not isinstance(other, RealPoly):
            c = Fraction(other)
            return RealPoly._raw({m: a * c for m, a in self.terms.items()} if c else {})
        out: Dict[Monomial, Fraction] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                m = mono_mul(a, b)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return RealPoly._raw(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, RealPoly) and self.terms == other.terms

    def mod1(self) -> "PhasePoly":
        return PhasePoly(self.terms)

    def eval(self, assignment: Mapping[int, int]) -> Fraction:
        return sum((c for m, c in self.terms.items() if _eval_mono(m, assignment)), Fraction(0))

    def __str__(self) -> str:
        return _poly_str(self.terms)

    def __repr__(self) -> str:
        return f"RealPoly({str(self)!r})"


class PhasePoly:
    """Multilinear polynomial with rational coefficients reduced into [0, 1)."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Rational] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: Dict[Monomial, Fraction] = {}
        for m, c in items:
            m = m if isinstance(m, tuple) and _is_sorted(m) else mono(*m)
            s = (out.get(m, 0) + Fraction(c)) % 1
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        self.terms = out
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "PhasePoly":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls) -> "PhasePoly":
        return cls._raw({})

    @classmethod
    def monomial(cls, m: Iterable[int], c: Rational) -> "PhasePoly":
        return cls({mono(*m): c})

    def __add__(self, other: "PhasePoly") -> "PhasePoly":
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = (out.get(m, 0) + c) % 1
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return PhasePoly._raw(out)

    def __neg__(self) -> "PhasePoly":
        return PhasePoly._raw({m: (1 - c) for m, c in self.terms.items()})

    def __sub__(self, other: "PhasePoly") -> "PhasePoly":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, PhasePoly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        return sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0]))

    def coeff(self, m: Iterable[int]) -> Fraction:
        return self.terms.get(mono(*m), Fraction(0))

    def vars(self) -> frozenset:
        return frozenset(v for m in self.terms for v in m)

    def scale(self, c: Rational) -> "PhasePoly":
        return pp_scale(self, c)

    def times_monomial(self, m: Monomial) -> "PhasePoly":
        """Product with a boolean monomial, always sound on reduced phases."""
        return PhasePoly((mono_mul(a, m), c) for a, c in self.terms.items())

    def subst(self, v: int, r: BoolPoly) -> "PhasePoly":
        return pp_subst(self, v, r)

    def eval(self, assignment: Mapping[int, int]) -> Fraction:
        return pp_eval(self, assignment)

    def rename(self, mapping: Mapping[int, int]) -> "PhasePoly":
        return PhasePoly((tuple(mapping.get(v, v) for v in m), c) for m, c in self.terms.items())

    def denominator(self) -> int:
        d = 1
        for c in self.terms.values():
            d = d * c.denominator // _gcd(d, c.denominator)
        return d

    def to_real(self) -> RealPoly:
        return RealPoly._raw(dict(self.terms))

    def __str__(self) -> str:
        return _poly_str(self.terms)

    def __repr__(self) -> str:
        return f"PhasePoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "PhasePoly":
        return RealPoly_parse(text).mod1()


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _poly_str(terms: Mapping[Monomial, Fraction]) -> str:
    if not terms:
        return "0"
    parts = []
    for m, c in sorted(terms.items(), key=lambda mc: _mono_key(mc[0])):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not m:
            body = str(a)
        elif a == 1:
            body = mono_str(m)
        else:
            body = f"{a}*{mono_str(m)}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def RealPoly_parse(text: str) -> RealPoly:
    text = text.strip()
    if text in ("", "0"):
        return RealPoly()
    out = RealPoly()
    pos = 0
    while pos < len(text):
        mt = _TERM_RE.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"bad phase polynomial near {text[pos:]!r}")
        pos = mt.end()
        sign = -1 if mt.group(1) == "-" else 1
        coef = Fraction(sign)
        vs = []
        for f in mt.group(2).split("*"):
            f = f.strip()
            if _VAR_RE.fullmatch(f):
                vs.append(int(f[1:]))
            else:
                try:
                    coef *= Fraction(f)
                except (ValueError, ZeroDivisionError):
                    raise ValueError(f"bad phase factor {f!r}") from None
        out = out + RealPoly.monomial(mono(*vs), coef)
    return out


def hat(q: BoolPoly) -> RealPoly:
    """Integer-coefficient polynomial agreeing with ``q`` on every boolean point."""
    acc = RealPoly()
    for m in q:
        mp = RealPoly.monomial(m)
        acc = acc + mp - (acc * mp) * 2
    return acc


def scaled_hat(q: BoolPoly, c: Rational, times: Monomial = ONE) -> PhasePoly:
    """``c * hat(q) * times`` read as a phase.

    Intermediate sums are reduced mod 1 as soon as they only get multiplied
    by integers and boolean monomials, which keeps e.g. ``1/2 * hat(q)`` to the
    monomials of ``q``.
    """
    c = Fraction(c)
    acc = PhasePoly.zero()
    for m in q:
        m = mono_mul(m, times)
        term = PhasePoly._raw({m: c % 1}) if c % 1 else PhasePoly.zero()
        cross = acc.times_monomial(m)
        acc = acc + term + PhasePoly._raw({k: (-2 * v) % 1 for k, v in cross.terms.items() if (-2 * v) % 1})
    return acc


def pp_add(a: PhasePoly, b: PhasePoly) -> PhasePoly:
    return a + b


def pp_scale(a: Union[PhasePoly, RealPoly], c: Rational) -> PhasePoly:
    """Multiply coefficients by ``c`` and reduce mod 1.

    Pass a RealPoly (for instance a fresh hat image) when integer
    coefficients matter: scaling an already reduced phase by a non-integer
    can change its values.
    """
    c = Fraction(c)
    return PhasePoly((m, v * c) for m, v in a.terms.items())


def pp_mul(a: Union[PhasePoly, RealPoly, BoolPoly], b: Union[PhasePoly, RealPoly, BoolPoly]) -> PhasePoly:
    """Exact product reduced mod 1; boolean operands are lifted through hat."""
    ra = hat(a) if isinstance(a, BoolPoly) else (a.to_real() if isinstance(a, PhasePoly) else a)
    rb = hat(b) if isinstance(b, BoolPoly) else (b.to_real() if isinstance(b, PhasePoly) else b)
    return (ra * rb).mod1()


def pp_subst(p: PhasePoly, v: int, r: BoolPoly) -> PhasePoly:
    keep = {}
    touched = []
    for m, c in p.terms.items():
        if v in m:
            touched.append((tuple(x for x in m if x != v), c))
        else:
            keep[m] = c
    if not touched:
        return p
    out = PhasePoly._raw(keep)
    for rest, c in touched:
        out = out + scaled_hat(r, c, rest)
    return out


def pp_eval(p: PhasePoly, assignment: Mapping[int, int]) -> Fraction:
    s = Fraction(0)
    for m, c in p.terms.items():
        if _eval_mono(m, assignment):
            s += c
    return s % 1
