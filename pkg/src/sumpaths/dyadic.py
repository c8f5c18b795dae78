"""Moving terms between dyadic levels.

A term is at level k when its phase coefficients are multiples of 1/2^k, and
primed when its scalar is a power of 1/2 (even sqrt2 exponent).  ``ascend``
trades one level of phase precision for one extra wire; ``descend`` undoes it
by feeding that wire a catalyst state and post-selecting on 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .poly import BoolPoly, Monomial, PhasePoly, mono_str
from .rewrite import RuleId, apply, find
from .term import SopTerm, compose, mk_bra, mk_identity, phase_level, tensor


class LevelError(ValueError):
    """Input is not at the level (or not primed) as required."""


# ---------------------------------------------------------------------------
# composition with immediate elimination of the coupling variables


def _compact(t: SopTerm) -> SopTerm:
    return t.rename({v: i for i, v in enumerate(t.vars)})


def fuse(t: SopTerm, pivots: Sequence[int]) -> SopTerm:
    """Run (HH) and (Elim) with pivots restricted to ``pivots`` until none applies."""
    pivots = set(pivots)
    while True:
        inst = None
        for rule in (RuleId.HH, RuleId.ELIM):
            cands = [i for i in find(rule, t) if i.pivot in pivots]
            if cands:
                inst = cands[0]
                break
        if inst is None:
            return t
        t = apply(inst, t)
        pivots.discard(inst.pivot)


def compose_fused(f: SopTerm, g: SopTerm) -> SopTerm:
    """f after g, removing the coupling variables whenever (HH) allows it."""
    t = compose(f, g)
    m = f.n_in
    return _compact(fuse(t, t.vars[len(t.vars) - m :]))


def fold(factors: Sequence[SopTerm]) -> SopTerm:
    """factors[0] after factors[1] after ..., fused step by step."""
    acc = factors[-1]
    for f in reversed(factors[:-1]):
        acc = compose_fused(f, acc)
    return acc


# ---------------------------------------------------------------------------
# decomposition into single-monomial factors


def graded_lex(ms) -> List[Monomial]:
    return sorted(ms, key=lambda m: (len(m), m))


def decompose(t: SopTerm, order: Optional[Sequence[Monomial]] = None) -> List[SopTerm]:
    """[s sum |O><y|, one diagonal factor per phase monomial, sum |y><I|].

    The wires between factors carry every summation variable of ``t``.
    """
    ys = tuple(BoolPoly.var(v) for v in t.vars)
    zero = PhasePoly.zero()
    out_f = SopTerm(t.scalar, t.vars, zero, t.outs, ys)
    in_f = SopTerm(0, t.vars, zero, ys, t.ins)
    monos = graded_lex(m for m, _ in t.phase.items()) if order is None else list(order)
    if sorted(monos) != sorted(m for m, _ in t.phase.items()):
        raise ValueError("ordering is not a permutation of the phase monomials")
    diag = [SopTerm(0, t.vars, PhasePoly({m: t.phase.coeff(m)}), ys, ys) for m in monos]
    return [out_f] + diag + [in_f]


def recompose(factors: Sequence[SopTerm]) -> SopTerm:
    return fold(factors)


def is_diagonal_factor(f: SopTerm) -> bool:
    return len(f.phase) == 1 and f.outs == f.ins


# ---------------------------------------------------------------------------
# level shifts


@dataclass(frozen=True)
class LevelShiftCert:
    source_level: int
    target_level: int
    order: Tuple[Monomial, ...]
    odd_count: int

    def replay(self, t: SopTerm) -> SopTerm:
        out, cert = ascend(t, self.target_level, order=self.order)
        if cert != self:
            raise ValueError("certificate does not match the term")
        return out

    def dumps(self) -> str:
        order = " ".join(mono_str(m) for m in self.order)
        return (
            f"# ascend from level {self.source_level} to level {self.target_level}\n"
            f"# monomial order: {order}\n"
            f"# odd monomials: {self.odd_count}\n"
        )


def is_primed(t: SopTerm) -> bool:
    return t.scalar % 2 == 0


def _ascend_factor(f: SopTerm, k: int) -> Tuple[SopTerm, bool]:
    if len(f.phase) == 0:
        return _with_id(f), False
    y = max(f.vars, default=-1) + 1
    yv = BoolPoly.var(y)
    ((m, c),) = f.phase.items()
    ell = int(c * (1 << (k + 1)))
    if ell % 2 == 0:
        return _with_id(f), False
    unit = Fraction(1, 1 << k)
    phase = PhasePoly({m: unit * ((ell - 1) // 2), tuple(sorted(m + (y,))): unit})
    mq = BoolPoly([m])
    return SopTerm(f.scalar, f.vars + (y,), phase, f.outs + (yv,), f.ins + (yv ^ mq,)), True


def _with_id(f: SopTerm) -> SopTerm:
    y = max(f.vars, default=-1) + 1
    yv = BoolPoly.var(y)
    return SopTerm(f.scalar, f.vars + (y,), f.phase, f.outs + (yv,), f.ins + (yv,))


def ascend(t: SopTerm, k: int, order: Optional[Sequence[Monomial]] = None) -> Tuple[SopTerm, LevelShiftCert]:
    """Image of a primed level-(k+1) term at level k, with one extra wire.

    Each factor of ``decompose(t)`` is mapped on its own; the images are then
    composed back, eliminating coupling variables after each composition.
    """
    if k < 1:
        raise LevelError("k must be at least 1")
    if not is_primed(t):
        raise LevelError("term is not primed (odd sqrt2 exponent); call to_primed first")
    lvl = phase_level(t.phase)
    if lvl is None or lvl > k + 1:
        raise LevelError(f"term is not at level {k + 1}")
    factors = decompose(t, order)
    images = []
    odd = 0
    for f in factors:
        img, was_odd = _ascend_factor(f, k)
        images.append(img)
        odd += was_odd
    monos = tuple(m for f in factors[1:-1] for m, _ in f.phase.items())
    return fold(images), LevelShiftCert(k + 1, k, monos, odd)


def catalyst(k: int) -> SopTerm:
    """sum e^{2 i pi y0 / 2^(k+1)} |y0>."""
    return SopTerm(0, (0,), PhasePoly({(0,): Fraction(1, 1 << (k + 1))}), (BoolPoly.var(0),), ())


def descend(t: SopTerm, k: int) -> SopTerm:
    """(id (x) <0|) . t . (id (x) catalyst), composed literally."""
    if k < 1:
        raise LevelError("k must be at least 1")
    if t.n_in < 1 or t.n_out < 1:
        raise LevelError("descend needs at least one input and one output")
    post = tensor(mk_identity(t.n_out - 1), mk_bra([0]))
    pre = tensor(mk_identity(t.n_in - 1), catalyst(k))
    return compose(post, compose(t, pre))


T_SQRT2 = SopTerm(1, (0,), PhasePoly({(): Fraction(1, 8), (0,): Fraction(3, 4)}), (), ())


def to_primed(t: SopTerm) -> SopTerm:
    """Same matrix with an even sqrt2 exponent (tensoring a unit scalar if needed)."""
    if is_primed(t):
        return t
    return tensor(t, T_SQRT2)
