"""Rewrite rules on sum-over-paths terms and a deterministic fixpoint engine.

Every rule that removes a summation variable works by pattern matching on
the part of the phase that mentions a pivot variable ``y0``.  Writing the
phase as ``y0 * A + R`` with ``y0`` absent from ``R``, a coefficient-1/2
partner ``A = 1/2 * S`` is read as the boolean polynomial ``S``, because
``1/2 * y0 * hat(Q)`` and ``1/2 * y0 * Q`` agree mod 1 monomial by monomial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .poly import BoolPoly, Monomial, PhasePoly, mono, pp_mul, scaled_hat
from .term import SopTerm

HALF = Fraction(1, 2)


class RuleId(str, Enum):
    ELIM = "Elim"
    HH = "HH"
    HHGEN = "HHgen"
    KET = "Ket"
    BRA = "Bra"
    Z = "Z"
    HHGEN_PRIME = "HHgenPrime"
    HHNL = "HHnl"
    REM = "Rem"
    SQRT2 = "Sqrt2"
    OMEGA = "Omega"

    def __str__(self) -> str:
        return self.value


class RuleError(ValueError):
    """A rule instance does not match the term it is applied to."""


class StaleInstanceError(RuleError):
    pass


@dataclass(frozen=True)
class RuleInstance:
    rule: RuleId
    pivot: int
    secondary: Optional[int] = None
    q: Optional[BoolPoly] = None
    q2: Optional[BoolPoly] = None
    witness: Optional[PhasePoly] = None
    subst: Optional[Tuple[int, BoolPoly]] = None

    def sort_key(self):
        return (self.pivot, -1 if self.secondary is None else self.secondary)

    def describe_subst(self) -> str:
        if self.subst is None:
            return ""
        v, r = self.subst
        return f"y{v} <- {r}"


# ---------------------------------------------------------------------------
# matching helpers


def partners(phase: PhasePoly) -> Dict[int, Dict[Monomial, Fraction]]:
    """For every variable ``v``, the polynomial ``A`` with ``phase = v*A + R``."""
    out: Dict[int, Dict[Monomial, Fraction]] = {}
    for m, c in phase.terms.items():
        for v in m:
            out.setdefault(v, {})[tuple(x for x in m if x != v)] = c
    return out


def half_set(partner: Dict[Monomial, Fraction]) -> Optional[BoolPoly]:
    if all(c == HALF for c in partner.values()):
        return BoolPoly._raw(frozenset(partner))
    return None


def _internal_vars(t: SopTerm) -> List[int]:
    b = t.boundary_vars()
    return [v for v in sorted(t.vars) if v not in b]


def is_canonical_zero(t: SopTerm) -> bool:
    if len(t.vars) != 1 or t.scalar != 0:
        return False
    (v,) = t.vars
    return t.phase.terms == {(v,): HALF} and not any(t.outs) and not any(t.ins)


def _singletons(s: BoolPoly) -> List[int]:
    """Variables occurring in ``s`` only as a degree-one monomial."""
    count: Dict[int, int] = {}
    for m in s.monomials:
        for v in m:
            count[v] = count.get(v, 0) + 1
    return sorted(v for v in count if count[v] == 1 and (v,) in s.monomials)


def _split_on(s: BoolPoly, v: int) -> Tuple[BoolPoly, BoolPoly]:
    """Write s = v*Q xor rest."""
    q = [tuple(x for x in m if x != v) for m in s.monomials if v in m]
    rest = [m for m in s.monomials if v not in m]
    return BoolPoly(q), BoolPoly._raw(frozenset(rest))


# ---------------------------------------------------------------------------
# find


def _find_elim(t, ctx):
    used = t.used_vars()
    return [RuleInstance(RuleId.ELIM, v) for v in sorted(t.vars) if v not in used]


def _find_hh(t, ctx):
    out = []
    for y0 in ctx["internal"]:
        s = ctx["half"].get(y0)
        if s is None:
            continue
        for yi in _singletons(s):
            q = s ^ BoolPoly.var(yi)
            out.append(RuleInstance(RuleId.HH, y0, yi, q=q, subst=(yi, q)))
    return out


def _find_hhgen(t, ctx):
    out = []
    one = BoolPoly.one()
    for y0 in ctx["internal"]:
        s = ctx["half"].get(y0)
        if s is None:
            continue
        for yi in sorted(s.vars()):
            q, rest = _split_on(s, yi)
            q2 = rest ^ one
            if q * q2 == q2:
                out.append(RuleInstance(RuleId.HHGEN, y0, yi, q=q, q2=q2, subst=(yi, one ^ q2)))
    return out


def _find_ket(t, ctx, bra=False):
    out = []
    polys = t.ins if bra else t.outs
    seen = set()
    if bra:
        for q in t.outs:
            seen |= q.vars()
    for i, o in enumerate(polys):
        for y0 in _singletons(o):
            rest = o ^ BoolPoly.var(y0)
            if rest and y0 not in seen:
                rule = RuleId.BRA if bra else RuleId.KET
                out.append(RuleInstance(rule, y0, i, q=rest, subst=(y0, BoolPoly.var(y0) ^ rest)))
        seen |= o.vars()
    return out


def _find_z(t, ctx):
    if is_canonical_zero(t):
        return []
    return [RuleInstance(RuleId.Z, y0) for y0 in ctx["internal"] if ctx["partners"].get(y0) == {(): HALF}]


def _find_sqrt2(t, ctx):
    q34 = Fraction(3, 4)
    return [RuleInstance(RuleId.SQRT2, y0) for y0 in ctx["internal"] if ctx["partners"].get(y0) == {(): q34}]


def _find_omega(t, ctx):
    out = []
    for y0 in ctx["internal"]:
        a = ctx["partners"].get(y0)
        if not a:
            continue
        c = a.get((), Fraction(0))
        if c not in (Fraction(1, 4), Fraction(3, 4)):
            continue
        rest = {m: v for m, v in a.items() if m}
        if all(v == HALF for v in rest.values()):
            q = BoolPoly(list(rest) + ([()] if c == Fraction(3, 4) else []))
            out.append(RuleInstance(RuleId.OMEGA, y0, q=q))
    return out


def _find_hhnl(t, ctx):
    out = []
    cands = [(v, ctx["half"][v]) for v in ctx["internal"] if ctx["half"].get(v) is not None]
    for (a, sa), (b, sb) in itertools.permutations(cands, 2):
        if a in sb.vars() or b in sa.vars():
            continue
        out.append(
            RuleInstance(RuleId.HHNL, a, b, q=sa, q2=sb, subst=(b, BoolPoly.var(a) ^ (BoolPoly.var(a) * sa)))
        )
    return out


def _small_polys(vs: Sequence[int], max_monomials: int = 4):
    monos = [m for r in range(len(vs) + 1) for m in itertools.combinations(vs, r)]
    for r in range(1, max_monomials + 1):
        for ms in itertools.combinations(monos, r):
            yield BoolPoly(ms)


WITNESS_POOL = 3


def _find_hhgen_prime_search(t, ctx):
    """Bounded search for (HHgen') witnesses: polynomials with at most 4
    monomials over the (at most ``WITNESS_POOL``) variables involved that
    are shorter than the witness plain (HHgen) would use."""
    out = []
    one = BoolPoly.one()
    for y0 in ctx["internal"]:
        s = ctx["half"].get(y0)
        if s is None:
            continue
        for yi in sorted(s.vars()):
            q, rest = _split_on(s, yi)
            target = rest ^ one
            if q * target != target:
                continue
            pool = sorted((q.vars() | target.vars()) - {y0, yi})
            if len(pool) > WITNESS_POOL:
                continue
            # plain (HHgen) uses Q' = target; only strictly shorter witnesses count
            best = None
            for w in _small_polys(pool):
                if len(w) >= len(target) or (best is not None and len(w) >= len(best)):
                    continue
                if q * w == target:
                    best = w
            if best is not None:
                out.append(RuleInstance(RuleId.HHGEN_PRIME, y0, yi, q=q, q2=best, subst=(yi, one ^ best)))
    return out


def _find_rem_search(t, ctx):
    """(Rem) witnesses c*M/m for a phase monomial c*M and a monomial m of the
    partner dividing M; kept when the phase gets strictly smaller."""
    out = []
    for y0 in ctx["internal"]:
        q = ctx["half"].get(y0)
        if q is None or not q:
            continue
        best = None
        seen = set()
        for big, c in t.phase.items():
            if y0 in big:
                continue
            for m in q:
                if not set(m) <= set(big):
                    continue
                wm = tuple(v for v in big if v not in m)
                if (wm, c) in seen:
                    continue
                seen.add((wm, c))
                wit = PhasePoly({wm: c})
                new = t.phase - pp_mul(wit, q)
                if len(new) < len(t.phase) and (best is None or len(new) < best[0]):
                    best = (len(new), wit)
        if best is not None:
            out.append(RuleInstance(RuleId.REM, y0, q=q, witness=best[1]))
    return out


_FINDERS = {
    RuleId.ELIM: _find_elim,
    RuleId.HH: _find_hh,
    RuleId.HHGEN: _find_hhgen,
    RuleId.KET: lambda t, c: _find_ket(t, c, bra=False),
    RuleId.BRA: lambda t, c: _find_ket(t, c, bra=True),
    RuleId.Z: _find_z,
    RuleId.SQRT2: _find_sqrt2,
    RuleId.OMEGA: _find_omega,
    RuleId.HHNL: _find_hhnl,
    RuleId.HHGEN_PRIME: _find_hhgen_prime_search,
    RuleId.REM: _find_rem_search,
}


def _context(t: SopTerm) -> dict:
    p = partners(t.phase)
    return {
        "partners": p,
        "half": {v: half_set(a) for v, a in p.items()},
        "internal": _internal_vars(t),
    }


def find(rule: RuleId, t: SopTerm, witness_search: bool = False, _ctx=None) -> List[RuleInstance]:
    """All instances of ``rule`` in ``t``, sorted by (pivot, secondary).

    (HHgenPrime) and (Rem) need a witness; they are only searched for when
    ``witness_search`` is set.
    """
    rule = RuleId(rule)
    if rule in (RuleId.HHGEN_PRIME, RuleId.REM) and not witness_search:
        return []
    ctx = _ctx if _ctx is not None else _context(t)
    return sorted(_FINDERS[rule](t, ctx), key=RuleInstance.sort_key)


# ---------------------------------------------------------------------------
# apply


def _drop_var(t: SopTerm, v: int, dp: int) -> SopTerm:
    return t.replace(vars=tuple(x for x in t.vars if x != v), scalar=t.scalar + dp)


def _apply_unchecked(inst: RuleInstance, t: SopTerm) -> SopTerm:
    r = inst.rule
    if r is RuleId.ELIM:
        return _drop_var(t, inst.pivot, -2)
    if r is RuleId.HH:
        v, q = inst.subst
        t2 = t.subst(v, q)
        if inst.pivot in t2.used_vars():
            raise RuleError("pivot survived the substitution")
        return _drop_var(t2, inst.pivot, -2)
    if r in (RuleId.HHGEN, RuleId.HHGEN_PRIME):
        v, q = inst.subst
        return t.subst(v, q)
    if r in (RuleId.KET, RuleId.BRA):
        v, q = inst.subst
        return t.change_var(v, q)
    if r is RuleId.Z:
        y0 = inst.pivot
        zero = BoolPoly.zero()
        return SopTerm(0, (y0,), PhasePoly({(y0,): HALF}), (zero,) * t.n_out, (zero,) * t.n_in)
    if r is RuleId.SQRT2:
        y0 = inst.pivot
        ph = t.phase - PhasePoly({(y0,): Fraction(3, 4), (): Fraction(1, 8)})
        return _drop_var(t.replace(phase=ph), y0, -1)
    if r is RuleId.OMEGA:
        y0 = inst.pivot
        ph = t.phase - PhasePoly({m: c for m, c in t.phase.terms.items() if y0 in m})
        ph = ph + PhasePoly({(): Fraction(1, 8)}) + scaled_hat(inst.q, Fraction(-1, 4))
        return _drop_var(t.replace(phase=ph), y0, -1)
    if r is RuleId.HHNL:
        v, q = inst.subst
        return t.subst(v, q).replace(scalar=t.scalar - 2)
    if r is RuleId.REM:
        return t.replace(phase=t.phase - pp_mul(inst.witness, inst.q))
    raise RuleError(f"unknown rule {r}")


def _check(inst: RuleInstance, t: SopTerm) -> None:
    if inst.rule in (RuleId.HHGEN_PRIME, RuleId.REM):
        if inst.rule is RuleId.REM:
            _check_rem(t, inst.pivot, inst.q, inst.witness)
        else:
            _check_hhgen_prime(t, inst.pivot, inst.secondary, inst.q, inst.q2)
        return
    if inst not in find(inst.rule, t):
        raise StaleInstanceError(f"{inst.rule} instance at y{inst.pivot} does not match the term")


def apply(inst: RuleInstance, t: SopTerm) -> SopTerm:
    """Apply a rule instance after re-checking its side conditions on ``t``."""
    _check(inst, t)
    return _apply_unchecked(inst, t)


def _require_internal(t: SopTerm, *vs: int) -> None:
    b = t.boundary_vars()
    for v in vs:
        if v not in t.vars:
            raise RuleError(f"y{v} is not a variable of the term")
        if v in b:
            raise RuleError(f"y{v} occurs in the boundary")


def apply_hhnl(t: SopTerm, y0: int, y0p: int, q: BoolPoly, qp: BoolPoly) -> SopTerm:
    """Merge two pivots ``1/2 y0 Q + 1/2 y0' Q'`` into one, doubling the scalar."""
    _require_internal(t, y0, y0p)
    p = partners(t.phase)
    if half_set(p.get(y0, {})) != q or half_set(p.get(y0p, {})) != qp:
        raise RuleError("phase does not contain 1/2 y0 Q + 1/2 y0' Q' with y0, y0' elsewhere absent")
    if y0 in qp.vars() or y0p in q.vars():
        raise RuleError("pivots must not occur in Q, Q'")
    inst = RuleInstance(RuleId.HHNL, y0, y0p, q=q, q2=qp, subst=(y0p, BoolPoly.var(y0) ^ (BoolPoly.var(y0) * q)))
    return _apply_unchecked(inst, t)


def _check_hhgen_prime(t, y0, yi, q, qp):
    _require_internal(t, y0)
    s = half_set(partners(t.phase).get(y0, {}))
    if s is None:
        raise RuleError("y0 does not carry a coefficient-1/2 pattern")
    if yi == y0 or yi in q.vars() or yi in qp.vars() or y0 in qp.vars():
        raise RuleError("variable condition of (HHgen') violated")
    if s != BoolPoly.var(yi) * q ^ q * qp ^ BoolPoly.one():
        raise RuleError("witness does not fit 1/2 y0 (yi Q + QQ' + 1)")


def apply_hhgen_prime(t: SopTerm, y0: int, yi: int, q: BoolPoly, qp: BoolPoly) -> SopTerm:
    _check_hhgen_prime(t, y0, yi, q, qp)
    inst = RuleInstance(RuleId.HHGEN_PRIME, y0, yi, q=q, q2=qp, subst=(yi, BoolPoly.one() ^ qp))
    return _apply_unchecked(inst, t)


def _check_rem(t, y0, q, s):
    _require_internal(t, y0)
    if half_set(partners(t.phase).get(y0, {})) != q:
        raise RuleError("phase does not contain 1/2 y0 Q with y0 elsewhere absent")
    if y0 in s.vars():
        raise RuleError("witness must not mention the pivot")


def apply_rem(t: SopTerm, y0: int, q: BoolPoly, s: PhasePoly) -> SopTerm:
    """Drop ``S * hat(Q)`` from the phase, where ``1/2 y0 hat(Q)`` forces Q = 0."""
    _check_rem(t, y0, q, s)
    return _apply_unchecked(RuleInstance(RuleId.REM, y0, q=q, witness=s), t)


# ---------------------------------------------------------------------------
# strategies


TH = (RuleId.Z, RuleId.KET, RuleId.BRA, RuleId.HH, RuleId.ELIM, RuleId.HHGEN)
TH_PRIME = TH + (RuleId.SQRT2,)
TH_PLUS_WITNESS = TH_PRIME + (RuleId.OMEGA, RuleId.HHNL, RuleId.HHGEN_PRIME, RuleId.REM)

RULE_SETS = {"th": TH, "th-prime": TH_PRIME, "th-plus-witness": TH_PLUS_WITNESS}


@dataclass(frozen=True)
class StrategyConfig:
    rules: Tuple[RuleId, ...] = TH_PRIME
    budget: Optional[int] = None
    witness_search: bool = False

    @classmethod
    def named(cls, name: str, budget: Optional[int] = None) -> "StrategyConfig":
        if name not in RULE_SETS:
            raise ValueError(f"unknown rule set {name!r}; expected one of {sorted(RULE_SETS)}")
        return cls(RULE_SETS[name], budget, name == "th-plus-witness")

    def describe(self) -> str:
        rules = ",".join(r.value for r in self.rules)
        return f"rules={rules} budget={self.budget if self.budget is not None else 'auto'} witness_search={int(self.witness_search)}"


@dataclass(frozen=True)
class TraceStep:
    inst: RuleInstance
    before: Tuple[int, int, int]
    after: Tuple[int, int, int]


def _stats(t: SopTerm) -> Tuple[int, int, int]:
    return (len(t.vars), len(t.phase), t.scalar)


@dataclass
class Trace:
    steps: List[TraceStep] = field(default_factory=list)
    exhausted: bool = False

    def __len__(self) -> int:
        return len(self.steps)

    def rules(self) -> List[RuleId]:
        return [s.inst.rule for s in self.steps]

    def replay(self, t: SopTerm) -> SopTerm:
        for s in self.steps:
            t = apply(s.inst, t)
        return t

    def lines(self) -> List[str]:
        out = []
        for i, s in enumerate(self.steps):
            out.append(
                f'step {i} rule={s.inst.rule} pivot=y{s.inst.pivot} subst="{s.inst.describe_subst()}" '
                f"vars={s.after[0]} monomials={s.after[1]}"
            )
        return out

    def dumps(self) -> str:
        return "".join(line + "\n" for line in self.lines())


def simplify(t: SopTerm, config: StrategyConfig | str | Sequence[RuleId] | None = None) -> Tuple[SopTerm, Trace]:
    """Rewrite to a fixpoint, always taking the first rule of ``config.rules``
    that applies and, within it, the instance with the lowest (pivot,
    secondary) pair.  Returns the final term and its trace; ``trace.exhausted``
    is set when the step budget ran out first.
    """
    if config is None:
        config = StrategyConfig()
    elif isinstance(config, str):
        config = StrategyConfig.named(config)
    elif not isinstance(config, StrategyConfig):
        config = StrategyConfig(tuple(RuleId(r) for r in config))
    budget = config.budget if config.budget is not None else 10 * len(t.vars) + 1000
    trace = Trace()
    while True:
        ctx = _context(t)
        inst = None
        for rule in config.rules:
            found = find(rule, t, config.witness_search, _ctx=ctx)
            if found:
                inst = found[0]
                break
        if inst is None:
            return t, trace
        if len(trace) >= budget:
            trace.exhausted = True
            return t, trace
        before = _stats(t)
        t = _apply_unchecked(inst, t)
        trace.steps.append(TraceStep(inst, before, _stats(t)))


def normalize(t: SopTerm, config: StrategyConfig | str | None = None) -> SopTerm:
    return simplify(t, config)[0]


def blowup_family(k: int) -> SopTerm:
    """Term whose k (HH) steps expand the phase to 2^k monomials of degree k.

    Variables: y'_i = i, y_i = k+i, x_i = 2k+i, x'_i = 3k+i, so the default
    tie-breaking performs exactly the substitutions y_i <- x_i xor x'_i.
    """
    if k < 1:
        raise ValueError("k must be positive")
    terms = {tuple(range(k, 2 * k)): HALF}
    for i in range(k):
        for v in (k + i, 2 * k + i, 3 * k + i):
            terms[mono(i, v)] = HALF
    return SopTerm(0, tuple(range(4 * k)), PhasePoly(terms), (), ())
