"""Sum-over-paths terms and their categorical structure.

A term ``SopTerm(p, vars, phase, outs, ins)`` denotes the linear map

    (1/sqrt2)^p * sum_{y in {0,1}^vars} e^{2 i pi phase(y)} |outs(y)><ins(y)|

with the first output (resp. input) wire as the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .poly import BoolPoly, Monomial, PhasePoly, scaled_hat


class ArityError(ValueError):
    pass


@dataclass(frozen=True)
class SopTerm:
    scalar: int
    vars: Tuple[int, ...]
    phase: PhasePoly
    outs: Tuple[BoolPoly, ...]
    ins: Tuple[BoolPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "outs", tuple(self.outs))
        object.__setattr__(self, "ins", tuple(self.ins))
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable in term")
        used = self.used_vars()
        missing = used - set(self.vars)
        if missing:
            raise ValueError(f"undeclared variables {sorted(missing)}")

    @property
    def n_in(self) -> int:
        return len(self.ins)

    @property
    def n_out(self) -> int:
        return len(self.outs)

    def used_vars(self) -> frozenset:
        s = set(self.phase.vars())
        for q in self.outs:
            s |= q.vars()
        for q in self.ins:
            s |= q.vars()
        return frozenset(s)

    def boundary_vars(self) -> frozenset:
        s = set()
        for q in self.outs + self.ins:
            s |= q.vars()
        return frozenset(s)

    def max_var(self) -> int:
        return max(self.vars, default=-1)

    def monomial_count(self) -> int:
        return len(self.phase)

    def replace(self, **kw) -> "SopTerm":
        d = dict(scalar=self.scalar, vars=self.vars, phase=self.phase, outs=self.outs, ins=self.ins)
        d.update(kw)
        return SopTerm(**d)

    def rename(self, mapping: Mapping[int, int]) -> "SopTerm":
        return SopTerm(
            self.scalar,
            tuple(mapping.get(v, v) for v in self.vars),
            self.phase.rename(mapping),
            tuple(q.rename(mapping) for q in self.outs),
            tuple(q.rename(mapping) for q in self.ins),
        )

    def shift(self, offset: int) -> "SopTerm":
        if offset == 0:
            return self
        return self.rename({v: v + offset for v in self.vars})

    def subst(self, v: int, r: BoolPoly) -> "SopTerm":
        """Substitute ``v`` by ``r`` everywhere and drop ``v`` from the sum."""
        return SopTerm(
            self.scalar,
            tuple(x for x in self.vars if x != v),
            self.phase.subst(v, r),
            tuple(q.subst(v, r) for q in self.outs),
            tuple(q.subst(v, r) for q in self.ins),
        )

    def change_var(self, v: int, r: BoolPoly) -> "SopTerm":
        """Substitute ``v`` by ``r`` keeping ``v`` summed (a change of variables when ``v`` occurs in ``r``)."""
        return SopTerm(
            self.scalar,
            self.vars,
            self.phase.subst(v, r),
            tuple(q.subst(v, r) for q in self.outs),
            tuple(q.subst(v, r) for q in self.ins),
        )

    def __str__(self) -> str:
        from .textio import dumps_sop

        return dumps_sop(self)


def _vs(n: int, start: int = 0) -> List[BoolPoly]:
    return [BoolPoly.var(start + i) for i in range(n)]


def mk_term(scalar: int, phase, outs: Sequence, ins: Sequence, vars: Optional[Iterable[int]] = None) -> SopTerm:
    """Convenience constructor accepting strings for polynomials."""
    ph = PhasePoly.parse(phase) if isinstance(phase, str) else (phase or PhasePoly.zero())
    outs = tuple(BoolPoly.parse(q) if isinstance(q, str) else q for q in outs)
    ins = tuple(BoolPoly.parse(q) if isinstance(q, str) else q for q in ins)
    if vars is None:
        used = set(ph.vars())
        for q in outs + ins:
            used |= q.vars()
        vars = sorted(used)
    return SopTerm(scalar, tuple(vars), ph, outs, ins)


def mk_identity(n: int) -> SopTerm:
    ys = _vs(n)
    return SopTerm(0, tuple(range(n)), PhasePoly.zero(), ys, ys)


def mk_swap(n: int, m: int) -> SopTerm:
    """sum |y2, y1><y1, y2| with y1 of width n and y2 of width m."""
    y1 = _vs(n)
    y2 = _vs(m, n)
    return SopTerm(0, tuple(range(n + m)), PhasePoly.zero(), y2 + y1, y1 + y2)


def mk_eta(n: int) -> SopTerm:
    ys = _vs(n)
    return SopTerm(0, tuple(range(n)), PhasePoly.zero(), ys + ys, ())


def mk_epsilon(n: int) -> SopTerm:
    ys = _vs(n)
    return SopTerm(0, tuple(range(n)), PhasePoly.zero(), (), ys + ys)


def mk_ket(bits: Sequence[int]) -> SopTerm:
    return SopTerm(0, (), PhasePoly.zero(), tuple(BoolPoly.const(b) for b in bits), ())


def mk_bra(bits: Sequence[int]) -> SopTerm:
    return SopTerm(0, (), PhasePoly.zero(), (), tuple(BoolPoly.const(b) for b in bits))


def mk_rz(a: int, k: int) -> SopTerm:
    """Diagonal gate diag(1, e^{2 i pi a / 2^k})."""
    if k < 0:
        raise ValueError("rz exponent must be non-negative")
    y = BoolPoly.var(0)
    return SopTerm(0, (0,), PhasePoly({(0,): Fraction(a, 2**k)}), (y,), (y,))


def _diag(n: int, phase: Dict[Monomial, Fraction]) -> SopTerm:
    ys = _vs(n)
    return SopTerm(0, tuple(range(n)), PhasePoly(phase), ys, ys)


GATE_ARITY = {"H": 1, "X": 1, "Z": 1, "S": 1, "T": 1, "RZ": 1, "CX": 2, "CZ": 2, "SWAP": 2, "TOF": 3, "CCZ": 3}


def mk_gate(name: str, *params: int) -> SopTerm:
    """Gate constructor; ``RZ`` takes ``(a, k)`` for diag(1, e^{2 i pi a/2^k})."""
    g = name.upper()
    if g == "CCX":
        g = "TOF"
    if g not in GATE_ARITY:
        raise ValueError(f"unknown gate {name!r}")
    if (g == "RZ") != bool(params) or (g == "RZ" and len(params) != 2):
        raise ValueError(f"bad parameters for gate {name!r}: {params}")
    half = Fraction(1, 2)
    if g == "H":
        return SopTerm(1, (0, 1), PhasePoly({(0, 1): half}), (BoolPoly.var(1),), (BoolPoly.var(0),))
    if g == "X":
        y = BoolPoly.var(0)
        return SopTerm(0, (0,), PhasePoly.zero(), (y ^ BoolPoly.one(),), (y,))
    if g == "Z":
        return mk_rz(1, 1)
    if g == "S":
        return mk_rz(1, 2)
    if g == "T":
        return mk_rz(1, 3)
    if g == "RZ":
        return mk_rz(*params)
    if g == "CX":
        y0, y1 = _vs(2)
        return SopTerm(0, (0, 1), PhasePoly.zero(), (y0, y1 ^ y0), (y0, y1))
    if g == "CZ":
        return _diag(2, {(0, 1): half})
    if g == "SWAP":
        return mk_swap(1, 1)
    if g == "CCZ":
        return _diag(3, {(0, 1, 2): half})
    y0, y1, y2 = _vs(3)
    return SopTerm(0, (0, 1, 2), PhasePoly.zero(), (y0, y1, y2 ^ (y0 * y1)), (y0, y1, y2))


def _shift_above(f: SopTerm, g: SopTerm) -> SopTerm:
    off = f.max_var() + 1 - min(g.vars, default=0)
    return g.shift(off) if g.vars and off > 0 else g


def compose(f: SopTerm, g: SopTerm) -> SopTerm:
    """f after g.  Adds one coupling variable per connected wire."""
    if f.n_in != g.n_out:
        raise ArityError(f"cannot compose {g.n_in}->{g.n_out} into {f.n_in}->{f.n_out}")
    g = _shift_above(f, g)
    base = max(f.max_var(), g.max_var()) + 1
    m = f.n_in
    phase = f.phase + g.phase
    for i in range(m):
        c = base + i
        phase = phase + scaled_hat(g.outs[i], Fraction(1, 2), (c,)) + scaled_hat(f.ins[i], Fraction(1, 2), (c,))
    return SopTerm(
        f.scalar + g.scalar + 2 * m,
        f.vars + g.vars + tuple(range(base, base + m)),
        phase,
        f.outs,
        g.ins,
    )


def compose_all(*ts: SopTerm) -> SopTerm:
    """t1 after t2 after ... after tn."""
    acc = ts[-1]
    for t in reversed(ts[:-1]):
        acc = compose(t, acc)
    return acc


def tensor(f: SopTerm, g: SopTerm) -> SopTerm:
    g = _shift_above(f, g)
    return SopTerm(f.scalar + g.scalar, f.vars + g.vars, f.phase + g.phase, f.outs + g.outs, f.ins + g.ins)


def tensor_all(*ts: SopTerm) -> SopTerm:
    acc = ts[0]
    for t in ts[1:]:
        acc = tensor(acc, t)
    return acc


def dagger(t: SopTerm) -> SopTerm:
    return SopTerm(t.scalar, t.vars, -t.phase, t.ins, t.outs)


def scale(t: SopTerm, dp: int) -> SopTerm:
    """Multiply by (1/sqrt2)^dp."""
    return t.replace(scalar=t.scalar + dp)


def permute_wires(t: SopTerm, out_perm: Sequence[int] | None = None, in_perm: Sequence[int] | None = None) -> SopTerm:
    """Reorder boundary wires: new output ``i`` is old output ``out_perm[i]``."""
    outs = t.outs if out_perm is None else tuple(t.outs[i] for i in out_perm)
    ins = t.ins if in_perm is None else tuple(t.ins[i] for i in in_perm)
    return t.replace(outs=outs, ins=ins)


def embed(gate: SopTerm, wires: Sequence[int], n: int) -> SopTerm:
    """Act with ``gate`` on the listed wires of an ``n``-wire register."""
    k = len(wires)
    if gate.n_in != k or gate.n_out != k or len(set(wires)) != k or any(not 0 <= w < n for w in wires):
        raise ArityError(f"cannot place a {k}-wire gate on wires {list(wires)} of {n}")
    rest = [w for w in range(n) if w not in wires]
    full = tensor(gate, mk_identity(len(rest)))
    order = list(wires) + rest
    # position of wire w inside ``full``
    perm = [order.index(w) for w in range(n)]
    return permute_wires(full, perm, perm)


# ---------------------------------------------------------------------------
# alpha-equivalence


def _hyperedges(t: SopTerm):
    edges = []
    for m, c in t.phase.terms.items():
        if m:
            edges.append((("p", c), m))
    for i, q in enumerate(t.outs):
        for m in q.monomials:
            if m:
                edges.append((("o", i), m))
    for i, q in enumerate(t.ins):
        for m in q.monomials:
            if m:
                edges.append((("i", i), m))
    return edges


def _refine(vars_, edges, color):
    """Colour refinement over the variable hypergraph until stable."""
    inc = {v: [] for v in vars_}
    for e in edges:
        for v in e[1]:
            inc[v].append(e)
    ncls = len(set(color.values()))
    while True:
        sig = {}
        for v in vars_:
            nb = sorted(
                (lab, tuple(sorted(color[u] for u in m if u != v))) for lab, m in inc[v]
            )
            sig[v] = (color[v], tuple(nb))
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        color = {v: ranks[sig[v]] for v in vars_}
        n = len(ranks)
        if n == ncls:
            return color
        ncls = n


def _apply_order(t: SopTerm, order: Sequence[int]) -> SopTerm:
    mapping = {v: i for i, v in enumerate(order)}
    r = t.rename(mapping)
    return r.replace(vars=tuple(range(len(order))))


def _key(t: SopTerm):
    return (
        tuple(tuple(q) for q in t.outs),
        tuple(tuple(q) for q in t.ins),
        tuple(t.phase.items()),
    )


CANON_LEAF_LIMIT = 512


def canonicalize(t: SopTerm) -> SopTerm:
    """Rename variables to 0..k-1 canonically.

    Boundary variables come first, in order of first use over outputs then
    inputs; the remaining ties are resolved by colour refinement and, where
    that is not enough, by individualising candidates and keeping the
    smallest resulting term (search capped at ``CANON_LEAF_LIMIT`` leaves).
    """
    vars_ = list(t.vars)
    if not vars_:
        return t
    slots = {}
    for pos, q in enumerate(t.outs + t.ins):
        for v in q.vars():
            slots.setdefault(v, pos)
    big = len(t.outs) + len(t.ins)
    edges = _hyperedges(t)
    color0 = {v: (slots.get(v, big),) for v in vars_}
    ranks = {c: i for i, c in enumerate(sorted(set(color0.values())))}
    color = _refine(vars_, edges, {v: ranks[color0[v]] for v in vars_})

    best = [None, None]
    budget = [CANON_LEAF_LIMIT]

    def search(col):
        cells: Dict[int, List[int]] = {}
        for v in vars_:
            cells.setdefault(col[v], []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            order = sorted(vars_, key=lambda v: col[v])
            cand = _apply_order(t, order)
            k = _key(cand)
            if best[0] is None or k < best[0]:
                best[0], best[1] = k, cand
            budget[0] -= 1
            return
        # unused variables are interchangeable: one branch suffices
        isolated = all(not any(v in m for _, m in edges) for v in target)
        choices = target[:1] if isolated else sorted(target)
        for v in choices:
            if budget[0] <= 0 and best[1] is not None:
                return
            new = {u: 2 * col[u] + (0 if u == v else 1) if col[u] == col[v] else 2 * col[u] for u in vars_}
            search(_refine(vars_, edges, new))

    search(color)
    return best[1]


def alpha_eq(t1: SopTerm, t2: SopTerm) -> bool:
    if (t1.n_in, t1.n_out, len(t1.vars), t1.scalar, len(t1.phase)) != (
        t2.n_in,
        t2.n_out,
        len(t2.vars),
        t2.scalar,
        len(t2.phase),
    ):
        return False
    return canonicalize(t1) == canonicalize(t2)


# ---------------------------------------------------------------------------
# fragments


@dataclass(frozen=True)
class FragmentLevel:
    k: Optional[int]  # None: not dyadic
    primed: bool

    @property
    def dyadic(self) -> bool:
        return self.k is not None

    def __str__(self) -> str:
        lvl = "T" if self.k is None else str(self.k)
        return f"level={lvl}{' primed' if self.primed else ''}"


def phase_level(p: PhasePoly) -> Optional[int]:
    d = p.denominator()
    if d & (d - 1):
        return None
    return max(1, d.bit_length() - 1)


def fragment_of(t: SopTerm) -> FragmentLevel:
    return FragmentLevel(phase_level(t.phase), t.scalar % 2 == 0)
