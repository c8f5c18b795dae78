"""ZH diagrams, their matrix semantics, and translations to and from terms.

A diagram is an undirected multigraph.  Boundary wires are degree-one nodes
of kind ``B`` listed in ``inputs``/``outputs``; a bare wire is an edge between
two boundary nodes.  Node kinds:

* ``Z``: |0..0><0..0| + |1..1><1..1| over its legs;
* ``H``: H-box with parameter r, entry r^(product of all leg values);
* ``X``: parity spider, 1 where the legs have even parity (no scalar);
* ``X-``: 1 where the legs have odd parity.

``X`` and ``X-`` are shorthands: they are expanded into ``Z``/``H`` nodes
before evaluation or translation.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .poly import BoolPoly, PhasePoly
from .semantics import CycloMatrix, CycloNum, NonDyadicError, _negacyclic, _nlen, interp
from .term import SopTerm, phase_level

# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class ZhParam:
    kind: str  # "exp", "zero" or "sqrt2"
    value: Fraction | int = 0

    def __post_init__(self):
        if self.kind == "exp":
            object.__setattr__(self, "value", Fraction(self.value) % 1)
        elif self.kind == "sqrt2":
            object.__setattr__(self, "value", int(self.value))
        elif self.kind != "zero":
            raise ValueError(f"unknown H parameter kind {self.kind!r}")

    def cyclo(self) -> CycloNum:
        if self.kind == "zero":
            return CycloNum.from_int(0)
        if self.kind == "sqrt2":
            p = self.value
            base = CycloNum.from_int(Fraction(2) ** (p // 2))
            if p % 2:
                return base * CycloNum(3, [0, 1, 0, -1])  # w8 + w8^-1 = sqrt2
            return base
        d = self.value.denominator
        k = d.bit_length() - 1
        if 1 << k != d:
            raise NonDyadicError(f"e^(2 i pi {self.value}) is not a dyadic root of unity")
        if k == 0:
            return CycloNum.from_int(1)
        return CycloNum.omega(k, self.value.numerator)

    def to_complex(self) -> complex:
        if self.kind == "zero":
            return 0j
        if self.kind == "sqrt2":
            return complex(2 ** (self.value / 2))
        return complex(np.exp(2j * np.pi * float(self.value)))

    def __str__(self) -> str:
        if self.kind == "zero":
            return "0"
        if self.kind == "sqrt2":
            return f"sqrt2^{self.value}"
        if self.value == Fraction(1, 2):
            return "-1"
        return f"exp({self.value})"

    @classmethod
    def parse(cls, text: str) -> "ZhParam":
        text = text.strip()
        if text == "0":
            return Zero()
        if text == "-1":
            return MinusOne()
        if text == "1":
            return PhaseExp(0)
        mt = re.fullmatch(r"exp\((-?\d+(?:/\d+)?)\)", text)
        if mt:
            return PhaseExp(Fraction(mt.group(1)))
        mt = re.fullmatch(r"sqrt2\^(-?\d+)", text)
        if mt:
            return RealScalar(int(mt.group(1)))
        raise ValueError(f"bad H parameter {text!r}")


def PhaseExp(q) -> ZhParam:
    """Parameter e^{2 i pi q}."""
    return ZhParam("exp", Fraction(q))


def MinusOne() -> ZhParam:
    return ZhParam("exp", Fraction(1, 2))


def Zero() -> ZhParam:
    return ZhParam("zero")


def RealScalar(p: int) -> ZhParam:
    """Parameter sqrt2^p."""
    return ZhParam("sqrt2", p)


# ---------------------------------------------------------------------------
# diagrams


@dataclass
class ZhDiagram:
    nodes: Dict[int, str] = field(default_factory=dict)
    params: Dict[int, ZhParam] = field(default_factory=dict)
    edges: List[Tuple[int, int]] = field(default_factory=list)
    inputs: List[int] = field(default_factory=list)
    outputs: List[int] = field(default_factory=list)

    # -- construction -------------------------------------------------------
    def _fresh(self) -> int:
        return max(self.nodes, default=-1) + 1

    def add(self, kind: str, param: ZhParam | None = None) -> int:
        if kind not in ("Z", "H", "X", "X-", "B"):
            raise ValueError(f"unknown node kind {kind!r}")
        v = self._fresh()
        self.nodes[v] = kind
        if kind == "H":
            self.params[v] = param if param is not None else MinusOne()
        return v

    def z(self) -> int:
        return self.add("Z")

    def h(self, param: ZhParam | None = None, *neighbours: int) -> int:
        v = self.add("H", param)
        for u in neighbours:
            self.connect(v, u)
        return v

    def connect(self, a: int, b: int) -> None:
        self.edges.append((a, b))

    def add_input(self, node: int) -> int:
        b = self.add("B")
        self.connect(b, node)
        self.inputs.append(b)
        return b

    def add_output(self, node: int) -> int:
        b = self.add("B")
        self.connect(b, node)
        self.outputs.append(b)
        return b

    def copy(self) -> "ZhDiagram":
        return ZhDiagram(dict(self.nodes), dict(self.params), list(self.edges), list(self.inputs), list(self.outputs))

    # -- queries --------------------------------------------------------------
    @property
    def n_in(self) -> int:
        return len(self.inputs)

    @property
    def n_out(self) -> int:
        return len(self.outputs)

    def degree(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def validate(self) -> None:
        for a, b in self.edges:
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge ({a}, {b}) references a missing node")
        bset = [v for v, k in self.nodes.items() if k == "B"]
        if sorted(bset) != sorted(self.inputs + self.outputs):
            raise ValueError("boundary nodes and boundary lists disagree")
        for v in bset:
            if self.degree(v) != 1:
                raise ValueError(f"boundary node {v} must have exactly one edge")

    def relabel(self, offset: int) -> "ZhDiagram":
        f = lambda v: v + offset  # noqa: E731
        return ZhDiagram(
            {f(v): k for v, k in self.nodes.items()},
            {f(v): p for v, p in self.params.items()},
            [(f(a), f(b)) for a, b in self.edges],
            [f(v) for v in self.inputs],
            [f(v) for v in self.outputs],
        )

    # -- expansion of derived nodes -------------------------------------------
    def expand(self) -> "ZhDiagram":
        """Replace parity spiders by a Z spider, one Hadamard-like H-box per
        leg and a 1/2 scalar (plus a 1-legged -1 box for the odd variant)."""
        if not any(k in ("X", "X-") for k in self.nodes.values()):
            return self
        d = ZhDiagram(dict(self.nodes), dict(self.params), [], list(self.inputs), list(self.outputs))
        centre = {}
        for v, k in self.nodes.items():
            if k in ("X", "X-"):
                d.nodes[v] = "Z"
                centre[v] = v
                d.h(RealScalar(-2))
                if k == "X-":
                    d.h(MinusOne(), v)
        for a, b in self.edges:
            ends = []
            for x in (a, b):
                if x in centre:
                    hb = d.h(MinusOne(), x)
                    ends.append(hb)
                else:
                    ends.append(x)
            d.connect(*ends)
        return d

    # -- categorical structure -------------------------------------------------
    def then(self, other: "ZhDiagram") -> "ZhDiagram":
        """``other`` after ``self``: plug outputs of self into inputs of other."""
        return compose_zh(other, self)

    def __str__(self) -> str:
        return dumps_zh(self)


def _other_end(d: ZhDiagram, b: int) -> Tuple[int, int]:
    for i, (x, y) in enumerate(d.edges):
        if x == b:
            return i, y
        if y == b:
            return i, x
    raise ValueError(f"boundary node {b} is dangling")


def compose_zh(f: ZhDiagram, g: ZhDiagram) -> ZhDiagram:
    """f after g."""
    if f.n_in != g.n_out:
        raise ValueError(f"cannot compose {g.n_in}->{g.n_out} into {f.n_in}->{f.n_out}")
    f = f.relabel(max(g.nodes, default=-1) + 1)
    d = ZhDiagram({**g.nodes, **f.nodes}, {**g.params, **f.params}, g.edges + f.edges, list(g.inputs), list(f.outputs))
    for go, fi in zip(g.outputs, f.inputs):
        i, u = _other_end(d, go)
        d.edges.pop(i)
        j, w = _other_end(d, fi)
        d.edges.pop(j)
        del d.nodes[go], d.nodes[fi]
        d.connect(u, w)
    return d


def tensor_zh(f: ZhDiagram, g: ZhDiagram) -> ZhDiagram:
    g = g.relabel(max(f.nodes, default=-1) + 1)
    return ZhDiagram({**f.nodes, **g.nodes}, {**f.params, **g.params}, f.edges + g.edges, f.inputs + g.inputs, f.outputs + g.outputs)


def wire(n: int = 1) -> ZhDiagram:
    d = ZhDiagram()
    for _ in range(n):
        a, b = d.add("B"), d.add("B")
        d.connect(a, b)
        d.inputs.append(a)
        d.outputs.append(b)
    return d


def spider(kind: str, n_in: int, n_out: int, param: ZhParam | None = None) -> ZhDiagram:
    d = ZhDiagram()
    v = d.add(kind, param)
    for _ in range(n_in):
        d.add_input(v)
    for _ in range(n_out):
        d.add_output(v)
    return d


def scalar_box(param: ZhParam) -> ZhDiagram:
    return spider("H", 0, 0, param)


# ---------------------------------------------------------------------------
# evaluation by tensor contraction


class _Tensor:
    __slots__ = ("labels", "arr", "m", "e")

    def __init__(self, labels, arr, m, e=0):
        self.labels = list(labels)
        self.arr = arr
        self.m = m
        self.e = e

    def promote(self, m):
        if m == self.m:
            return self
        step = 1 << (m - self.m)
        out = np.zeros(self.arr.shape[:-1] + (_nlen(m),), dtype=object)
        out[..., ::step] = self.arr
        return _Tensor(self.labels, out, m, self.e)


def _node_tensor(kind: str, param: Optional[ZhParam], labels) -> _Tensor:
    k = len(labels)
    if kind == "Z":
        arr = np.zeros((2,) * k + (1,), dtype=object)
        if k == 0:
            arr[(0,)] = 2
        else:
            arr[(0,) * k + (0,)] = 1
            arr[(1,) * k + (0,)] = 1
        return _Tensor(labels, arr, 1)
    r = param.cyclo()
    m = r.m
    den = 1
    for c in r.coeffs:
        den = max(den, c.denominator)
    e = den.bit_length() - 1
    n = _nlen(m)
    arr = np.zeros((2,) * k + (n,), dtype=object)
    arr[..., 0] = 1 << e
    arr[(1,) * k] = [int(c * (1 << e)) for c in r.coeffs]
    return _Tensor(labels, arr, m, e)


def _contract(a: _Tensor, b: _Tensor) -> _Tensor:
    m = max(a.m, b.m)
    a, b = a.promote(m), b.promote(m)
    shared = [x for x in a.labels if x in b.labels]
    ia = [a.labels.index(x) for x in shared]
    ib = [b.labels.index(x) for x in shared]
    out = _negacyclic(a.arr, b.arr, lambda x, y: np.tensordot(x, y, axes=(ia, ib)))
    labels = [x for x in a.labels if x not in shared] + [x for x in b.labels if x not in shared]
    if out is None:
        out = np.zeros((2,) * len(labels) + (_nlen(m),), dtype=object)
    return _Tensor(labels, out, m, a.e + b.e)


def _self_trace(t: _Tensor) -> _Tensor:
    while True:
        dup = [x for x in set(t.labels) if t.labels.count(x) == 2]
        if not dup:
            return t
        x = dup[0]
        i = t.labels.index(x)
        j = t.labels.index(x, i + 1)
        arr = np.trace(t.arr, axis1=i, axis2=j)
        # trace moves the summed-out axes away; the coefficient axis is last
        labels = [y for k, y in enumerate(t.labels) if k not in (i, j)]
        t = _Tensor(labels, arr, t.m, t.e)


def interp_zh(d: ZhDiagram, order: str = "greedy", max_rank: int = 24) -> CycloMatrix:
    """Matrix of a diagram, contracted exactly.

    ``order="greedy"`` repeatedly contracts the pair of tensors giving the
    smallest result; ``order="sequential"`` folds nodes in id order.  Both give
    the same matrix.
    """
    d = d.expand()
    d.validate()
    legs: Dict[int, list] = {v: [] for v in d.nodes}
    open_label = {}
    tensors: List[_Tensor] = []
    for i, (a, b) in enumerate(d.edges):
        ka, kb = d.nodes[a], d.nodes[b]
        if ka == "B" and kb == "B":
            arr = np.zeros((2, 2, 1), dtype=object)
            arr[0, 0, 0] = arr[1, 1, 0] = 1
            tensors.append(_Tensor([(i, 0), (i, 1)], arr, 1))
            open_label[a], open_label[b] = (i, 0), (i, 1)
            continue
        lab = (i, 0)
        for x in (a, b):
            if d.nodes[x] == "B":
                open_label[x] = lab
            else:
                legs[x].append(lab)
    for v, kind in sorted(d.nodes.items()):
        if kind == "B":
            continue
        # a label used twice by one node is a self-loop
        tensors.append(_self_trace(_node_tensor(kind, d.params.get(v), legs[v])))

    def merged_rank(x, y):
        return len(set(x.labels) ^ set(y.labels))

    while len(tensors) > 1:
        if order == "greedy":
            best = None
            for i, j in itertools.combinations(range(len(tensors)), 2):
                x, y = tensors[i], tensors[j]
                share = bool(set(x.labels) & set(y.labels))
                key = (not share, merged_rank(x, y))
                if best is None or key < best[0]:
                    best = (key, i, j)
            _, i, j = best
        else:
            i, j = 0, 1
        x, y = tensors[i], tensors[j]
        if merged_rank(x, y) > max_rank:
            raise ValueError("diagram too wide to contract")
        t = _contract(x, y)
        tensors = [t] + [z for k, z in enumerate(tensors) if k not in (i, j)]
    t = tensors[0] if tensors else _Tensor([], np.ones((1,), dtype=object), 1)
    want = [open_label[b] for b in d.outputs + d.inputs]
    perm = [t.labels.index(x) for x in want] + [len(t.labels)]
    arr = np.transpose(t.arr, perm).reshape(1 << d.n_out, 1 << d.n_in, _nlen(t.m))
    return CycloMatrix(t.m, arr, t.e)


# ---------------------------------------------------------------------------
# translations


def to_zh(t: SopTerm) -> ZhDiagram:
    """Diagram with one Z spider per variable and one H-box per monomial.

    Each boundary polynomial Q is computed by a parity gadget: a Z spider
    ``z`` joined by -1 boxes to the boundary spider and to every monomial of
    Q, which forces boundary = Q up to a factor 2 compensated in the scalar.
    """
    if phase_level(t.phase) is None:
        raise NonDyadicError("only dyadic phases are representable")
    d = ZhDiagram()
    spid = {v: d.z() for v in t.vars}
    for m, c in t.phase.items():
        d.h(PhaseExp(c), *(spid[v] for v in m))

    def gadget(q: BoolPoly) -> int:
        b = d.z()
        z = d.z()
        d.h(MinusOne(), z, b)
        for m in q:
            d.h(MinusOne(), z, *(spid[v] for v in m))
        return b

    outs = [gadget(q) for q in t.outs]
    ins = [gadget(q) for q in t.ins]
    for b in ins:
        d.add_input(b)
    for b in outs:
        d.add_output(b)
    d.h(RealScalar(-t.scalar - 2 * (t.n_in + t.n_out)))
    return d


def to_sop(d: ZhDiagram, fuse: bool = True) -> SopTerm:
    """Term with the same semantics, generator by generator.

    Z spiders give one variable shared by their legs, H-boxes one variable
    per leg and a single phase monomial.  Plugging two legs together is
    composition with a cap; with ``fuse`` the coupling variable this creates
    is eliminated on the spot by identifying the two leg variables, otherwise
    it is kept as ``1/2 c (a + b)`` with a factor 1/2.
    """
    d = d.expand()
    d.validate()
    next_var = itertools.count()
    leg_var: Dict[Tuple[int, int], int] = {}
    vars_: List[int] = []
    terms: Dict = {}
    scalar = 0

    def fresh():
        v = next(next_var)
        vars_.append(v)
        return v

    def add(m, c):
        terms[m] = terms.get(m, 0) + c

    # endpoints: (edge index, side)
    node_legs: Dict[int, List[Tuple[int, int]]] = {v: [] for v in d.nodes}
    for i, (a, b) in enumerate(d.edges):
        node_legs[a].append((i, 0))
        node_legs[b].append((i, 1))
    for v, kind in sorted(d.nodes.items()):
        legs = node_legs[v]
        if kind == "B":
            continue
        if kind == "Z":
            y = fresh()
            for leg in legs:
                leg_var[leg] = y
            continue
        p = d.params[v]
        xs = [fresh() for _ in legs]
        for leg, x in zip(legs, xs):
            leg_var[leg] = x
        if p.kind == "exp":
            if p.value:
                add(tuple(xs), p.value)
        elif p.kind == "zero":
            z = fresh()
            add(tuple(xs) + (z,), Fraction(1, 2))
            scalar += 2
        else:
            if legs and p.value != 0:
                raise NonDyadicError(f"H-box with {len(legs)} legs and parameter {p} has no exact term")
            scalar -= p.value

    parent = {v: v for v in vars_}

    def root(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    boundary_var: Dict[int, int] = {}
    for i, (a, b) in enumerate(d.edges):
        ka, kb = d.nodes[a], d.nodes[b]
        if ka == "B" and kb == "B":
            y = fresh()
            parent[y] = y
            boundary_var[a] = boundary_var[b] = y
            continue
        if ka == "B":
            boundary_var[a] = leg_var[(i, 1)]
            continue
        if kb == "B":
            boundary_var[b] = leg_var[(i, 0)]
            continue
        x, y = leg_var[(i, 0)], leg_var[(i, 1)]
        if fuse:
            rx, ry = root(x), root(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
        else:
            c = fresh()
            parent[c] = c
            add((x, c), Fraction(1, 2))
            add((y, c), Fraction(1, 2))
            scalar += 2

    phase = PhasePoly((tuple(root(v) for v in m), c) for m, c in terms.items())
    reps = sorted({root(v) for v in vars_})
    outs = tuple(BoolPoly.var(root(boundary_var[b])) for b in d.outputs)
    ins = tuple(BoolPoly.var(root(boundary_var[b])) for b in d.inputs)
    return SopTerm(scalar, tuple(reps), phase, outs, ins)


def roundtrip_check(t: SopTerm) -> bool:
    """Translating to a diagram and back preserves the semantics, and both
    sides simplify to terms with equal semantics."""
    from .rewrite import simplify

    back = to_sop(to_zh(t))
    if interp(back) != interp(t):
        return False
    a, _ = simplify(back)
    b, _ = simplify(t)
    return interp(a) == interp(b)


# ---------------------------------------------------------------------------
# gadgets and reference identities


def poly_gadget(q: BoolPoly, nvars: int) -> ZhDiagram:
    """Diagram nvars -> 1 mapping |y> to |Q(y)>."""
    d = ZhDiagram()
    spid = [d.z() for _ in range(nvars)]
    for s in spid:
        d.add_input(s)
    b = d.z()
    z = d.z()
    d.h(MinusOne(), z, b)
    for m in q:
        d.h(MinusOne(), z, *(spid[v] for v in m))
    d.h(RealScalar(-2))
    d.add_output(b)
    return d


def copy_spider(n: int = 2) -> ZhDiagram:
    return spider("Z", 1, n)


def zero_scalar() -> ZhDiagram:
    d = ZhDiagram()
    z = d.z()
    d.h(MinusOne(), z)
    return d


def axioms() -> Dict[str, Tuple[ZhDiagram, ZhDiagram]]:
    """Reference identities of the phase-free ZH calculus, as diagram pairs.

    These are only evaluated, never used as rewrite rules.
    """
    ax: Dict[str, Tuple[ZhDiagram, ZhDiagram]] = {}

    # spider fusion
    l = ZhDiagram()
    a, b = l.z(), l.z()
    l.connect(a, b)
    l.add_input(a), l.add_input(a), l.add_output(b), l.add_output(b)
    ax["ZS1"] = (l, spider("Z", 2, 2))
    # a two-legged Z spider is a wire
    ax["ZS2"] = (spider("Z", 1, 1), wire(1))

    # H-boxes joined through a two-legged H-box fuse (factor 2)
    l = ZhDiagram()
    h1 = l.h(MinusOne())
    mid = l.h(MinusOne(), h1)
    h2 = l.h(PhaseExp(Fraction(1, 8)), mid)
    l.add_input(h1), l.add_input(h1), l.add_output(h2)
    l.h(RealScalar(-2))
    ax["HS1"] = (l, spider("H", 2, 1, PhaseExp(Fraction(1, 8))))
    # two Hadamard-like boxes in a row cancel (factor 2)
    l = ZhDiagram()
    x = l.h(MinusOne())
    y = l.h(MinusOne(), x)
    l.add_input(x), l.add_output(y)
    l.h(RealScalar(-2))
    ax["HS2"] = (l, wire(1))

    # Z / parity bialgebra
    l = ZhDiagram()
    za, zb = l.z(), l.z()
    x1, x2 = l.add("X"), l.add("X")
    for z in (za, zb):
        l.connect(z, x1)
        l.connect(z, x2)
    l.add_input(za), l.add_input(zb), l.add_output(x1), l.add_output(x2)
    r = ZhDiagram()
    x = r.add("X")
    z = r.z()
    r.connect(x, z)
    r.add_input(x), r.add_input(x), r.add_output(z), r.add_output(z)
    ax["BA1"] = (l, r)

    # Z / H bialgebra: one box per input against a parity of the inputs
    n, m = 2, 2
    l = ZhDiagram()
    xs = [l.z() for _ in range(n)]
    ys = [l.z() for _ in range(m)]
    for xv in xs:
        l.h(MinusOne(), xv, *ys)
        l.add_input(xv)
    for yv in ys:
        l.add_output(yv)
    r = ZhDiagram()
    par = r.add("X")
    xs = [r.z() for _ in range(n)]
    ys = [r.z() for _ in range(m)]
    for xv in xs:
        r.connect(xv, par)
        r.add_input(xv)
    r.h(MinusOne(), par, *ys)
    for yv in ys:
        r.add_output(yv)
    ax["BA2"] = (l, r)

    # boxes on the same spiders multiply their parameters
    l = ZhDiagram()
    zs = [l.z(), l.z()]
    l.h(PhaseExp(Fraction(1, 8)), *zs)
    l.h(PhaseExp(Fraction(5, 8)), *zs)
    for z in zs:
        l.add_input(z)
        l.add_output(z)
    r = ZhDiagram()
    zs = [r.z(), r.z()]
    r.h(PhaseExp(Fraction(3, 4)), *zs)
    for z in zs:
        r.add_input(z)
        r.add_output(z)
    ax["M"] = (l, r)

    # a -1 phase gadget on a product projects onto |11>
    l = ZhDiagram()
    c = l.z()
    l.h(MinusOne(), c)
    y1, y2 = l.z(), l.z()
    l.h(MinusOne(), c, y1, y2)
    l.add_output(y1), l.add_output(y2)
    r = ZhDiagram()
    r.z()  # scalar 2
    o1, o2 = r.add("X-"), r.add("X-")
    r.add_output(o1), r.add_output(o2)
    ax["CPH"] = (l, r)

    # a double edge between a spider and a box is a single edge
    l = ZhDiagram()
    z = l.z()
    hb = l.h(MinusOne())
    l.connect(z, hb)
    l.connect(z, hb)
    l.add_input(z), l.add_output(hb)
    r = ZhDiagram()
    z = r.z()
    hb = r.h(MinusOne(), z)
    r.add_input(z), r.add_output(hb)
    ax["IP"] = (l, r)

    # 1/2 times an empty spider is the empty diagram
    l = ZhDiagram()
    l.h(RealScalar(-2))
    l.z()
    ax["IV"] = (l, ZhDiagram())

    # a zero scalar absorbs any other scalar
    l = zero_scalar()
    l.h(RealScalar(-1))
    ax["Z"] = (l, zero_scalar())
    return ax


# ---------------------------------------------------------------------------
# text format


def dumps_zh(d: ZhDiagram) -> str:
    lines = []
    for v, k in sorted(d.nodes.items()):
        lines.append(f"node {v} " + (f"H({d.params[v]})" if k == "H" else k))
    for a, b in d.edges:
        lines.append(f"edge {a} {b}")
    lines.append("in" + "".join(f" {v}" for v in d.inputs))
    lines.append("out" + "".join(f" {v}" for v in d.outputs))
    return "\n".join(lines) + "\n"


def loads_zh(text: str) -> ZhDiagram:
    d = ZhDiagram()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "node":
            v = int(parts[1])
            spec = " ".join(parts[2:])
            mt = re.fullmatch(r"H\((.*)\)", spec)
            if mt:
                d.nodes[v] = "H"
                d.params[v] = ZhParam.parse(mt.group(1))
            elif spec in ("Z", "X", "X-", "B"):
                d.nodes[v] = spec
            else:
                raise ValueError(f"bad node kind {spec!r}")
        elif parts[0] == "edge":
            d.connect(int(parts[1]), int(parts[2]))
        elif parts[0] == "in":
            d.inputs = [int(x) for x in parts[1:]]
        elif parts[0] == "out":
            d.outputs = [int(x) for x in parts[1:]]
        else:
            raise ValueError(f"unknown line {line!r}")
    d.validate()
    return d
