"""Gate-list circuits: parsing, translation to terms, and equivalence checking.

Circuit files hold one gate per line::

    qubits 3        # optional; otherwise the largest index used + 1
    h 0
    ccx 0 1 2
    rz 1 3 2        # diag(1, e^{2 i pi 1/2^3}) on qubit 2

Supported gates: h, x, z, s, t, cx, cz, ccx (or tof), ccz, swap, rz a k q.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .poly import BoolPoly, PhasePoly, scaled_hat
from .rewrite import StrategyConfig, Trace, simplify
from .semantics import CycloMatrix, interp
from .term import SopTerm, alpha_eq, compose, dagger, embed, mk_gate, mk_identity

_ARITY = {"h": 1, "x": 1, "z": 1, "s": 1, "t": 1, "cx": 2, "cz": 2, "swap": 2, "ccx": 3, "tof": 3, "ccz": 3, "rz": 1}


class CircuitError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


@dataclass(frozen=True)
class Gate:
    name: str
    wires: Tuple[int, ...]
    params: Tuple[int, ...] = ()

    def __str__(self) -> str:
        return " ".join([self.name, *map(str, self.params), *map(str, self.wires)])

    def term(self) -> SopTerm:
        name = "TOF" if self.name == "tof" else self.name.upper()
        return mk_gate(name, *self.params)


@dataclass
class Circuit:
    n: int
    gates: List[Gate] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.gates)

    def dumps(self) -> str:
        return f"qubits {self.n}\n" + "".join(f"{g}\n" for g in self.gates)

    def inverse(self) -> "Circuit":
        inv = []
        for g in reversed(self.gates):
            if g.name in ("s", "t", "rz"):
                a, k = (1, 2) if g.name == "s" else (1, 3) if g.name == "t" else g.params
                inv.append(Gate("rz", g.wires, (-a % (1 << k), k)))
            else:
                inv.append(g)
        return Circuit(self.n, inv)


def parse_circuit(text: str, n: Optional[int] = None) -> Circuit:
    gates = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        name = parts[0].lower()
        try:
            args = [int(x) for x in parts[1:]]
        except ValueError:
            raise CircuitError(f"non-integer argument in {line!r}", lineno) from None
        if name == "qubits":
            if len(args) != 1 or args[0] < 0:
                raise CircuitError("'qubits' takes one non-negative count", lineno)
            declared = args[0]
            continue
        if name not in _ARITY:
            raise CircuitError(f"unknown gate {parts[0]!r}", lineno)
        k = _ARITY[name]
        nparams = 2 if name == "rz" else 0
        if len(args) != k + nparams:
            raise CircuitError(f"{name} takes {k + nparams} arguments, got {len(args)}", lineno)
        params, wires = tuple(args[:nparams]), tuple(args[nparams:])
        if len(set(wires)) != len(wires) or min(wires) < 0:
            raise CircuitError(f"bad qubit list {list(wires)}", lineno)
        if name == "rz" and params[1] < 0:
            raise CircuitError("rz exponent must be non-negative", lineno)
        gates.append(Gate(name, wires, params))
    used = max((max(g.wires) + 1 for g in gates), default=0)
    size = n if n is not None else declared if declared is not None else used
    if used > size:
        raise CircuitError(f"circuit uses qubit {used - 1} but has only {size} qubits")
    return Circuit(size, gates)


# ---------------------------------------------------------------------------
# translation


def _phase_of(g: Gate) -> Fraction:
    if g.name == "z" or g.name in ("cz", "ccz"):
        return Fraction(1, 2)
    if g.name == "s":
        return Fraction(1, 4)
    if g.name == "t":
        return Fraction(1, 8)
    a, k = g.params
    return Fraction(a, 1 << k)


def build(c: Circuit) -> SopTerm:
    """Term of a circuit by symbolic execution: one fresh variable per
    Hadamard, classical gates act on the wire polynomials, diagonal gates add
    to the phase.  No coupling variables are created."""
    n = c.n
    wires = [BoolPoly.var(i) for i in range(n)]
    vars_ = list(range(n))
    phase = PhasePoly.zero()
    scalar = 0
    for g in c.gates:
        w = g.wires
        if g.name == "h":
            y = len(vars_)
            vars_.append(y)
            phase = phase + scaled_hat(wires[w[0]], Fraction(1, 2), (y,))
            wires[w[0]] = BoolPoly.var(y)
            scalar += 1
        elif g.name == "x":
            wires[w[0]] = wires[w[0]] ^ BoolPoly.one()
        elif g.name == "cx":
            wires[w[1]] = wires[w[1]] ^ wires[w[0]]
        elif g.name in ("ccx", "tof"):
            wires[w[2]] = wires[w[2]] ^ (wires[w[0]] * wires[w[1]])
        elif g.name == "swap":
            wires[w[0]], wires[w[1]] = wires[w[1]], wires[w[0]]
        else:
            q = BoolPoly.one()
            for x in w:
                q = q * wires[x]
            phase = phase + scaled_hat(q, _phase_of(g))
    ins = tuple(BoolPoly.var(i) for i in range(n))
    return SopTerm(scalar, tuple(vars_), phase, tuple(wires), ins)


def build_composed(c: Circuit) -> SopTerm:
    """Term of a circuit as the literal composition of its embedded gates."""
    acc = mk_identity(c.n)
    for g in c.gates:
        acc = compose(embed(g.term(), g.wires, c.n), acc)
    return acc


def gate_matrix(g: Gate, n: int, _cache: Dict = {}) -> CycloMatrix:
    key = (g, n)
    if key not in _cache:
        _cache[key] = interp(embed(g.term(), g.wires, n))
    return _cache[key]


def circuit_matrix(c: Circuit) -> CycloMatrix:
    """Exact matrix as the product of the per-gate matrices."""
    acc = CycloMatrix.identity(1 << c.n)
    for g in c.gates:
        acc = gate_matrix(g, c.n) @ acc
    return acc


def random_circuit(rng: random.Random, n: int, n_gates: int, gateset: Sequence[str] = ("h", "x", "cx", "ccx", "ccz", "cz", "s", "t", "z")) -> Circuit:
    gates = [g for g in gateset if _ARITY[g] <= n]
    out = []
    for _ in range(n_gates):
        name = rng.choice(gates)
        wires = tuple(rng.sample(range(n), _ARITY[name]))
        params = (rng.randrange(1, 8), 3) if name == "rz" else ()
        out.append(Gate(name, wires, params))
    return Circuit(n, out)


# ---------------------------------------------------------------------------
# equivalence


@dataclass
class Verdict:
    kind: str  # "Equal", "NotEqual" or "Inconclusive"
    reason: str
    witness: Optional[Tuple[int, int, complex, complex]] = None
    reduced: Optional[SopTerm] = None
    trace: Optional[Trace] = None

    @property
    def exit_code(self) -> int:
        return {"Equal": 0, "NotEqual": 1, "Inconclusive": 2}[self.kind]

    def describe(self) -> str:
        s = f"{self.kind} ({self.reason})"
        if self.witness is not None:
            i, j, x, y = self.witness
            s += f" at entry ({i}, {j}): {x:.6g} vs {y:.6g}"
        return s


def is_identity(t: SopTerm) -> Tuple[bool, bool]:
    """(is identity up to a global factor, factor is exactly 1).

    The global factor is the sqrt2 power together with the constant phase."""
    if t.n_in != t.n_out:
        return False, False
    const = t.phase.coeff(())
    bare = t.replace(scalar=0, phase=t.phase - PhasePoly.monomial((), const))
    up_to_scalar = alpha_eq(bare, mk_identity(t.n_in))
    return up_to_scalar, up_to_scalar and t.scalar == 0 and const == 0


def first_difference(a: CycloMatrix, b: CycloMatrix) -> Optional[Tuple[int, int, complex, complex]]:
    rows, cols = a.shape
    for i in range(rows):
        for j in range(cols):
            x, y = a[i, j], b[i, j]
            if x != y:
                return i, j, complex(x), complex(y)
    return None


def equiv(a: Circuit, b: Circuit, config: StrategyConfig | str = "th-prime", oracle_cap: int = 10) -> Verdict:
    """Decide a == b: reduce dagger(b) . a to the identity, else fall back to
    the exact matrix oracle when the qubit count allows it."""
    if a.n != b.n:
        raise CircuitError(f"qubit counts differ: {a.n} vs {b.n}")
    t = compose(dagger(build(b)), build(a))
    red, trace = simplify(t, config)
    ident, exact = is_identity(red)
    if exact:
        return Verdict("Equal", "reduction to identity", reduced=red, trace=trace)
    if a.n <= oracle_cap:
        ma, mb = circuit_matrix(a), circuit_matrix(b)
        diff = first_difference(ma, mb)
        if diff is None:
            return Verdict("Equal", "oracle", reduced=red, trace=trace)
        return Verdict("NotEqual", "scalar mismatch" if ident else "oracle", diff, red, trace)
    if ident:
        # unitary b with dagger(b) a = c I, c != 1
        return Verdict("NotEqual", "scalar mismatch", reduced=red, trace=trace)
    return Verdict("Inconclusive", "irreducible above oracle cap", reduced=red, trace=trace)
