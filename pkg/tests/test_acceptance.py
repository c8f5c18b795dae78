"""End-to-end acceptance criteria, one test each.

Every test prints a single ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line (outside pytest's capture) before asserting.
"""

import random
from fractions import Fraction
import time

import numpy as np
import pytest

import oracle
from instances import instances
from sumpaths.circuit import Circuit, Gate, equiv, random_circuit
from sumpaths.control import add_terms, concat_terms, ctrl_scalar, ctrl_sum, ctrl_term, is_controlled, ScalarSpec
from sumpaths.dyadic import ascend, descend
from sumpaths.generate import random_primed_term, random_term
from sumpaths.poly import BoolPoly, PhasePoly
from sumpaths.rewrite import RuleId, apply, blowup_family, simplify
from sumpaths.semantics import CycloMatrix, CycloNum, interp, interp_contract, psi_k
from sumpaths.term import SopTerm, alpha_eq, canonicalize, compose, mk_gate, mk_identity, mk_ket, mk_term, tensor_all
from sumpaths.zh import axioms, interp_zh, to_sop, to_zh

from test_rewrite import nonconfluent
from test_zh import mixed_boundary_term


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail

    return emit


HALF = Fraction(1, 2)


def value(t):
    return interp(t) if len(t.vars) <= 16 else interp_contract(t)


def test_criterion_1_h_tof(report):
    y = BoolPoly.var
    h = PhasePoly.monomial
    expected = SopTerm(
        2, (1, 4, 5, 6, 7), h((1, 5), HALF) + h((4, 7), HALF) + h((4, 5, 6), HALF), (y(1), y(6), y(4)), (y(5), y(6), y(7))
    )
    start = time.perf_counter()
    t = compose(tensor_all(mk_gate("H"), mk_identity(1), mk_gate("H")), mk_gate("TOF"))
    red, trace = simplify(t, [RuleId.HH, RuleId.ELIM])
    elapsed = time.perf_counter() - start
    ok = canonicalize(red) == canonicalize(expected) and alpha_eq(red, expected) and elapsed < 1
    ok = ok and len(simplify(red, "th-prime")[1]) == 0
    report(1, ok, f"H-Tof reduced in {len(trace)} steps to the expected irreducible term in {elapsed * 1000:.1f} ms")


def test_criterion_2_rule_soundness(report):
    start = time.perf_counter()
    bad = []
    counts = {}
    for rule in RuleId:
        rng = random.Random(1000 + list(RuleId).index(rule))
        n = 0
        for t, inst in instances(rule, rng, 1000, max_vars=5, max_qubits=3):
            n += 1
            if interp(apply(inst, t)) != interp(t):
                bad.append((rule, t, inst))
        counts[rule.value] = n
    elapsed = time.perf_counter() - start
    ok = not bad and all(c >= 1000 for c in counts.values()) and len(counts) == 11 and elapsed < 120
    report(2, ok, f"{sum(counts.values())} instances over {len(counts)} rules, {len(bad)} unsound, {elapsed:.1f} s")


_IDENTITY_PAIRS = [["h"], ["x"], ["z"], ["cx"], ["cz"], ["ccx"], ["ccz"]]


def _padded(rng, c):
    """c with a self-inverse gate pair (or T^8, S^4) inserted somewhere."""
    gates = list(c.gates)
    pos = rng.randint(0, len(gates))
    kind = rng.choice(["pair", "t8", "s4"])
    if kind == "pair":
        name = rng.choice([g for (g,) in _IDENTITY_PAIRS if {"cx": 2, "cz": 2, "ccx": 3, "ccz": 3}.get(g, 1) <= c.n])
        wires = tuple(rng.sample(range(c.n), {"cx": 2, "cz": 2, "ccx": 3, "ccz": 3}.get(name, 1)))
        extra = [Gate(name, wires)] * 2
    else:
        q = (rng.randrange(c.n),)
        extra = [Gate("t", q)] * 8 if kind == "t8" else [Gate("s", q)] * 4
    return Circuit(c.n, gates[:pos] + extra + gates[pos:])


def test_criterion_3_equivalence_consistency(report):
    rng = random.Random(2024)
    gateset = ("h", "x", "cx", "ccx", "ccz", "cz", "z", "s", "t")
    mismatches = false_equal = n_equal = by_reduction = 0
    for i in range(500):
        n = rng.randint(1, 3)
        a = random_circuit(rng, n, rng.randint(0, 20), gateset)
        mode = i % 3
        if mode == 0:
            b = _padded(rng, a)
        elif mode == 1:
            b = random_circuit(rng, n, rng.randint(0, 20), gateset)
        else:
            b = Circuit(n, list(a.gates))
            b.gates.insert(rng.randint(0, len(b)), random_circuit(rng, n, 1, gateset).gates[0])
        a.gates, b.gates = a.gates[:30], b.gates[:30]
        truth = np.allclose(oracle.circuit_unitary(a), oracle.circuit_unitary(b))
        v = equiv(a, b)
        n_equal += truth
        by_reduction += v.reason == "reduction to identity"
        if (v.kind == "Equal") != truth:
            mismatches += 1
            false_equal += v.kind == "Equal"
    ok = mismatches == 0 and false_equal == 0
    report(
        3,
        ok,
        f"500 pairs ({n_equal} equal), {mismatches} verdict mismatches, {false_equal} false Equal, "
        f"{by_reduction} equalities proved by reduction alone",
    )


def test_criterion_4_zh(report):
    rng = random.Random(44)
    failures = 0
    for _ in range(200):
        t = random_term(rng, max_vars=5, level=3, max_qubits=2)
        if value(to_sop(to_zh(t))) != interp(t):
            failures += 1
    ex = mixed_boundary_term()
    example_ok = interp_zh(to_zh(ex)) == interp(ex) and value(to_sop(to_zh(ex))) == interp(ex)
    ax = axioms()
    axioms_ok = [name for name, (lhs, rhs) in ax.items() if interp_zh(lhs) == interp_zh(rhs)]
    ok = failures == 0 and example_ok and len(axioms_ok) == len(ax) == 11
    report(4, ok, f"200 roundtrips with {failures} failures, mixed-boundary term {'ok' if example_ok else 'wrong'}, {len(axioms_ok)}/{len(ax)} axioms hold")


def test_criterion_5_level_shift(report):
    start = time.perf_counter()
    bad = 0
    for k in (1, 2, 3):
        rng = random.Random(50 + k)
        for _ in range(100):
            t = random_primed_term(rng, level=k + 1, max_vars=4, max_qubits=2)
            up, _ = ascend(t, k)
            if value(up) != psi_k(interp(t), k) or value(descend(up, k)) != interp(t):
                bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 60
    report(5, ok, f"300 primed terms, {bad} failures, {elapsed:.1f} s")


def _sqrt2_power(p):
    x = CycloNum.from_int(1)
    step = CycloNum.inv_sqrt2() if p >= 0 else CycloNum.inv_sqrt2() * 2
    for _ in range(abs(p)):
        x = x * step
    return x


def test_criterion_6_controls(report):
    scalars_ok = all(
        interp(compose(ctrl_scalar(ScalarSpec.from_sqrt2_power(p)), mk_ket([1]))) == CycloMatrix.from_entries([[_sqrt2_power(p)]])
        for p in range(-6, 7)
    )
    rng = random.Random(6)
    targets = [mk_gate("H"), mk_gate("TOF"), mk_gate("CX")] + [random_term(rng, level=3, max_vars=4, max_qubits=2) for _ in range(20)]
    controlled_ok = 0
    for t in targets:
        c = ctrl_term(t)
        controlled_ok += is_controlled(c.inner) and value(c.controlee()) == interp(t)
    ones = mk_term(0, None, ["y0"], ["y1"])
    s = ctrl_sum(ctrl_term(mk_identity(1)), ctrl_term(ones))
    sum_ok = interp(s.controlee()) == CycloMatrix.from_entries([[2, 1], [1, 2]])
    ok = scalars_ok and controlled_ok == len(targets) and sum_ok
    report(
        6,
        ok,
        f"scalar controls p in [-6, 6] {'exact' if scalars_ok else 'wrong'}, "
        f"{controlled_ok}/{len(targets)} controlled terms valid, sum example {'[[2,1],[1,2]]' if sum_ok else 'wrong'}",
    )


def test_criterion_7_sum_concat(report):
    rng = random.Random(77)
    ket0 = CycloMatrix.from_entries([[1], [0]])
    ket1 = CycloMatrix.from_entries([[0], [1]])
    bad = 0
    for _ in range(100):
        n, m = rng.randint(0, 2), rng.randint(0, 2)
        a = random_term(rng, n_in=n, n_out=m, max_vars=4, level=3)
        b = random_term(rng, n_in=n, n_out=m, max_vars=4, level=3)
        ma, mb = interp(a), interp(b)
        if value(add_terms(a, b)) != ma + mb:
            bad += 1
        elif value(concat_terms(a, b)) != ket0.kron(ma) + ket1.kron(mb):
            bad += 1
    report(7, bad == 0, f"100 pairs, {bad} failures")


def test_criterion_8_negative_results(report):
    t = nonconfluent()
    a, _ = simplify(t, [RuleId.HHGEN, RuleId.HH, RuleId.ELIM])
    b, _ = simplify(t, [RuleId.HH, RuleId.ELIM, RuleId.HHGEN])
    irreducible = all(len(simplify(f, "th-prime")[1]) == 0 for f in (a, b))
    conf_ok = not alpha_eq(a, b) and irreducible and interp(a) == interp(b) == interp(t)
    k = 8
    blow = blowup_family(k)
    initial = len(blow.phase)
    red, _ = simplify(blow, [RuleId.HH, RuleId.ELIM])
    degrees = {len(m) for m, _ in red.phase.items()}
    blow_ok = initial == 3 * k + 1 and len(red.phase) == 2**k and degrees == {k}
    report(
        8,
        conf_ok and blow_ok,
        f"two distinct irreducible forms {'equal' if conf_ok else 'NOT ok'} in meaning; "
        f"blow-up k=8 from {initial} to {len(red.phase)} monomials of degree {sorted(degrees)}",
    )
