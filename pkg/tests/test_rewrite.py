from fractions import Fraction as F
import random

import pytest
from hypothesis import given, strategies as st

from instances import biased_term, instances
from sumpaths.circuit import build, random_circuit
from sumpaths.generate import random_term
from sumpaths.poly import BoolPoly, PhasePoly
from sumpaths.rewrite import (
    RuleError,
    RuleId,
    StaleInstanceError,
    StrategyConfig,
    apply,
    apply_hhgen_prime,
    apply_hhnl,
    apply_rem,
    blowup_family,
    find,
    simplify,
)
from sumpaths.semantics import CycloMatrix, CycloNum, interp
from sumpaths.term import SopTerm, alpha_eq, compose, dagger, mk_gate, mk_identity, mk_term, tensor_all

y = BoolPoly.var
ONE = BoolPoly.one()
H = F(1, 2)
seeds = st.integers(0, 2**32 - 1)


def h_tof():
    return compose(tensor_all(mk_gate("H"), mk_identity(1), mk_gate("H")), mk_gate("TOF"))


def h_tof_reduced():
    return SopTerm(
        2, (1, 4, 5, 6, 7), PhasePoly({(1, 5): H, (4, 7): H, (4, 5, 6): H}), (y(1), y(6), y(4)), (y(5), y(6), y(7))
    )


def hhgen_example():
    return mk_term(0, "1/2*y0*y1*y2 + 1/2*y2 + 1/2*y1*y2*y3 + 1/2*y0*y1*y2*y3", ["y3"], ["y0"])


def nonconfluent():
    # y0' is variable 6
    phase = PhasePoly({(0,): H, (0, 1, 2, 3): H, (0, 1): H, (1, 6): H, (4, 5, 6): H, (6,): H})
    return SopTerm(0, tuple(range(7)), phase, (y(2), y(3), y(4), y(5)), ())


# --- find ----------------------------------------------------------------------


def test_hh_on_h_tof_replaces_y0_by_y5():
    found = {(i.pivot, i.subst) for i in find(RuleId.HH, h_tof())}
    assert (8, (0, y(5))) in found


def test_hhgen_example_instance():
    (inst,) = [i for i in find(RuleId.HHGEN, hhgen_example()) if i.pivot == 2 and i.secondary == 1]
    # y2 y3 inside Q collapses to y0 y3 once multiplied out against y0 y1 y2 y3
    assert inst.q == y(0) ^ y(3) ^ y(0) * y(3)
    assert inst.q2 == BoolPoly.zero()
    assert inst.subst == (1, ONE)


def test_z_instance():
    t = mk_term(0, "1/2*y0", ["y1"], ["y1"])
    assert len(find(RuleId.Z, t)) == 1


def test_z_skips_canonical_zero():
    t = mk_term(0, "1/2*y0", [], [])
    assert find(RuleId.Z, t) == []


def test_witness_rules_need_opt_in():
    t = mk_term(0, "1/2*y0*y1 + 1/4*y1*y2 + 1/2*y3", ["y1", "y2", "y3"], [])
    assert find(RuleId.REM, t) == []
    assert find(RuleId.REM, t, witness_search=True)


# --- apply ---------------------------------------------------------------------


def test_h_tof_reduction():
    red, trace = simplify(h_tof(), [RuleId.HH, RuleId.ELIM])
    assert alpha_eq(red, h_tof_reduced())
    assert interp(red) == interp(h_tof())
    # (HH) removes its pivot itself, so no separate (Elim) step shows up
    assert trace.rules() == [RuleId.HH] * 3


def test_h_tof_is_irreducible_afterwards():
    red = simplify(h_tof())[0]
    assert alpha_eq(red, h_tof_reduced())
    _, trace = simplify(red, "th-plus-witness")
    assert len(trace) == 0


def test_hhgen_example_result():
    t = hhgen_example()
    (inst,) = [i for i in find(RuleId.HHGEN, t) if i.pivot == 2 and i.secondary == 1]
    out = apply(inst, t)
    want = mk_term(0, "1/2*y0*y2 + 1/2*y2 + 1/2*y2*y3 + 1/2*y0*y2*y3", ["y3"], ["y0"])
    assert alpha_eq(out, want)
    assert interp(out) == interp(t)


def test_hhgen_prime_with_product_witness_is_hhgen():
    t = hhgen_example()
    q = y(0) ^ y(3) ^ y(0) * y(3)
    out = apply_hhgen_prime(t, 2, 1, q, BoolPoly.zero())
    (inst,) = [i for i in find(RuleId.HHGEN, t) if i.pivot == 2 and i.secondary == 1]
    assert out == apply(inst, t)


def test_hhgen_prime_bad_witness():
    with pytest.raises(RuleError):
        apply_hhgen_prime(hhgen_example(), 2, 1, y(0), y(3))


def test_hhnl_example():
    t = mk_term(0, "1/2*y0*y1*y2 + 1/2*y2 + 1/2*y2*y3*y4", ["y4"], ["y0"])
    out = apply_hhnl(t, 1, 3, y(0) * y(2), y(2) * y(4))
    want = mk_term(-2, "1/2*y0*y1*y2 + 1/2*y2 + 1/2*y1*y2*y4 + 1/2*y0*y1*y2*y4", ["y4"], ["y0"])
    assert out == want
    assert interp(out) == interp(t)


def test_hhnl_trivial_patterns():
    t = mk_term(0, "1/2*y0 + 1/2*y1", [], [])
    out = apply_hhnl(t, 0, 1, ONE, ONE)
    assert out.scalar == -2
    assert interp(out) == interp(t)


def test_hhnl_rejects_boundary_pivot():
    t = mk_term(0, "1/2*y0*y1*y2 + 1/2*y2 + 1/2*y2*y3*y4", ["y4"], ["y0"])
    with pytest.raises(RuleError):
        apply_hhnl(t, 0, 3, y(1) * y(2), y(2) * y(4))


def test_omega_example():
    t = mk_term(0, "1/4*y0", [], [])
    (inst,) = find(RuleId.OMEGA, t)
    out = apply(inst, t)
    assert out.scalar == -1 and not out.vars
    assert out.phase == PhasePoly({(): F(1, 8)})
    # 1 + i
    assert interp(t) == CycloMatrix.from_entries([[CycloNum(2, [1, 1])]])
    assert interp(out) == interp(t)


def test_rem_example():
    t = mk_term(0, "1/2*y0*y1 + 1/4*y1*y2 + 1/2*y3", ["y1", "y2", "y3"], [])
    out = apply_rem(t, 0, y(1), PhasePoly({(2,): F(1, 4)}))
    assert out.phase == PhasePoly({(0, 1): H, (3,): H})
    assert interp(out) == interp(t)


def test_rem_rejects_pivot_in_witness():
    t = mk_term(0, "1/2*y0*y1 + 1/4*y1*y2", ["y1", "y2"], [])
    with pytest.raises(RuleError):
        apply_rem(t, 0, y(1), PhasePoly({(0,): F(1, 4)}))


def test_sqrt2_rule():
    t = mk_term(0, "1/8 + 3/4*y0", [], [])
    (inst,) = find(RuleId.SQRT2, t)
    out = apply(inst, t)
    assert out.scalar == -1 and not out.vars and not out.phase
    assert interp(out) == interp(t)


def test_stale_instance():
    t = h_tof()
    inst = find(RuleId.HH, t)[0]
    t2 = apply(inst, t)
    with pytest.raises(StaleInstanceError):
        apply(inst, t2)


# --- soundness and congruence -----------------------------------------------------


@pytest.mark.parametrize("rule", list(RuleId))
def test_rule_soundness_sample(rule):
    rng = random.Random(hash(rule.value) % 1000)
    for t, inst in instances(rule, rng, 150):
        assert interp(apply(inst, t)) == interp(t), (t, inst)


@pytest.mark.parametrize("rule", [RuleId.HH, RuleId.HHGEN, RuleId.KET, RuleId.OMEGA, RuleId.HHNL])
def test_rule_congruence(rule):
    rng = random.Random(7)
    for t, inst in instances(rule, rng, 40, max_vars=4, max_qubits=2):
        t2 = apply(inst, t)
        a = random_term(rng, n_in=t.n_out, max_vars=3, max_qubits=2)
        b = random_term(rng, n_out=t.n_in, max_vars=3, max_qubits=2)
        assert interp(compose(a, compose(t, b))) == interp(compose(a, compose(t2, b)))


@given(seeds)
def test_simplify_preserves_semantics(seed):
    rng = random.Random(seed)
    t = biased_term(rng, max_vars=6)
    red, trace = simplify(t, "th-prime")
    assert interp(red) == interp(t)
    assert len(red.vars) <= len(t.vars)
    assert trace.replay(t) == red


@given(seeds)
def test_witness_strategy_preserves_semantics(seed):
    rng = random.Random(seed)
    t = biased_term(rng, max_vars=6)
    red, _ = simplify(t, "th-plus-witness")
    assert interp(red) == interp(t)


def test_budget_flag():
    red, trace = simplify(h_tof(), StrategyConfig(budget=2))
    assert trace.exhausted and len(trace) == 2
    assert interp(red) == interp(h_tof())


def test_unknown_rule_set():
    with pytest.raises(ValueError):
        StrategyConfig.named("nope")


def test_circuit_times_inverse():
    rng = random.Random(3)
    alpha = 0
    # the fixed strategy is not complete: some products only reduce semantically
    for _ in range(20):
        c = random_circuit(rng, 3, 20, gateset=("h", "x", "cx", "ccx", "cz", "ccz"))
        t = build(c)
        red, _ = simplify(compose(dagger(t), t))
        assert interp(red) == CycloMatrix.identity(8)
        alpha += alpha_eq(red, mk_identity(3))
    assert alpha >= 10


# --- negative results --------------------------------------------------------------


def test_non_confluence():
    t = nonconfluent()
    a, ta = simplify(t, [RuleId.HHGEN, RuleId.HH, RuleId.ELIM])
    b, tb = simplify(t, [RuleId.HH, RuleId.ELIM, RuleId.HHGEN])
    assert ta.rules()[0] is RuleId.HHGEN and tb.rules()[0] is RuleId.HH
    assert alpha_eq(a, mk_term(0, "1/2*y0*y2*y3 + 1/2*y6*y4*y5", ["y2", "y3", "y4", "y5"], []))
    assert alpha_eq(b, mk_term(-2, "1/2*y0*y2*y3 + 1/2*y0*y4*y5 + 1/2*y0*y2*y3*y4*y5", ["y2", "y3", "y4", "y5"], []))
    assert not alpha_eq(a, b)
    assert interp(a) == interp(b) == interp(t)
    for form in (a, b):
        assert len(simplify(form, "th-prime")[1]) == 0


def test_blowup_small():
    t = blowup_family(2)
    assert len(t.phase) == 3 * 2 + 1
    red, trace = simplify(t, StrategyConfig((RuleId.HH,), budget=2))
    assert trace.rules() == [RuleId.HH, RuleId.HH]
    assert len(red.phase) == 4 and all(len(m) == 2 for m, _ in red.phase.items())
    assert interp(red) == interp(t)


def test_blowup_rejects_zero():
    with pytest.raises(ValueError):
        blowup_family(0)
