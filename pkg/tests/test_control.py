from fractions import Fraction as F
import cmath
import math
import random

import numpy as np
import pytest

import oracle
from sumpaths.control import (
    ControlError,
    ScalarSpec,
    add_terms,
    concat_terms,
    ctrl_concat,
    ctrl_scalar,
    ctrl_scalar_prime,
    ctrl_sum,
    ctrl_term,
    ctrl_term_hint,
    is_controlled,
    mk_cp,
    mk_tc,
    mk_tplus,
)
from sumpaths.generate import random_term
from sumpaths.rewrite import simplify
from sumpaths.semantics import CycloMatrix, CycloNum, interp, interp_approx, interp_contract
from sumpaths.term import alpha_eq, compose, compose_all, fragment_of, mk_bra, mk_gate, mk_identity, mk_ket, mk_term, tensor

ONES = lambda r, c: CycloMatrix.from_entries([[1] * c for _ in range(r)])  # noqa: E731


def value(t):
    return interp(t) if len(t.vars) <= 20 else interp_contract(t)


def sqrt2_power(p):
    """(1/sqrt2)^p as an exact number."""
    x = CycloNum.from_int(1)
    step = CycloNum.inv_sqrt2() if p >= 0 else CycloNum.inv_sqrt2() * 2
    for _ in range(abs(p)):
        x = x * step
    return x


def applied(lam, bit):
    return interp(simplify(compose(lam, mk_ket([bit])))[0])


# --- building blocks ----------------------------------------------------------------------


def test_copy():
    assert interp(mk_cp(1)) == CycloMatrix.from_entries([[1, 0], [0, 0], [0, 0], [0, 1]])


def test_tplus_on_basis_states():
    zero = simplify(compose(mk_tplus(), mk_ket([0])))[0]
    assert alpha_eq(zero, mk_ket([0, 0]))
    one = simplify(compose(mk_tplus(), mk_ket([1])))[0]
    assert alpha_eq(one, mk_term(0, None, ["y0", "1 ^ y0"], []))


def test_tc_post_selected():
    t = compose_all(tensor(mk_bra([0]), mk_identity(2)), mk_tc(), mk_ket([1]))
    assert alpha_eq(simplify(t)[0], mk_ket([1, 0]))


# --- scalar controls ----------------------------------------------------------------------


@pytest.mark.parametrize("p", range(-6, 7))
def test_scalar_control_sqrt2_powers(p):
    lam = ctrl_scalar(ScalarSpec.from_sqrt2_power(p))
    assert applied(lam, 0) == CycloMatrix.from_entries([[1]])
    assert applied(lam, 1) == CycloMatrix.from_entries([[sqrt2_power(p)]])
    assert fragment_of(lam).dyadic


@pytest.mark.parametrize("p, theta", [(0, F(1, 2)), (1, F(1, 4)), (-3, F(7, 4)), (2, 1)])
def test_scalar_control_with_angle(p, theta):
    lam = ctrl_scalar(ScalarSpec.from_sqrt2_power(p, theta))
    want = complex(sqrt2_power(p)) * cmath.exp(1j * math.pi * theta)
    assert abs(complex(applied(lam, 1)[0, 0]) - want) < 1e-12


def test_scalar_control_examples():
    one = ctrl_scalar(ScalarSpec(n=0))
    assert interp(one) == CycloMatrix.from_entries([[1, 1]])
    quarter = ctrl_scalar(ScalarSpec(n=-2))
    assert applied(quarter, 1) == CycloMatrix.from_entries([[F(1, 4)]])
    assert interp(ctrl_scalar(ScalarSpec.zero_spec())) == CycloMatrix.from_entries([[1, 0]])


def test_primed_scalar_control():
    half = ctrl_scalar_prime(ScalarSpec(n=1, alpha=F(1, 3)))
    assert not fragment_of(half).dyadic
    assert np.allclose(interp_approx(half), [[1, 0.5]])
    one = ctrl_scalar_prime(ScalarSpec(n=1))
    assert applied(one, 1) == CycloMatrix.from_entries([[1]])
    assert interp(ctrl_scalar_prime(ScalarSpec.zero_spec())) == CycloMatrix.from_entries([[1, 0]])
    with pytest.raises(ControlError):
        ctrl_scalar_prime(ScalarSpec(n=0))


def test_spec_from_complex():
    s = ScalarSpec.from_complex(0.5 * cmath.exp(1j * math.pi / 4))
    assert abs(s.value() - 0.5 * cmath.exp(1j * math.pi / 4)) < 1e-12
    sp = ScalarSpec.from_complex(0.5, primed=True)
    assert sp.n == 1 and sp.alpha == F(1, 3)
    assert ScalarSpec.from_complex(0).zero
    with pytest.raises(ValueError):
        ScalarSpec.from_complex(0.123456789)


def test_spec_validation():
    with pytest.raises(ValueError):
        ScalarSpec(n=0, alpha=F(1, 2))


# --- term controls ---------------------------------------------------------------------------


@pytest.mark.parametrize("gate", ["H", "TOF", "CX", "T", "CCZ"])
def test_controlled_gates(gate):
    t = mk_gate(gate)
    c = ctrl_term(t)
    assert c.n_in == t.n_in and c.n_out == t.n_out
    assert is_controlled(c.inner)
    assert interp(c.controlee()) == interp(t)


def test_controlled_identity():
    c = ctrl_term(mk_identity(1))
    assert interp(c.slice(0)) == ONES(2, 2)
    assert interp(c.slice(1)) == CycloMatrix.identity(2)


def test_control_is_first_input():
    c = ctrl_term(mk_gate("X"))
    m = value(c.inner).to_complex()
    # columns |c, x>: c = 0 gives ones, c = 1 gives X
    assert np.allclose(m, [[1, 1, 0, 1], [1, 1, 1, 0]])


def test_random_level3_terms_controlled():
    rng = random.Random(21)
    for _ in range(25):
        t = random_term(rng, level=3, max_vars=4, max_qubits=2)
        c = ctrl_term(t)
        assert is_controlled(c.inner)
        assert value(c.controlee()) == interp(t)
        assert fragment_of(c.inner).k <= max(3, fragment_of(t).k)


def test_prime_scalar_control_on_hadamard():
    c = ctrl_term(mk_gate("H"), scalar_control="prime")
    assert np.allclose(interp_approx(c.slice(1)), oracle.H)


def test_prime_scalar_control_when_rational():
    c = ctrl_term(mk_identity(1), scalar_control="prime")
    assert np.allclose(interp_approx(c.slice(1)), np.eye(2))
    assert np.allclose(interp_approx(c.slice(0)), np.ones((2, 2)))


def test_hinted_control():
    c = ctrl_term_hint(mk_gate("H"), [0], [0], 1, 0)
    assert is_controlled(c.inner)
    assert interp(c.controlee()) == interp(mk_gate("H"))
    c = ctrl_term_hint(mk_identity(1), [0], [0], 0, 0)
    assert is_controlled(c.inner)
    assert interp(c.controlee()) == CycloMatrix.identity(2)


def test_hinted_control_on_phase_entry():
    t = mk_gate("T")
    hinted = ctrl_term_hint(t, [1], [1], 0, F(1, 4))
    assert is_controlled(hinted.inner)
    assert interp(hinted.controlee()) == interp(t)


def test_hint_mismatch():
    with pytest.raises(ControlError):
        ctrl_term_hint(mk_gate("H"), [0], [0], 0, 0)
    with pytest.raises(ControlError):
        ctrl_term_hint(mk_gate("H"), [0, 1], [0], 1, 0)


# --- sums and concatenations ---------------------------------------------------------------------


def test_sum_example():
    ones = mk_term(0, None, ["y0"], ["y1"])
    c = ctrl_sum(ctrl_term(mk_identity(1)), ctrl_term(ones))
    assert interp(c.controlee()) == CycloMatrix.from_entries([[2, 1], [1, 2]])
    assert is_controlled(c.inner)


def test_sum_doubles():
    c = ctrl_term(mk_gate("H"))
    s = ctrl_sum(c, c)
    assert value(s.controlee()) == interp(mk_gate("H")).scale(CycloNum.from_int(2))


def test_concat_example():
    c = ctrl_concat(ctrl_term(mk_identity(1)), ctrl_term(mk_gate("X")))
    assert interp(c.controlee()) == CycloMatrix.from_entries([[1, 0], [0, 1], [0, 1], [1, 0]])
    assert value(c.slice(0)) == ONES(4, 2)


def test_concat_same_blocks():
    c = ctrl_term(mk_gate("H"))
    m = value(ctrl_concat(c, c).controlee()).to_complex()
    assert np.allclose(m[:2], m[2:])


def test_arity_mismatch():
    with pytest.raises(ControlError):
        ctrl_sum(ctrl_term(mk_gate("H")), ctrl_term(mk_gate("CX")))


def test_add_examples():
    assert value(add_terms(mk_identity(1), mk_identity(1))) == CycloMatrix.identity(2).scale(CycloNum.from_int(2))
    p0 = mk_term(0, None, ["0"], ["0"])
    p1 = mk_term(0, None, ["1"], ["1"])
    assert value(add_terms(p0, p1)) == CycloMatrix.identity(2)


def test_concat_identities():
    m = value(concat_terms(mk_identity(1), mk_identity(1)))
    assert m == CycloMatrix.from_entries([[1, 0], [0, 1], [1, 0], [0, 1]])


def test_add_and_concat_random_pairs():
    rng = random.Random(8)
    for _ in range(15):
        n, m = rng.randint(0, 2), rng.randint(0, 2)
        a = random_term(rng, n_in=n, n_out=m, max_vars=4)
        b = random_term(rng, n_in=n, n_out=m, max_vars=4)
        assert value(add_terms(a, b)) == interp(a) + interp(b)
        top = CycloMatrix.from_entries([[1], [0]]).kron(interp(a))
        bottom = CycloMatrix.from_entries([[0], [1]]).kron(interp(b))
        assert value(concat_terms(a, b)) == top + bottom
