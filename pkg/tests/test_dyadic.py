from fractions import Fraction as F
import random

import pytest
from hypothesis import given, strategies as st

from sumpaths.dyadic import (
    T_SQRT2,
    LevelError,
    ascend,
    catalyst,
    decompose,
    descend,
    is_diagonal_factor,
    recompose,
    to_primed,
)
from sumpaths.generate import random_primed_term, random_term
from sumpaths.poly import PhasePoly
from sumpaths.rewrite import simplify
from sumpaths.semantics import CycloMatrix, interp, psi_k
from sumpaths.term import alpha_eq, compose, fragment_of, mk_gate, mk_identity, mk_term, tensor

seeds = st.integers(0, 2**32 - 1)


def primed(seed, k):
    return random_primed_term(random.Random(seed), level=k + 1, max_vars=4, max_qubits=2)


# --- decomposition ---------------------------------------------------------------------


def test_decompose_hadamard():
    h = mk_gate("H")
    fs = decompose(h)
    assert len(fs) == 3
    assert is_diagonal_factor(fs[1]) and fs[1].phase == h.phase
    assert fs[0].outs == h.outs and fs[-1].ins == h.ins
    assert alpha_eq(recompose(fs), h)


def test_decompose_phase_free():
    assert len(decompose(mk_gate("TOF"))) == 2


def test_decompose_rejects_bad_order():
    with pytest.raises(ValueError):
        decompose(mk_gate("H"), order=[(0,)])


@given(seeds)
def test_recompose_is_alpha_equivalent(seed):
    t = random_term(random.Random(seed), max_vars=4)
    fs = decompose(t)
    assert all(is_diagonal_factor(f) for f in fs[1:-1])
    assert alpha_eq(recompose(fs), t)


# --- ascend --------------------------------------------------------------------------------


def test_even_monomial_is_tensored_with_identity():
    for k in (1, 2, 3):
        t = mk_term(0, PhasePoly({(0,): F(2, 2 ** (k + 1))}), ["y0"], ["y0"])
        out, cert = ascend(t, k)
        assert cert.odd_count == 0
        want = tensor(mk_term(0, PhasePoly({(0,): F(1, 2**k)}), ["y0"], ["y0"]), mk_identity(1))
        assert alpha_eq(out, want)


def test_t_gate_at_level_two():
    t = to_primed(mk_gate("T"))
    out, cert = ascend(t, 2)
    assert cert.source_level == 3 and cert.target_level == 2
    assert fragment_of(out).k <= 2
    assert interp(out) == psi_k(interp(t), 2)


@pytest.mark.parametrize("k", [1, 2, 3])
@given(seed=seeds)
def test_ascend_encodes(k, seed):
    t = primed(seed, k)
    out, cert = ascend(t, k)
    assert out.n_in == t.n_in + 1 and out.n_out == t.n_out + 1
    assert fragment_of(out).k <= k
    assert interp(out) == psi_k(interp(t), k)
    assert cert.replay(t) == out


@given(seeds)
def test_monomial_order_irrelevant(seed):
    rng = random.Random(seed)
    t = random_primed_term(rng, level=3, max_vars=4, max_qubits=2)
    ms = [m for m, _ in t.phase.items()]
    rng.shuffle(ms)
    a, _ = ascend(t, 2)
    b, _ = ascend(t, 2, order=ms)
    assert interp(a) == interp(b)


@given(seeds)
def test_ascend_is_functorial(seed):
    rng = random.Random(seed)
    f = random_primed_term(rng, n_in=1, level=3, max_vars=3)
    g = random_primed_term(rng, n_out=1, level=3, max_vars=3)
    fg, _ = ascend(compose(f, g), 2)
    af, _ = ascend(f, 2)
    ag, _ = ascend(g, 2)
    assert interp(fg) == interp(compose(af, ag))


def test_ascend_errors():
    with pytest.raises(LevelError):
        ascend(mk_gate("H"), 1)  # odd scalar
    with pytest.raises(LevelError):
        ascend(to_primed(mk_gate("T")), 1)  # level 3 > 2
    with pytest.raises(LevelError):
        ascend(mk_identity(1), 0)


def test_certificate_mismatch():
    t = to_primed(mk_gate("T"))
    _, cert = ascend(t, 2)
    with pytest.raises(ValueError):
        cert.replay(to_primed(mk_gate("S")))
    assert "level 3 to level 2" in cert.dumps()


# --- descend -------------------------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3])
@given(seed=seeds)
def test_descend_reverses_ascend(k, seed):
    t = primed(seed, k)
    out, _ = ascend(t, k)
    back = descend(out, k)
    assert interp(back) == interp(t)
    assert fragment_of(back).k <= k + 1


def test_descend_of_identity():
    for k in (1, 2, 3):
        d = descend(mk_identity(2), k)
        assert interp(d) == CycloMatrix.identity(2)
        assert alpha_eq(simplify(d)[0], mk_identity(1))


def test_descend_definition():
    rng = random.Random(11)
    for _ in range(10):
        t = random_term(rng, n_in=2, n_out=2, max_vars=4)
        post = CycloMatrix.identity(2).kron(CycloMatrix.from_entries([[1, 0]]))
        pre = CycloMatrix.identity(2).kron(interp(catalyst(2)))
        assert interp(descend(t, 2)) == post @ interp(t) @ pre


def test_descend_arity():
    with pytest.raises(LevelError):
        descend(mk_term(0, None, [], ["y0"]), 1)


def test_descend_simplifies_back_on_gates():
    for g in ("H", "T", "S", "CX", "TOF"):
        t = to_primed(mk_gate(g))
        out, _ = ascend(t, 2)
        assert alpha_eq(simplify(descend(out, 2))[0], simplify(t)[0])


# --- primed form ----------------------------------------------------------------------------


def test_to_primed():
    h = to_primed(mk_gate("H"))
    assert h.scalar == 2 and fragment_of(h).primed
    assert interp(h) == interp(mk_gate("H"))
    t = mk_gate("T")
    assert to_primed(t) is t
    assert interp(T_SQRT2) == CycloMatrix.from_entries([[1]])


@given(seeds)
def test_to_primed_keeps_semantics(seed):
    t = random_term(random.Random(seed), max_vars=4)
    p = to_primed(t)
    assert p.scalar % 2 == 0
    assert interp(p) == interp(t)
    assert fragment_of(p).k <= max(3, fragment_of(t).k)
