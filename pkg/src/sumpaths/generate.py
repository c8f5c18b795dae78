"""Random terms and circuits for property tests and the ``gen`` command."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .poly import BoolPoly, PhasePoly
from .term import SopTerm


def random_boolpoly(rng: random.Random, vars_: Sequence[int], max_monomials: int = 3, max_degree: int = 2) -> BoolPoly:
    monos = []
    for _ in range(rng.randint(0, max_monomials)):
        d = rng.randint(0, min(max_degree, len(vars_)))
        monos.append(tuple(sorted(rng.sample(list(vars_), d))))
    return BoolPoly(monos)


def random_phase(rng: random.Random, vars_: Sequence[int], level: int = 3, max_monomials: int = 4, max_degree: int = 3) -> PhasePoly:
    den = 1 << level
    terms = {}
    for _ in range(rng.randint(0, max_monomials)):
        d = rng.randint(0, min(max_degree, len(vars_)))
        m = tuple(sorted(rng.sample(list(vars_), d)))
        terms[m] = terms.get(m, 0) + Fraction(rng.randrange(1, den), den)
    return PhasePoly(terms)


def random_term(
    rng: random.Random,
    n_in: Optional[int] = None,
    n_out: Optional[int] = None,
    max_vars: int = 5,
    level: int = 3,
    max_qubits: int = 2,
    scalar_range: Sequence[int] = (-2, 4),
) -> SopTerm:
    """A term with at most ``max_vars`` variables and dyadic phase of ``level``."""
    n_in = rng.randint(0, max_qubits) if n_in is None else n_in
    n_out = rng.randint(0, max_qubits) if n_out is None else n_out
    nv = rng.randint(1, max_vars)
    vs = list(range(nv))
    phase = random_phase(rng, vs, level)
    outs = tuple(random_boolpoly(rng, vs) for _ in range(n_out))
    ins = tuple(random_boolpoly(rng, vs) for _ in range(n_in))
    return SopTerm(rng.randint(*scalar_range), tuple(vs), phase, outs, ins)


def random_primed_term(rng: random.Random, level: int, **kw) -> SopTerm:
    t = random_term(rng, level=level, **kw)
    if t.scalar % 2:
        t = t.replace(scalar=t.scalar + 1)
    return t
