"""Symbolic sum-over-paths terms: rewriting, exact semantics, ZH diagrams,
dyadic level shifts and controlled constructions."""

from .poly import BoolPoly, PhasePoly, RealPoly, hat
from .term import (
    SopTerm,
    alpha_eq,
    canonicalize,
    compose,
    dagger,
    fragment_of,
    mk_epsilon,
    mk_eta,
    mk_gate,
    mk_identity,
    mk_swap,
    mk_term,
    tensor,
)
from .rewrite import RuleId, StrategyConfig, find, apply, simplify
from .semantics import CycloMatrix, CycloNum, interp, interp_approx, mat_eq, mat_eq_approx, psi_k
from .textio import dumps_sop, loads_sop
from .circuit import Circuit, Verdict, build, build_composed, equiv, parse_circuit
from .control import ScalarSpec, add_terms, concat_terms, ctrl_concat, ctrl_sum, ctrl_term, ctrl_term_hint
from .dyadic import ascend, descend, to_primed
from .zh import ZhDiagram, axioms, interp_zh, to_sop, to_zh

__version__ = "0.1.0"

__all__ = [
    "BoolPoly",
    "PhasePoly",
    "RealPoly",
    "hat",
    "SopTerm",
    "alpha_eq",
    "canonicalize",
    "compose",
    "dagger",
    "fragment_of",
    "mk_epsilon",
    "mk_eta",
    "mk_gate",
    "mk_identity",
    "mk_swap",
    "mk_term",
    "tensor",
    "RuleId",
    "StrategyConfig",
    "find",
    "apply",
    "simplify",
    "CycloMatrix",
    "CycloNum",
    "interp",
    "interp_approx",
    "mat_eq",
    "mat_eq_approx",
    "psi_k",
    "dumps_sop",
    "loads_sop",
    "Circuit",
    "Verdict",
    "build",
    "build_composed",
    "equiv",
    "parse_circuit",
    "ScalarSpec",
    "add_terms",
    "concat_terms",
    "ctrl_concat",
    "ctrl_sum",
    "ctrl_term",
    "ctrl_term_hint",
    "ascend",
    "descend",
    "to_primed",
    "ZhDiagram",
    "axioms",
    "interp_zh",
    "to_sop",
    "to_zh",
    "__version__",
]
