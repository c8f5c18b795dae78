# %% Controlled terms give sums and block stacking
import numpy as np

from sumpaths import add_terms, concat_terms, ctrl_sum, ctrl_term, interp, mk_gate, mk_identity, mk_term
from sumpaths.control import is_controlled

c = ctrl_term(mk_gate("H"))
print(c.note, "controlled:", is_controlled(c.inner))
print(interp(c.slice(0)).to_complex().real)   # all ones when the control is 0
print(interp(c.slice(1)).to_complex().real)   # the Hadamard when it is 1

ones = mk_term(0, None, ["y0"], ["y1"])
print(interp(ctrl_sum(ctrl_term(mk_identity(1)), ctrl_term(ones)).controlee()).to_complex().real)
print(interp(add_terms(mk_gate("X"), mk_gate("Z"))).to_complex().real)
print(interp(concat_terms(mk_identity(1), mk_gate("X"))).to_complex().real)

# %% Rule order matters: two different normal forms
from fractions import Fraction

from sumpaths import BoolPoly, PhasePoly, RuleId, SopTerm, alpha_eq, simplify
from sumpaths.rewrite import blowup_family
from sumpaths.textio import dumps_sop

y, half = BoolPoly.var, Fraction(1, 2)
phase = PhasePoly({(0,): half, (0, 1, 2, 3): half, (0, 1): half, (1, 6): half, (4, 5, 6): half, (6,): half})
t = SopTerm(0, tuple(range(7)), phase, (y(2), y(3), y(4), y(5)), ())
a, _ = simplify(t, [RuleId.HHGEN, RuleId.HH, RuleId.ELIM])
b, _ = simplify(t, [RuleId.HH, RuleId.ELIM, RuleId.HHGEN])
print(dumps_sop(a))
print(dumps_sop(b))
print("same shape:", alpha_eq(a, b), "same matrix:", interp(a) == interp(b))

# %% Phase polynomials can grow exponentially
for k in range(3, 9):    # k = 2 collapses to a constant under the full rules
    t = blowup_family(k)
    red, _ = simplify(t, [RuleId.HH, RuleId.ELIM])
    print(k, len(t.phase), "->", len(red.phase), "monomials")
print(np.log2(len(red.phase)))
