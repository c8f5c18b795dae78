# %% Terms, composition and the rewrite engine
import numpy as np

from sumpaths import RuleId, compose, interp, mk_gate, mk_identity, simplify, tensor
from sumpaths.textio import dumps_sop

h = mk_gate("H")
print(dumps_sop(h))                     # 1/sqrt2 sum (-1)^{x y} |y><x|
print(interp(h).to_complex().real)      # exact matrix, shown as floats

# %% Hadamards around a Toffoli target
t = compose(tensor(tensor(h, mk_identity(1)), h), mk_gate("TOF"))
print(len(t.vars), "variables before rewriting")
red, trace = simplify(t, [RuleId.HH, RuleId.ELIM])
for line in trace.lines():
    print("  ", line)
print(dumps_sop(red))
assert interp(red) == interp(t)         # rewriting never changes the matrix

# %% Default strategy on a small circuit and its inverse
from sumpaths import build, dagger, parse_circuit

c = build(parse_circuit("h 0\nt 0\ncx 0 1\nh 1\ns 1"))
red, trace = simplify(compose(dagger(c), c))
print(len(trace), "steps, result:")
print(dumps_sop(red))
print(np.allclose(interp(red).to_complex(), np.eye(4)))
