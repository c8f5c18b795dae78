# %% Terms as ZH diagrams and back
import random

from sumpaths import ascend, descend, interp, interp_zh, mk_gate, psi_k, to_primed, to_sop, to_zh
from sumpaths.generate import random_term
from sumpaths.zh import dumps_zh

d = to_zh(mk_gate("CX"))
print(dumps_zh(d))
print(interp_zh(d) == interp(mk_gate("CX")))

rng = random.Random(3)
t = random_term(rng, max_vars=4, level=3, max_qubits=2)
back = to_sop(to_zh(t))
print(len(t.vars), "->", len(back.vars), "variables; same matrix:", interp(back) == interp(t))

# %% Trading a level of phase precision for one wire
tg = to_primed(mk_gate("T"))            # T needs eighth roots of unity
up, cert = ascend(tg, 2)                # only fourth roots, one extra wire
print(cert.dumps(), end="")
print(interp(up) == psi_k(interp(tg), 2))
print(interp(descend(up, 2)) == interp(tg))
