# %% Deciding circuit equality
import random

from sumpaths import equiv, parse_circuit
from sumpaths.circuit import Circuit, random_circuit

pairs = [
    ("h 0\nh 0", "qubits 1"),
    ("t 0\nt 0", "s 0"),
    ("t 0", "s 0"),
    ("h 2\nccx 0 1 2\nh 2", "ccz 0 1 2"),
    ("z 0\nx 0\nz 0\nx 0", "qubits 1"),    # -I, differs only by a global sign
]
for a, b in pairs:
    v = equiv(parse_circuit(a), parse_circuit(b, parse_circuit(a).n))
    print(f"{a!r:32} vs {b!r:14} -> {v.describe()}")

# %% How often does rewriting alone settle equal pairs?
rng = random.Random(1)
tally = {}
for _ in range(100):
    c = random_circuit(rng, 3, 15)
    v = equiv(c, Circuit(3, list(c.gates)))
    tally[v.reason] = tally.get(v.reason, 0) + 1
print(tally)   # the remainder falls back to the exact matrix oracle
