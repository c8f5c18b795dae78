"""Independent floating-point oracle.

Evaluates a term by plain nested loops over assignments, with no code shared
with the exact evaluator, and provides textbook gate matrices.
"""

from __future__ import annotations

import cmath
import itertools
import math

import numpy as np

from sumpaths.term import SopTerm


def brute_matrix(t: SopTerm) -> np.ndarray:
    n_out, n_in = t.n_out, t.n_in
    out = np.zeros((1 << n_out, 1 << n_in), dtype=complex)
    s = math.sqrt(2) ** (-t.scalar)
    vs = list(t.vars)
    for bits in itertools.product((0, 1), repeat=len(vs)):
        a = dict(zip(vs, bits))
        ph = sum((c * all(a[v] for v in m) for m, c in t.phase.items()), 0)
        row = 0
        for o in t.outs:
            row = 2 * row + o.eval(a)
        col = 0
        for i in t.ins:
            col = 2 * col + i.eval(a)
        out[row, col] += cmath.exp(2j * math.pi * float(ph))
    return s * out


SQ = 1 / math.sqrt(2)
H = np.array([[SQ, SQ], [SQ, -SQ]])
X = np.array([[0, 1], [1, 0]])
I2 = np.eye(2)


def phase_gate(theta: float) -> np.ndarray:
    return np.diag([1, cmath.exp(1j * theta)])


T = phase_gate(math.pi / 4)
S = phase_gate(math.pi / 2)
Z = phase_gate(math.pi)


def controlled(u: np.ndarray, ncontrols: int = 1) -> np.ndarray:
    """Controls on the leading (most significant) wires."""
    dim = u.shape[0] << ncontrols
    m = np.eye(dim, dtype=complex)
    m[dim - u.shape[0] :, dim - u.shape[0] :] = u
    return m


CX = controlled(X)
TOF = controlled(X, 2)
CCZ = controlled(Z, 2)


def kron(*ms) -> np.ndarray:
    out = np.eye(1)
    for m in ms:
        out = np.kron(out, m)
    return out


_NP = {
    "h": H,
    "x": X,
    "z": Z,
    "s": S,
    "t": T,
    "cx": CX,
    "cz": controlled(Z),
    "ccx": TOF,
    "tof": TOF,
    "ccz": CCZ,
    "swap": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
}


def gate_unitary(g) -> np.ndarray:
    if g.name == "rz":
        a, k = g.params
        return phase_gate(2 * np.pi * a / 2**k)
    return _NP[g.name]


def circuit_unitary(c) -> np.ndarray:
    """Apply each gate to every basis column by reshaping; qubit 0 is the most significant."""
    n = c.n
    state = np.eye(1 << n, dtype=complex).reshape([2] * n + [1 << n])
    for g in c.gates:
        k = len(g.wires)
        u = gate_unitary(g).reshape([2] * (2 * k))
        state = np.tensordot(u, state, axes=(list(range(k, 2 * k)), list(g.wires)))
        state = np.moveaxis(state, list(range(k)), list(g.wires))
    return state.reshape(1 << n, 1 << n)
