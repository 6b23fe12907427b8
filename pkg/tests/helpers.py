"""Shared random generators for the test suite."""

import numpy as np

from tritwalk.circuit import Circuit, custom, phase, rotation, xgate
from tritwalk.gates import AXES, X_KINDS


def random_unitary(rng, dim=3):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_su3(rng):
    u = random_unitary(rng, 3)
    return u / np.linalg.det(u) ** (1 / 3)


def random_gate(rng, width):
    target = int(rng.integers(1, width + 1))
    free = [w for w in range(1, width + 1) if w != target]
    k = int(rng.integers(0, len(free) + 1)) if free else 0
    wires = rng.choice(free, size=k, replace=False) if k else []
    controls = tuple((int(w), int(rng.integers(0, 3))) for w in wires)
    roll = rng.integers(0, 4)
    if roll == 0:
        return rotation(AXES[rng.integers(len(AXES))], rng.uniform(-np.pi, np.pi), target, controls)
    if roll == 1:
        return xgate(X_KINDS[rng.integers(len(X_KINDS))], target, controls)
    if roll == 2:
        return phase(rng.uniform(-np.pi, np.pi), target, controls)
    return custom(random_unitary(rng), target, controls)


def random_circuit(rng, width, ngates):
    return Circuit(width, tuple(random_gate(rng, width) for _ in range(ngates)))
