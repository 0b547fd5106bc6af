"""Random inputs and independent reference matrices shared by the tests."""

import numpy as np
from scipy.linalg import expm

from blockcomp.core import Block, get_mapping, zigzag_from_blocks
from blockcomp.models import FAMILY_FIELDS, ModelSpec
from blockcomp.tfxy import TfxyPayload

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0 + 0j, -1.0])
I2 = np.eye(2, dtype=complex)
PAULI = {"X": X, "Y": Y, "Z": Z, "I": I2}


def rot(p, theta):
    """exp(-i theta P) by the matrix exponential."""
    return expm(-1j * theta * p)


def kron_all(*ms):
    out = np.ones((1, 1), dtype=complex)
    for m in ms:
        out = np.kron(out, m)
    return out


def embed(local, first, n):
    """Place a local operator starting at qubit ``first`` of ``n`` (qubit 0 most significant)."""
    k = int(round(np.log2(local.shape[0])))
    return kron_all(np.eye(2**first), local, np.eye(2 ** (n - first - k)))


def tfxy_reference(a, b, c, d, f, g):
    """Two-qubit block from its six angles via matrix exponentials."""
    z1, z2 = np.kron(Z, I2), np.kron(I2, Z)
    xx, yy = np.kron(X, X), np.kron(Y, Y)
    return (
        expm(-1j * (a * z1 + b * z2))
        @ expm(-1j * (c * xx + d * yy))
        @ expm(-1j * (f * z1 + g * z2))
    )


def random_tfxy(rng, scale=3.0):
    return TfxyPayload.from_angles(*rng.uniform(-scale, scale, 6))


def random_block(rng, mapping, index):
    mapping = get_mapping(mapping)
    if mapping.kind(index) == "tfxy":
        return Block(mapping, index, random_tfxy(rng))
    return Block.rotation(mapping, index, rng.uniform(-3, 3))


def random_zigzag(rng, mapping, height):
    return zigzag_from_blocks([random_block(rng, mapping, i) for i in range(1, height + 1)], height, mapping)


def random_model(rng, family, n, scale=1.0):
    couplings = {
        k: rng.uniform(-scale, scale, n - 1 if where == "bond" else n) for k, where in FAMILY_FIELDS[family].items()
    }
    return ModelSpec(family, n, couplings)


def phase_dist(u, v):
    """Phase-insensitive distance by brute force over a fine phase grid, then local refinement."""
    from scipy.optimize import minimize_scalar

    f = lambda phi: np.linalg.norm(u - np.exp(1j * phi) * v)  # noqa: E731
    grid = np.linspace(-np.pi, np.pi, 73)
    start = grid[np.argmin([f(p) for p in grid])]
    res = minimize_scalar(f, bounds=(start - 0.1, start + 0.1), method="bounded", options={"xatol": 1e-12})
    return min(res.fun, f(start))
