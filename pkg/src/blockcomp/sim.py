"""Dense state-vector and unitary simulation used as the correctness oracle.

Qubit 0 (chain site 1) is the most significant bit of a basis label, so
``|q0 q1 ... q_{n-1}>`` has index ``sum q_k 2^{n-1-k}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .core import Block, flatten

I2 = np.eye(2, dtype=complex)
PAULI = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

UNITARY_CAP = 12
STATE_CAP = 24


class ResourceCapError(ValueError):
    """Raised when a dense build would exceed the configured qubit cap."""


def pauli_string(n: int, ops: dict[int, str]) -> np.ndarray:
    """Dense ``2^n`` matrix of a Pauli string given as ``{qubit: letter}``."""
    out = np.ones((1, 1), dtype=complex)
    for q in range(n):
        out = np.kron(out, PAULI[ops.get(q, "I")])
    return out


def block_local_matrix(b: Block) -> np.ndarray:
    """The block as a matrix on its own qubits (first qubit most significant)."""
    if b.kind == "tfxy":
        return b.payload.matrix
    c, s = b.cos_sin()
    gen = b.mapping.generator(b.index)
    p = np.ones((1, 1), dtype=complex)
    for q in b.qubits:
        p = np.kron(p, PAULI[gen[q]])
    return c * np.eye(p.shape[0]) - 1j * s * p


def block_operator(b: Block, n: int) -> np.ndarray:
    """The block embedded in ``n`` qubits by Kronecker products (independent of the kernel path)."""
    qs = b.qubits
    local = block_local_matrix(b)
    before = np.eye(2 ** qs[0], dtype=complex)
    after = np.eye(2 ** (n - qs[-1] - 1), dtype=complex)
    return np.kron(np.kron(before, local), after)


def apply_local(tensor: np.ndarray, local: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Left-multiply the first ``n`` axes of ``tensor`` (shape ``(2,)*n + batch``) by ``local``."""
    k = len(qubits)
    op = local.reshape((2,) * (2 * k))
    moved = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), list(qubits)))
    return np.moveaxis(moved, list(range(k)), list(qubits))


def _num_qubits(circuit) -> int:
    items = circuit if isinstance(circuit, (list, tuple)) else [circuit]
    for item in items:
        if hasattr(item, "num_qubits"):
            return item.num_qubits
    raise ValueError("cannot infer the qubit count; pass n explicitly")


def build_unitary(circuit, n: Optional[int] = None, cap: int = UNITARY_CAP) -> np.ndarray:
    """Ordered product of all blocks of a structure (or list of structures)."""
    blocks = flatten(circuit)
    if n is None:
        n = _num_qubits(circuit)
    if n > cap:
        raise ResourceCapError(f"{n} qubits exceeds the dense-unitary cap of {cap}; use evolve_state")
    dim = 2**n
    u = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for b in reversed(blocks):
        u = apply_local(u, block_local_matrix(b), b.qubits, n)
    return u.reshape(dim, dim)


def naive_product(blocks: Iterable[Block], n: int) -> np.ndarray:
    """Product of full ``2^n`` block matrices, left to right."""
    out = np.eye(2**n, dtype=complex)
    for b in blocks:
        out = out @ block_operator(b, n)
    return out


def evolve_state(psi: np.ndarray, circuit, n: Optional[int] = None, cap: int = STATE_CAP) -> np.ndarray:
    """Apply a circuit to a state vector without forming its unitary."""
    psi = np.asarray(psi, dtype=complex)
    if n is None:
        n = int(round(np.log2(psi.size)))
    if psi.size != 2**n:
        raise ValueError(f"state of size {psi.size} does not match {n} qubits")
    if n > cap:
        raise ResourceCapError(f"{n} qubits exceeds the state-vector cap of {cap}")
    t = psi.reshape((2,) * n)
    for b in reversed(flatten(circuit)):
        t = apply_local(t, block_local_matrix(b), b.qubits, n)
    return t.reshape(-1)


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """``min_phi ||u - e^{i phi} v||_F``, with the optimal phase taken from ``tr(v^H u)``."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    overlap = np.vdot(v, u)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


def basis_state(n: int, bits: str | None = None) -> np.ndarray:
    """Computational basis state; ``bits`` is a string of 0/1 with qubit 0 first (default all 0 = spin up)."""
    bits = bits if bits is not None else "0" * n
    if len(bits) != n:
        raise ValueError("bit string length must equal n")
    psi = np.zeros(2**n, dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def z_expectations(psi: np.ndarray) -> np.ndarray:
    """``<Z_k>`` for every qubit."""
    n = int(round(np.log2(psi.size)))
    probs = (np.abs(psi) ** 2).reshape((2,) * n)
    out = np.empty(n)
    for k in range(n):
        marg = probs.sum(axis=tuple(j for j in range(n) if j != k))
        out[k] = marg[0] - marg[1]
    return out


def magnetization(psi: np.ndarray) -> float:
    """Average ``<Z>`` over all sites, in [-1, 1]."""
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1) > 1e-8:
        raise ValueError("state is not normalized")
    return float(np.mean(z_expectations(psi)))


def apply_gate_sequence(gates, n: int, cap: int = UNITARY_CAP) -> np.ndarray:
    """Unitary of a time-ordered gate list (objects with ``name``, ``qubits``, ``angle``).

    Supported names: ``rx``, ``ry``, ``rz`` (``exp(-i angle/2 P)``), ``h``,
    ``cx``, ``rxx``, ``ryy`` (``exp(-i angle/2 PP)``).
    """
    if n > cap:
        raise ResourceCapError(f"{n} qubits exceeds the dense-unitary cap of {cap}")
    dim = 2**n
    u = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in gates:
        u = apply_local(u, gate_matrix(g.name, g.angle), tuple(g.qubits), n)
    return u.reshape(dim, dim)


def gate_matrix(name: str, angle: float = 0.0) -> np.ndarray:
    half = 0.5 * angle
    c, s = np.cos(half), np.sin(half)
    if name in ("rx", "ry", "rz"):
        return c * I2 - 1j * s * PAULI[name[1].upper()]
    if name in ("rxx", "ryy"):
        p = PAULI[name[1].upper()]
        return c * np.eye(4) - 1j * s * np.kron(p, p)
    if name == "h":
        return (PAULI["X"] + PAULI["Z"]) / np.sqrt(2)
    if name == "cx":
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    raise ValueError(f"unknown gate {name!r}")


@dataclass(frozen=True)
class GroundState:
    energy: float
    state: np.ndarray
    degenerate: bool
    gap: float


def ground_state(h: np.ndarray, degeneracy_tol: float = 1e-9) -> GroundState:
    """Lowest eigenpair of a dense Hermitian matrix, flagging a degenerate ground space."""
    h = np.asarray(h, dtype=complex)
    if h.shape[0] > 2**UNITARY_CAP:
        raise ResourceCapError("Hamiltonian too large for dense diagonalization")
    w, v = np.linalg.eigh(h)
    gap = float(w[1] - w[0]) if w.size > 1 else float("inf")
    return GroundState(float(w[0]), v[:, 0], gap <= degeneracy_tol, gap)
