"""SU(2) elements and the Euler re-decomposition kernel.

Every block parameter in the package lives in a 2x2 special-unitary matrix
``[[p, q], [-q*, p*]]``.  Rotations use the ``exp(-i theta sigma)`` convention
(no factor 1/2), so ``rx(theta)`` has period 2*pi and ``rx(pi) == -I``.

The turnover rewrites ``R_x(a) R_z(b) R_x(c)`` as ``R_z(alpha) R_x(beta) R_z(gamma)``
(or the reverse).  It is computed from the matrix entries with ``atan2``/``arg``
rather than from tangent identities, so there are no singular inputs.
"""

from __future__ import annotations

import cmath
import math
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Iterator

import numpy as np

# Below this magnitude an off-diagonal (or diagonal) entry is treated as zero
# and the undetermined Euler phase is pinned to 0.
DEGENERATE_TOL = 1e-14

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True, slots=True)
class Su2Element:
    """The matrix ``[[p, q], [-conj(q), conj(p)]]`` with ``|p|^2 + |q|^2 = 1``."""

    p: complex
    q: complex

    @classmethod
    def identity(cls) -> Su2Element:
        return cls(1.0 + 0j, 0j)

    @classmethod
    def rx(cls, theta: float) -> Su2Element:
        return cls(complex(math.cos(theta), 0.0), complex(0.0, -math.sin(theta)))

    @classmethod
    def rz(cls, theta: float) -> Su2Element:
        return cls(complex(math.cos(theta), -math.sin(theta)), 0j)

    @classmethod
    def rot(cls, axis: str, theta: float) -> Su2Element:
        if axis == "x":
            return cls.rx(theta)
        if axis == "z":
            return cls.rz(theta)
        raise ValueError(f"unknown rotation axis {axis!r}")

    @classmethod
    def from_vector(cls, vx: float, vy: float, vz: float) -> Su2Element:
        """``exp(-i (vx X + vy Y + vz Z))``."""
        norm = math.sqrt(vx * vx + vy * vy + vz * vz)
        if norm == 0.0:
            return cls.identity()
        s = math.sin(norm) / norm
        return cls(complex(math.cos(norm), -s * vz), complex(-s * vy, -s * vx))

    @classmethod
    def from_matrix(cls, m, tol: float = 1e-12) -> Su2Element:
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        u = cls(complex(m[0, 0]), complex(m[0, 1]))
        if np.linalg.norm(u.matrix - m) > tol or abs(np.linalg.det(m) - 1) > tol:
            raise ValueError("matrix is not special-unitary")
        return u

    @property
    def matrix(self) -> np.ndarray:
        p, q = self.p, self.q
        return np.array([[p, q], [-q.conjugate(), p.conjugate()]], dtype=complex)

    def __matmul__(self, other: Su2Element) -> Su2Element:
        p1, q1, p2, q2 = self.p, self.q, other.p, other.q
        return Su2Element(p1 * p2 - q1 * q2.conjugate(), p1 * q2 + q1 * p2.conjugate())

    def dagger(self) -> Su2Element:
        return Su2Element(self.p.conjugate(), -self.q)

    def det(self) -> float:
        return abs(self.p) ** 2 + abs(self.q) ** 2

    def unitarity_defect(self) -> float:
        m = self.matrix
        return max(
            float(np.linalg.norm(m.conj().T @ m - np.eye(2))),
            float(abs(np.linalg.det(m) - 1)),
        )

    def swap_axes(self) -> Su2Element:
        """Conjugate by ``(X + Z)/sqrt(2)``, exchanging the x and z rotation axes."""
        p, q = self.p, self.q
        return Su2Element(complex(p.real, q.imag), complex(-q.real, p.imag))

    def flip(self) -> Su2Element:
        """Conjugate by ``X``."""
        return Su2Element(self.p.conjugate(), -self.q.conjugate())

    def angle(self, axis: str) -> float:
        """Rotation angle of a single-axis element ``rot(axis, theta)``."""
        if axis == "x":
            return math.atan2(-self.q.imag, self.p.real)
        if axis == "z":
            return math.atan2(-self.p.imag, self.p.real)
        raise ValueError(f"unknown rotation axis {axis!r}")

    def is_identity(self, tol: float = 0.0) -> bool:
        return abs(self.p - 1) <= tol and abs(self.q) <= tol

    def distance(self, other: Su2Element) -> float:
        """Frobenius distance between the two matrices (no phase freedom)."""
        return math.sqrt(2.0 * (abs(self.p - other.p) ** 2 + abs(self.q - other.q) ** 2))


OTHER_AXIS = {"x": "z", "z": "x"}


@dataclass(frozen=True)
class EulerTriple:
    """``sign * R_outer(a) R_inner(b) R_outer(c)``; inner is the other axis of x/z."""

    outer: str
    angles: tuple[float, float, float]
    sign: int = 1

    def __post_init__(self):
        if self.outer not in OTHER_AXIS:
            raise ValueError(f"outer axis must be 'x' or 'z', got {self.outer!r}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def inner(self) -> str:
        return OTHER_AXIS[self.outer]

    def element(self) -> Su2Element:
        a, b, c = self.angles
        u = Su2Element.rot(self.outer, a) @ Su2Element.rot(self.inner, b) @ Su2Element.rot(self.outer, c)
        if self.sign == -1:
            u = Su2Element(-u.p, -u.q)
        return u


def _wrap_half(x: float) -> tuple[float, int]:
    """Reduce ``x`` into (-pi/2, pi/2]; return the reduced value and the parity of pi shifts."""
    k = math.ceil((x - HALF_PI) / math.pi)
    y = x - k * math.pi
    if y <= -HALF_PI:
        y += math.pi
        k -= 1
    return y, k & 1


def wrap_angle(x: float) -> float:
    """Map ``x`` into (-pi, pi]."""
    y = math.remainder(x, 2.0 * math.pi)
    return math.pi if y == -math.pi else y


def _extract_z_outer(p: complex, q: complex) -> tuple[float, float, float]:
    # p = e^{-i(a+c)} cos b,  q = -i e^{-i(a-c)} sin b
    abs_p, abs_q = abs(p), abs(q)
    if abs_q <= DEGENERATE_TOL:
        # pure outer-axis rotation: keep it in one angle
        return wrap_angle(-cmath.phase(p)), 0.0, 0.0
    if abs_p <= DEGENERATE_TOL:
        s, flip_cos = 0.0, 0
    else:
        s, flip_cos = _wrap_half(-cmath.phase(p))
    d, flip_sin = _wrap_half(-cmath.phase(1j * q))
    b = math.atan2(-abs_q if flip_sin else abs_q, -abs_p if flip_cos else abs_p)
    return 0.5 * (s + d), wrap_angle(b), 0.5 * (s - d)


def euler_extract(u: Su2Element, outer: str) -> EulerTriple:
    """Decompose ``u`` as ``R_outer(a) R_inner(b) R_outer(c)``.

    Outer angles land in (-pi/2, pi/2] and the middle angle in (-pi, pi], which
    makes the decomposition exact without a global sign.  A pure outer-axis
    rotation comes back as ``(theta, 0, 0)`` with theta in (-pi, pi]; a pure
    inner-axis rotation gives ``(0, theta, 0)``.
    """
    if outer == "z":
        return EulerTriple("z", _extract_z_outer(u.p, u.q))
    if outer == "x":
        w = u.swap_axes()
        return EulerTriple("x", _extract_z_outer(w.p, w.q))
    raise ValueError(f"outer axis must be 'x' or 'z', got {outer!r}")


class TurnoverTally:
    """Counts su(2) turnover invocations made inside a ``count_su2_turnovers`` block."""

    def __init__(self):
        self.count = 0


_TALLIES: ContextVar[tuple[TurnoverTally, ...]] = ContextVar("su2_turnover_tallies", default=())


@contextmanager
def count_su2_turnovers() -> Iterator[TurnoverTally]:
    tally = TurnoverTally()
    token = _TALLIES.set(_TALLIES.get() + (tally,))
    try:
        yield tally
    finally:
        _TALLIES.reset(token)


def _record_turnover() -> None:
    for tally in _TALLIES.get():
        tally.count += 1


def turnover_element(u: Su2Element, outer: str) -> EulerTriple:
    """Re-decompose ``u`` with the given outer axis; counted as one su(2) turnover."""
    _record_turnover()
    return euler_extract(u, outer)


def su2_turnover(triple: EulerTriple) -> EulerTriple:
    """Rewrite an x-z-x triple as z-x-z (or z-x-z as x-z-x) for the same element."""
    return turnover_element(triple.element(), triple.inner)


def su2_fuse(u: Su2Element, v: Su2Element) -> Su2Element:
    return u @ v


def turnover_angles_tangent(a: float, b: float, c: float) -> tuple[float, float, float]:
    """Closed-form x-z-x -> z-x-z angles from the tangent identities.

    Only well conditioned away from ``cos(a +- c) = 0``, ``sin(a +- c) = 0`` and
    ``cos(b) = 0``.  Branches of the arctangents are fixed by testing the
    candidates against the reconstructed matrix; kept as an independent check of
    the matrix-based kernel.
    """
    target = EulerTriple("x", (a, b, c)).element()
    sum_ag = math.atan(math.tan(b) * math.cos(a - c) / math.cos(a + c))
    diff_ag = math.atan(-math.tan(b) * math.sin(a - c) / math.sin(a + c))
    best = None
    for ks in (0, 1):
        for kd in (0, 1):
            s = sum_ag + ks * math.pi
            d = diff_ag + kd * math.pi
            alpha, gamma = 0.5 * (s + d), 0.5 * (s - d)
            beta0 = math.atan(math.tan(a + c) * math.cos(s) / math.cos(d))
            for kb in (0, 1):
                beta = beta0 + kb * math.pi
                cand = EulerTriple("z", (alpha, beta, gamma)).element()
                err = min(cand.distance(target), Su2Element(-cand.p, -cand.q).distance(target))
                if best is None or err < best[0]:
                    best = (err, (alpha, beta, gamma))
    return best[1]
