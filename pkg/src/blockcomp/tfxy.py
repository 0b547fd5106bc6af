"""Two-qubit TFXY blocks as a pair of SU(2) sectors.

A TFXY block ``exp(-i(a Z1 + b Z2)) exp(-i(c XX + d YY)) exp(-i(f Z1 + g Z2))``
leaves the subspaces span{|00>, |11>} and span{|01>, |10>} invariant and acts
on each as an SU(2) element.  The first qubit of the block is the most
significant bit of the 4x4 matrix.

Generator images in each sector:

    ======  =========  ========
    term    minus      plus
    ======  =========  ========
    Z1      Z          Z
    Z2      Z          -Z
    XX      X          X
    YY      -X         X
    XY      Y          -Y
    YX      Y          Y
    ======  =========  ========
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .su2 import EulerTriple, Su2Element, euler_extract, turnover_element

MINUS_IDX = (0, 3)
PLUS_IDX = (1, 2)


@dataclass(frozen=True, slots=True)
class TfxyPayload:
    """Sector pair; ``minus`` acts on {|00>, |11>} and ``plus`` on {|01>, |10>}."""

    plus: Su2Element
    minus: Su2Element

    @classmethod
    def identity(cls) -> TfxyPayload:
        return cls(Su2Element.identity(), Su2Element.identity())

    @classmethod
    def from_angles(cls, a: float, b: float, c: float, d: float, f: float, g: float) -> TfxyPayload:
        rz, rx = Su2Element.rz, Su2Element.rx
        minus = rz(a + b) @ rx(c - d) @ rz(f + g)
        plus = rz(a - b) @ rx(c + d) @ rz(f - g)
        return cls(plus, minus)

    @classmethod
    def from_terms(
        cls,
        xx: float = 0.0,
        yy: float = 0.0,
        xy: float = 0.0,
        yx: float = 0.0,
        z_first: float = 0.0,
        z_second: float = 0.0,
    ) -> TfxyPayload:
        """``exp(-i(xx XX + yy YY + xy XY + yx YX + z_first Z1 + z_second Z2))`` exactly."""
        minus = Su2Element.from_vector(xx - yy, xy + yx, z_first + z_second)
        plus = Su2Element.from_vector(xx + yy, yx - xy, z_first - z_second)
        return cls(plus, minus)

    def angles(self) -> tuple[float, float, float, float, float, float]:
        """Angles ``(a, b, c, d, f, g)`` with ``from_angles(*angles())`` equal to ``self``."""
        am, bm, cm = euler_extract(self.minus, "z").angles
        ap, bp, cp = euler_extract(self.plus, "z").angles
        return (
            0.5 * (am + ap),
            0.5 * (am - ap),
            0.5 * (bm + bp),
            0.5 * (bp - bm),
            0.5 * (cm + cp),
            0.5 * (cm - cp),
        )

    @property
    def matrix(self) -> np.ndarray:
        m = np.zeros((4, 4), dtype=complex)
        m[np.ix_(MINUS_IDX, MINUS_IDX)] = self.minus.matrix
        m[np.ix_(PLUS_IDX, PLUS_IDX)] = self.plus.matrix
        return m

    def __matmul__(self, other: TfxyPayload) -> TfxyPayload:
        return TfxyPayload(self.plus @ other.plus, self.minus @ other.minus)

    def dagger(self) -> TfxyPayload:
        return TfxyPayload(self.plus.dagger(), self.minus.dagger())

    def swap_qubits(self) -> TfxyPayload:
        """The same block with its two qubits exchanged."""
        return TfxyPayload(self.plus.flip(), self.minus)

    def is_identity(self, tol: float = 0.0) -> bool:
        return self.plus.is_identity(tol) and self.minus.is_identity(tol)

    def distance(self, other: TfxyPayload) -> float:
        return math.hypot(self.plus.distance(other.plus), self.minus.distance(other.minus))


def _fuse_sector(u: Su2Element, v: Su2Element) -> Su2Element:
    a1, b1, c1 = euler_extract(u, "z").angles
    a2, b2, c2 = euler_extract(v, "z").angles
    # Rx(b1) Rz(c1 + a2) Rx(b2) -> Rz(al) Rx(be) Rz(ga)
    middle = Su2Element.rx(b1) @ Su2Element.rz(c1 + a2) @ Su2Element.rx(b2)
    al, be, ga = turnover_element(middle, "z").angles
    return Su2Element.rz(a1 + al) @ Su2Element.rx(be) @ Su2Element.rz(ga + c2)


def tfxy_fuse(p: TfxyPayload, q: TfxyPayload) -> TfxyPayload:
    """Fuse two TFXY blocks on the same qubit pair (``p`` applied after ``q``).

    Each sector goes through its Euler form and one su(2) turnover of the inner
    x-z-x triple, so a fusion costs two counted turnovers.
    """
    return TfxyPayload(_fuse_sector(p.plus, q.plus), _fuse_sector(p.minus, q.minus))


# Three-qubit transverse-field Ising primitives: 1 = Z0, 2 = X0X1, 3 = Z1,
# 4 = X1X2, 5 = Z2.  Odd primitives map to the x axis of the abstract su(2).
_AXIS = {1: "x", 2: "z", 3: "x", 4: "z", 5: "x"}
_Q = math.pi / 4
_DEGENERATE_TOL = 1e-13


def _expand(payload: TfxyPayload, first: int) -> list[tuple[int, float]]:
    # YY(d) = Z1(-pi/4) Z2(-pi/4) XX(d) Z1(pi/4) Z2(pi/4)
    a, b, c, d, f, g = payload.angles()
    z1, xx, z2 = first, first + 1, first + 2
    return [(z1, a), (z2, b), (xx, c), (z1, -_Q), (z2, -_Q), (xx, d), (z1, f + _Q), (z2, g + _Q)]


def _v_word(v1: TfxyPayload, v2: TfxyPayload, v3: TfxyPayload) -> list[tuple[int, float]]:
    """Primitive word of ``V = B1(v1) B2(v2) B1(v3)`` with the Z junctions fused."""
    e1, e2, e3 = _expand(v1, 1), _expand(v2, 3), _expand(v3, 1)
    # e1 ends with Z0, Z1; e2 starts with Z1, Z2
    join12 = [(1, e1[6][1]), (3, e1[7][1] + e2[0][1]), (5, e2[1][1])]
    # e2 ends with Z1, Z2; e3 starts with Z0, Z1
    join23 = [(1, e3[0][1]), (3, e2[6][1] + e3[1][1]), (5, e2[7][1])]
    return e1[:6] + join12 + e2[2:6] + join23 + e3[2:]


def _merge_sparse(tri: list[list[float | None]], index: int, angle: float) -> None:
    """Merge one primitive into a sparse 5-level triangle (``None`` slots are identities).

    ``tri[k]`` is the cascade spanning ``k+1 .. 5`` stored by absolute slot, so
    ``tri[k][j]`` holds primitive ``j+1``.  Passing a cascade costs one su(2)
    turnover unless an identity slot lets the primitive fuse or slide through.
    """
    n = 5
    cur, e = index, angle
    for k in range(n - index):
        cascade = tri[k]
        cm, cn = cascade[cur - 1], cascade[cur]
        if cn is None:
            cascade[cur - 1] = e if cm is None else cm + e
            return
        if cm is None:
            cascade[cur - 1], cascade[cur] = e, None
            e = cn
        else:
            t = turnover_element(EulerTriple(_AXIS[cur], (cm, cn, e)).element(), _AXIS[cur + 1])
            e, cascade[cur - 1], cascade[cur] = t.angles
        cur += 1
    cascade = tri[n - index]
    cascade[n - 1] = e if cascade[n - 1] is None else cascade[n - 1] + e


def _slot(tri, k: int, j: int) -> float:
    x = tri[k - 1][j - 1]
    return 0.0 if x is None else x


def tfxy_turnover(
    v1: TfxyPayload, v2: TfxyPayload, v3: TfxyPayload
) -> tuple[TfxyPayload, TfxyPayload, TfxyPayload]:
    """Rewrite ``B_i(v1) B_{i+1}(v2) B_i(v3)`` as ``B_{i+1}(l1) B_i(l2) B_{i+1}(l3)``.

    The V is expanded to Z/XX primitives, merged into a five-level Ising
    triangle (26 su(2) turnovers), and the triangle is regrouped into three
    two-qubit pieces, each closed by one ``tfxy_fuse`` (6 turnovers).
    """
    # tri[k] spans primitives k+1..5; slots outside the span stay None
    tri: list[list[float | None]] = [[None] * 5 for _ in range(5)]
    for idx, ang in _v_word(v1, v2, v3):
        _merge_sparse(tri, idx, ang)

    s = lambda lo, j: _slot(tri, lo, j)  # noqa: E731  slot j of cascade C_{lo,5}
    # triangle = [5][4 5][3 4 5][2 3 4 5][1 2 3 4 5]
    # leading group on qubits (1, 2): (5 4)(5 3 4)
    g1 = tfxy_fuse(
        TfxyPayload.from_angles(0.0, s(5, 5), s(4, 4), 0.0, 0.0, 0.0),
        TfxyPayload.from_angles(s(3, 3), s(4, 5), s(3, 4), 0.0, 0.0, 0.0),
    )
    # the tail 5 | 2 3 4 5 | 1 2 3 4 5 splits into a (0, 1) and a (1, 2) group
    g2 = tfxy_fuse(
        TfxyPayload.from_angles(0.0, 0.0, s(2, 2), 0.0, 0.0, s(2, 3)),
        TfxyPayload.from_angles(s(1, 1), 0.0, s(1, 2), 0.0, 0.0, 0.0),
    )
    g3 = tfxy_fuse(
        TfxyPayload.from_angles(0.0, s(3, 5), s(2, 4), 0.0, 0.0, s(2, 5)),
        TfxyPayload.from_angles(s(1, 3), 0.0, s(1, 4), 0.0, 0.0, s(1, 5)),
    )
    if g2.is_identity(_DEGENERATE_TOL):
        # identity middle: the outer pair fuses, mirroring the su(2) b = 0 rule
        e = TfxyPayload.identity()
        return g1 @ g3, e, e
    return g1, g2, g3


def tfxy_turnover_reverse(
    l1: TfxyPayload, l2: TfxyPayload, l3: TfxyPayload
) -> tuple[TfxyPayload, TfxyPayload, TfxyPayload]:
    """Rewrite ``B_{i+1}(l1) B_i(l2) B_{i+1}(l3)`` as ``B_i(v1) B_{i+1}(v2) B_i(v3)``.

    Mirrors the three qubits, which exchanges the two block positions and swaps
    the qubits inside each block, then reuses :func:`tfxy_turnover`.
    """
    out = tfxy_turnover(l1.swap_qubits(), l2.swap_qubits(), l3.swap_qubits())
    return tuple(p.swap_qubits() for p in out)
