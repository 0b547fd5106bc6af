"""Block-level fusion and turnover on top of the SU(2) and TFXY kernels."""

from __future__ import annotations

from .core import Block, paulis_commute, axis_of
from .su2 import (  # noqa: F401  re-exported kernel API
    EulerTriple,
    Su2Element,
    count_su2_turnovers,
    euler_extract,
    su2_fuse,
    su2_turnover,
    turnover_angles_tangent,
    turnover_element,
)
from .tfxy import TfxyPayload, tfxy_fuse, tfxy_turnover, tfxy_turnover_reverse  # noqa: F401


def fuse_blocks(left: Block, right: Block) -> Block:
    """Fuse two blocks with the same index; ``left`` acts after ``right``."""
    if left.mapping != right.mapping or left.index != right.index:
        raise ValueError(f"cannot fuse B_{left.index} with B_{right.index}")
    if left.kind == "tfxy":
        return left.with_payload(tfxy_fuse(left.payload, right.payload))
    return left.with_payload(su2_fuse(left.payload, right.payload))


def _check_shape(b1: Block, b2: Block, b3: Block) -> None:
    if not (b1.mapping == b2.mapping == b3.mapping):
        raise ValueError("turnover blocks must share one mapping")
    if b1.index != b3.index or abs(b1.index - b2.index) != 1:
        raise ValueError(f"not a turnover shape: indices {b1.index}, {b2.index}, {b3.index}")


def mixed_turnover(b1: Block, b2: Block, b3: Block) -> tuple[Block, Block, Block]:
    """``B_i B_j B_i -> B_j B_i B_j`` for single-generator blocks, ``|i - j| = 1``."""
    _check_shape(b1, b2, b3)
    if b1.kind == "tfxy" or b2.kind == "tfxy":
        raise ValueError("mixed_turnover needs single-generator blocks")
    mapping = b1.mapping
    if paulis_commute(mapping.generator(b1.index), mapping.generator(b2.index)):
        raise ValueError(f"{b1.kind}/{b2.kind} pair does not generate su(2)")
    u = b1.payload @ b2.payload @ b3.payload
    al, be, ga = turnover_element(u, axis_of(b2.index)).angles
    i, j = b1.index, b2.index
    return Block.rotation(mapping, j, al), Block.rotation(mapping, i, be), Block.rotation(mapping, j, ga)


def turnover_blocks(b1: Block, b2: Block, b3: Block) -> tuple[Block, Block, Block]:
    """Dispatch a turnover on a V (``i, i+1, i``) or a Lambda (``i+1, i, i+1``)."""
    _check_shape(b1, b2, b3)
    if b1.kind != "tfxy":
        return mixed_turnover(b1, b2, b3)
    i, j = b1.index, b2.index
    kernel = tfxy_turnover if j > i else tfxy_turnover_reverse
    p1, p2, p3 = kernel(b1.payload, b2.payload, b3.payload)
    return b1.with_index(j).with_payload(p1), b1.with_payload(p2), b1.with_index(j).with_payload(p3)
