"""Compression of block circuits into triangles and squares.

The counters record *logical* operations, one per rewrite the algorithm
performs, so they match the closed-form counts independently of the
parameters.  Rewrites that touch an identity block are short-circuited; the
``effective_*`` fields count only the kernels that actually ran.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .algebra import fuse_blocks, turnover_blocks
from .core import Block, Cascade, Square, Triangle, Zigzag


@dataclass
class OpCounter:
    turnovers: int = 0
    fusions: int = 0
    effective_turnovers: int = 0
    effective_fusions: int = 0

    def __iadd__(self, other: OpCounter) -> OpCounter:
        self.turnovers += other.turnovers
        self.fusions += other.fusions
        self.effective_turnovers += other.effective_turnovers
        self.effective_fusions += other.effective_fusions
        return self


def _fuse(left: Block, right: Block, counter: OpCounter) -> Block:
    counter.fusions += 1
    if right.is_identity():
        return left
    if left.is_identity():
        return right
    counter.effective_fusions += 1
    return fuse_blocks(left, right)


def _pass_left(slots: list[Block], lo: int, b: Block, counter: OpCounter) -> Block:
    """``C . B_m -> B_{m+1} . C'`` in place; ``slots[k]`` holds ``B_{lo+k}``."""
    m = b.index
    k = m - lo
    cm, cn = slots[k], slots[k + 1]
    counter.turnovers += 1
    if b.is_identity():
        return Block.identity(b.mapping, m + 1)
    if cn.is_identity():
        slots[k] = _fuse_quiet(cm, b, counter)
        return Block.identity(b.mapping, m + 1)
    if cm.is_identity():
        slots[k], slots[k + 1] = b, Block.identity(b.mapping, m + 1)
        return cn
    counter.effective_turnovers += 1
    out, slots[k], slots[k + 1] = turnover_blocks(cm, cn, b)
    return out


def _pass_right(slots: list[Block], lo: int, b: Block, counter: OpCounter) -> Block:
    """``B_m . C -> C' . B_{m-1}`` in place; ``slots[k]`` holds ``B_{lo+k}``."""
    m = b.index
    k = m - lo
    cl, cm = slots[k - 1], slots[k]
    counter.turnovers += 1
    if b.is_identity():
        return Block.identity(b.mapping, m - 1)
    if cl.is_identity():
        slots[k] = _fuse_quiet(b, cm, counter)
        return Block.identity(b.mapping, m - 1)
    if cm.is_identity():
        slots[k - 1], slots[k] = Block.identity(b.mapping, m - 1), b
        return cl
    counter.effective_turnovers += 1
    slots[k - 1], slots[k], out = turnover_blocks(b, cl, cm)
    return out


def _fuse_quiet(left: Block, right: Block, counter: OpCounter) -> Block:
    # a fusion that replaces a turnover against an identity; not a logical fusion
    if right.is_identity():
        return left
    if left.is_identity():
        return right
    counter.effective_fusions += 1
    return fuse_blocks(left, right)


def pass_through_cascade(c: Cascade, b: Block, counter: Optional[OpCounter] = None) -> tuple[Cascade, Block]:
    """Rewrite ``C_{j,n} B_m`` as ``B_{m+1} C'_{j,n}`` with one turnover (``j <= m < n``)."""
    counter = counter if counter is not None else OpCounter()
    if not c.lo <= b.index < c.hi:
        raise ValueError(f"block index {b.index} must satisfy {c.lo} <= m < {c.hi}")
    slots = list(c.blocks)
    out = _pass_left(slots, c.lo, b, counter)
    return Cascade(c.lo, c.hi, tuple(slots)), out


class _TriangleBuffer:
    """Mutable triangle: ``rows[lo]`` holds the blocks of ``C_{lo,n}``."""

    def __init__(self, t: Triangle):
        self.n = t.height
        self.mapping = t.mapping
        self.rows = {c.lo: list(c.blocks) for c in t.cascades}

    def merge(self, b: Block, counter: OpCounter) -> None:
        n, m = self.n, b.index
        if not 1 <= m <= n:
            raise ValueError(f"block index {m} outside 1..{n}")
        if b.mapping != self.mapping:
            raise ValueError("block mapping differs from the triangle's")
        for lo in range(1, n - m + 1):
            b = _pass_left(self.rows[lo], lo, b, counter)
        row = self.rows[n - m + 1]
        row[-1] = _fuse(row[-1], b, counter)

    def freeze(self) -> Triangle:
        cascades = tuple(
            Cascade(lo, self.n, tuple(self.rows[lo])) for lo in range(self.n, 0, -1)
        )
        return Triangle(self.n, self.mapping, cascades)


def merge_block_into_triangle(t: Triangle, b: Block, counter: Optional[OpCounter] = None) -> Triangle:
    """``T_n B_m -> T'_n`` using ``n - m`` turnovers and one fusion."""
    counter = counter if counter is not None else OpCounter()
    if b.index > t.height:
        raise ValueError(f"block index {b.index} exceeds triangle height {t.height}")
    buf = _TriangleBuffer(t)
    buf.merge(b, counter)
    return buf.freeze()


def merge_zigzag_into_triangle(t: Triangle, z: Zigzag, counter: Optional[OpCounter] = None) -> Triangle:
    """``T_n Z_n -> T'_n`` using ``n(n-1)/2`` turnovers and ``n`` fusions."""
    counter = counter if counter is not None else OpCounter()
    if t.height != z.height:
        raise ValueError(f"height mismatch: triangle {t.height}, zigzag {z.height}")
    buf = _TriangleBuffer(t)
    for b in z.blocks:
        buf.merge(b, counter)
    return buf.freeze()


def merge_triangles(t1: Triangle, t2: Triangle, counter: Optional[OpCounter] = None) -> Triangle:
    """``T_n T'_n -> T''_n`` by merging the blocks of ``t2`` one at a time.

    Costs ``n(n^2 - 1)/6`` turnovers and one fusion per block of ``t2``,
    i.e. ``n(n + 1)/2`` fusions.
    """
    counter = counter if counter is not None else OpCounter()
    if t1.height != t2.height:
        raise ValueError(f"height mismatch: {t1.height} vs {t2.height}")
    buf = _TriangleBuffer(t1)
    for b in t2.blocks():
        buf.merge(b, counter)
    return buf.freeze()


def zigzag_to_triangle(z: Zigzag) -> Triangle:
    """Embed a zigzag into an identity-padded triangle without any rewrite.

    Even blocks and ``B_1`` go into ``C_{1,n}``; every other odd block
    ``B_k`` opens its own cascade ``C_{k,n}``.
    """
    n = z.height
    t = Triangle.identity(z.mapping, n)
    rows = {c.lo: list(c.blocks) for c in t.cascades}
    for b in z.blocks:
        lo = b.index if b.index % 2 and b.index > 1 else 1
        rows[lo][b.index - lo] = b
    return Triangle(n, z.mapping, tuple(Cascade(lo, n, tuple(rows[lo])) for lo in range(n, 0, -1)))


def compress_time_dependent(steps: Sequence[Zigzag], counter: Optional[OpCounter] = None) -> Triangle:
    """Compress chronologically ordered steps ``Z_1, ..., Z_r`` into ``T = Z_r ... Z_1``.

    The latest step seeds the triangle and earlier steps are merged on the
    right: ``(r - 1) n(n - 1)/2`` turnovers.
    """
    counter = counter if counter is not None else OpCounter()
    if not steps:
        raise ValueError("at least one Trotter step is required")
    heights = {z.height for z in steps}
    if len(heights) != 1:
        raise ValueError(f"steps have mixed heights {sorted(heights)}")
    buf = _TriangleBuffer(zigzag_to_triangle(steps[-1]))
    for z in reversed(steps[:-1]):
        for b in z.blocks:
            buf.merge(b, counter)
    return buf.freeze()


def compress_time_independent(step: Zigzag, r: int, counter: Optional[OpCounter] = None) -> Triangle:
    """Compress ``Z^r`` by binary exponentiation over triangles.

    The running power is squared only while higher bits of ``r`` remain, so a
    power of two ``2^k`` costs exactly ``k`` triangle merges.
    """
    counter = counter if counter is not None else OpCounter()
    if r < 1:
        raise ValueError(f"step count must be >= 1, got {r}")
    power = zigzag_to_triangle(step)
    acc = None
    while True:
        if r & 1:
            acc = power if acc is None else merge_triangles(acc, power, counter)
        r >>= 1
        if not r:
            return acc
        power = merge_triangles(power, power, counter)


def triangle_to_square(t: Triangle, counter: Optional[OpCounter] = None) -> Square:
    """Rearrange ``T_n`` into the square layout.

    Cascades ``C_{k,n}`` with ``k = n, n-2, ...`` (down to 2) are moved right
    through their neighbours; each pass shifts a cascade's span down by one,
    ``C_{a,b} C_{i,j} = C'_{i,j} C_{a-1,b-1}``, and costs one turnover per
    moved block.
    """
    counter = counter if counter is not None else OpCounter()
    n = t.height
    seq = [[c.lo, c.hi, list(c.blocks)] for c in t.cascades]
    for k in range(n, 1, -2):
        pos = next(p for p, c in enumerate(seq) if c[0] == k and c[1] == n)
        while seq[pos][0] > 1:
            a, b, mover = seq[pos]
            i, _, stat = seq[pos + 1]
            if i >= a:
                raise AssertionError("cascade shift requires a lower-starting neighbour")
            moved = [None] * len(mover)
            for q in range(len(mover) - 1, -1, -1):
                moved[q] = _pass_right(stat, i, mover[q], counter)
            seq[pos], seq[pos + 1] = seq[pos + 1], [a - 1, b - 1, moved]
            pos += 1
    cascades = tuple(Cascade(lo, hi, tuple(bs)) for lo, hi, bs in seq)
    return Square(n, t.mapping, cascades)


@dataclass
class CompressionReport:
    model: str
    n: int
    r: int
    path: str
    turnovers: int
    fusions: int
    effective_turnovers: int
    effective_fusions: int
    square_turnovers: int
    wall_time: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class CompressionResult:
    triangle: Triangle
    square: Square
    report: CompressionReport
    counter: OpCounter = field(default_factory=OpCounter)


def compress(
    steps: Sequence[Zigzag],
    path: str = "td",
    model: str = "",
    n_qubits: Optional[int] = None,
    r: Optional[int] = None,
) -> CompressionResult:
    """Compress a Trotter circuit into a square and time the run.

    ``path="ti"`` repeats ``steps[0]`` ``r`` times (default ``len(steps)``);
    ``"td"`` merges the steps as given.
    """
    start = time.perf_counter()
    counter = OpCounter()
    r = len(steps) if r is None or path == "td" else r
    if path == "ti":
        tri = compress_time_independent(steps[0], r, counter)
    elif path == "td":
        tri = compress_time_dependent(steps, counter)
    else:
        raise ValueError(f"unknown compression path {path!r}")
    sq_counter = OpCounter()
    sq = triangle_to_square(tri, sq_counter)
    report = CompressionReport(
        model=model,
        n=n_qubits if n_qubits is not None else steps[0].num_qubits,
        r=r,
        path=path,
        turnovers=counter.turnovers,
        fusions=counter.fusions,
        effective_turnovers=counter.effective_turnovers,
        effective_fusions=counter.effective_fusions,
        square_turnovers=sq_counter.turnovers,
        wall_time=time.perf_counter() - start,
    )
    return CompressionResult(tri, sq, report, counter)
