"""Circuit IR: blocks and the cascade / triangle / square / zigzag layouts.

Block indices are 1-based.  A *mapping* fixes how an index sits on the qubit
chain and which operator it carries.  Qubits are 0-based internally.  Every
structure lists its blocks in matrix-product order: the leftmost block is
applied last.

Single-generator blocks ``exp(-i theta P)`` are stored as the abstract su(2)
element ``exp(-i theta sigma)``, with sigma = X for odd and Z for even
indices.  Adjacent generators anticommute and square to one, so this is an
exact representation including the sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .su2 import Su2Element
from .tfxy import TfxyPayload

SU2_KINDS = ("xx", "yy", "z")
KINDS = SU2_KINDS + ("tfxy",)


def axis_of(index: int) -> str:
    """Abstract su(2) axis of a block index."""
    return "x" if index % 2 else "z"


@dataclass(frozen=True)
class Mapping:
    """Placement of block indices on a chain of qubits."""

    name: str

    def max_index(self, n_qubits: int) -> int:
        return 2 * n_qubits - 1 if self.name == "tfim" else n_qubits - 1

    def num_qubits(self, height: int) -> int:
        if self.name == "tfim":
            if height % 2 == 0:
                raise ValueError("an Ising height must be odd (2n - 1)")
            return (height + 1) // 2
        return height + 1

    def kind(self, index: int) -> str:
        if index < 1:
            raise ValueError(f"block index must be >= 1, got {index}")
        if self.name == "tfxy":
            return "tfxy"
        if self.name == "tfim":
            return "z" if index % 2 else "xx"
        odd_kind, even_kind = ("xx", "yy") if self.name == "kitaev" else ("yy", "xx")
        return odd_kind if index % 2 else even_kind

    def qubits(self, index: int) -> tuple[int, ...]:
        if self.name == "tfim":
            i = (index - 1) // 2
            return (i,) if index % 2 else (i, i + 1)
        return (index - 1, index)

    def generator(self, index: int) -> dict[int, str]:
        """Pauli string of a single-generator block, as ``{qubit: letter}``."""
        kind = self.kind(index)
        if kind == "tfxy":
            raise ValueError("TFXY blocks have no single generator")
        letter = {"xx": "X", "yy": "Y", "z": "Z"}[kind]
        return {q: letter for q in self.qubits(index)}


MAPPINGS = {name: Mapping(name) for name in ("kitaev", "kitaev-swapped", "tfim", "tfxy")}


def get_mapping(mapping: Union[str, Mapping]) -> Mapping:
    if isinstance(mapping, Mapping):
        return mapping
    try:
        return MAPPINGS[mapping]
    except KeyError:
        raise ValueError(f"unknown mapping {mapping!r}; expected one of {sorted(MAPPINGS)}") from None


Payload = Union[Su2Element, TfxyPayload]


@dataclass(frozen=True)
class Block:
    """One indexed circuit element under a given mapping."""

    mapping: Mapping
    index: int
    payload: Payload

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"block index must be >= 1, got {self.index}")
        want = TfxyPayload if self.kind == "tfxy" else Su2Element
        if not isinstance(self.payload, want):
            raise TypeError(f"{self.kind} block needs a {want.__name__} payload")

    @classmethod
    def identity(cls, mapping, index: int) -> Block:
        mapping = get_mapping(mapping)
        if mapping.kind(index) == "tfxy":
            return cls(mapping, index, TfxyPayload.identity())
        return cls(mapping, index, Su2Element.identity())

    @classmethod
    def rotation(cls, mapping, index: int, theta: float) -> Block:
        """``exp(-i theta P)`` for the block's generator ``P``."""
        return cls(get_mapping(mapping), index, Su2Element.rot(axis_of(index), theta))

    @property
    def kind(self) -> str:
        return self.mapping.kind(self.index)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.mapping.qubits(self.index)

    @property
    def angle(self) -> float:
        if self.kind == "tfxy":
            raise ValueError("TFXY blocks carry six angles; use payload.angles()")
        return self.payload.angle(axis_of(self.index))

    def cos_sin(self) -> tuple[float, float]:
        """``(cos theta, sin theta)`` of a single-generator block, read off the matrix."""
        u = self.payload
        if axis_of(self.index) == "x":
            return u.p.real, -u.q.imag
        return u.p.real, -u.p.imag

    def is_identity(self) -> bool:
        return self.payload.is_identity()

    def with_payload(self, payload: Payload) -> Block:
        return Block(self.mapping, self.index, payload)

    def with_index(self, index: int) -> Block:
        return Block(self.mapping, index, self.payload)


def paulis_commute(p1: dict[int, str], p2: dict[int, str]) -> bool:
    clashes = sum(1 for q, s in p1.items() if q in p2 and p2[q] != s)
    return clashes % 2 == 0


def commutes(b1: Block, b2: Block) -> bool:
    """Structural commutation of two blocks of the same mapping.

    Single-generator blocks commute when their Pauli strings do, which covers
    ``|i - j| > 1`` and also equal indices.  TFXY blocks commute when their
    qubit pairs are disjoint.
    """
    if b1.mapping != b2.mapping:
        raise ValueError(f"blocks from different mappings: {b1.mapping.name} vs {b2.mapping.name}")
    if b1.kind == "tfxy":
        return abs(b1.index - b2.index) > 1
    return paulis_commute(b1.mapping.generator(b1.index), b2.mapping.generator(b2.index))


def _check_blocks(blocks, mapping: Mapping, indices) -> tuple[Block, ...]:
    blocks = tuple(blocks)
    if [b.index for b in blocks] != list(indices):
        raise ValueError(f"expected block indices {list(indices)}, got {[b.index for b in blocks]}")
    for b in blocks:
        if b.mapping != mapping:
            raise ValueError("all blocks of a structure must share its mapping")
    return blocks


@dataclass(frozen=True)
class Cascade:
    """Ascending contiguous run ``B_lo B_lo+1 ... B_hi``."""

    lo: int
    hi: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise ValueError(f"invalid cascade span {self.lo}..{self.hi}")
        if [b.index for b in self.blocks] != list(range(self.lo, self.hi + 1)):
            raise ValueError("cascade blocks must be ascending and contiguous")

    @classmethod
    def identity(cls, mapping, lo: int, hi: int) -> Cascade:
        return cls(lo, hi, tuple(Block.identity(mapping, i) for i in range(lo, hi + 1)))

    def __getitem__(self, index: int) -> Block:
        """Block with the given chain index."""
        return self.blocks[index - self.lo]

    def __len__(self) -> int:
        return len(self.blocks)


class _Stacked:
    """Shared behaviour of structures made of stacked cascades."""

    height: int
    mapping: Mapping
    cascades: tuple[Cascade, ...]

    def blocks(self) -> list[Block]:
        return [b for c in self.cascades for b in c.blocks]

    @property
    def num_qubits(self) -> int:
        return self.mapping.num_qubits(self.height)

    def spans(self) -> list[tuple[int, int]]:
        return [(c.lo, c.hi) for c in self.cascades]


def _build_cascades(mapping, spans, cascades) -> tuple[Cascade, ...]:
    cascades = tuple(cascades)
    if [(c.lo, c.hi) for c in cascades] != list(spans):
        raise ValueError(f"cascade spans {[(c.lo, c.hi) for c in cascades]} do not match layout {list(spans)}")
    for c in cascades:
        _check_blocks(c.blocks, mapping, range(c.lo, c.hi + 1))
    return cascades


@dataclass(frozen=True)
class Triangle(_Stacked):
    """``T_n = C_{n,n} C_{n-1,n} ... C_{1,n}``, stored densely."""

    height: int
    mapping: Mapping
    cascades: tuple[Cascade, ...]

    def __post_init__(self):
        _build_cascades(self.mapping, self.layout(self.height), self.cascades)

    @staticmethod
    def layout(n: int) -> list[tuple[int, int]]:
        return [(k, n) for k in range(n, 0, -1)]

    @classmethod
    def identity(cls, mapping, n: int) -> Triangle:
        mapping = get_mapping(mapping)
        return cls(n, mapping, tuple(Cascade.identity(mapping, lo, hi) for lo, hi in cls.layout(n)))

    def cascade(self, lo: int) -> Cascade:
        """The cascade ``C_{lo,n}``."""
        return self.cascades[self.height - lo]


@dataclass(frozen=True)
class Square(_Stacked):
    """Depth-reduced rearrangement of a triangle.

    Odd ``n``: ``C_{n-1,n} C_{n-3,n} ... C_{2,n} . C_{1,n} C_{1,n-2} ... C_{1,1}``.
    Even ``n``: ``C_{n-1,n} C_{n-3,n} ... C_{1,n} . C_{1,n-1} C_{1,n-3} ... C_{1,1}``.
    """

    height: int
    mapping: Mapping
    cascades: tuple[Cascade, ...]

    def __post_init__(self):
        _build_cascades(self.mapping, self.layout(self.height), self.cascades)

    @staticmethod
    def layout(n: int) -> list[tuple[int, int]]:
        if n % 2:
            upper = [(k, n) for k in range(n - 1, 1, -2)]
            lower = [(1, k) for k in range(n, 0, -2)]
        else:
            upper = [(k, n) for k in range(n - 1, 0, -2)]
            lower = [(1, k) for k in range(n - 1, 0, -2)]
        return upper + lower


@dataclass(frozen=True)
class Zigzag:
    """One layer of odd-indexed blocks followed by one layer of even-indexed blocks."""

    height: int
    mapping: Mapping
    blocks: tuple[Block, ...]

    def __post_init__(self):
        _check_blocks(self.blocks, self.mapping, self.order(self.height))

    @staticmethod
    def order(n: int) -> list[int]:
        return list(range(1, n + 1, 2)) + list(range(2, n + 1, 2))

    @property
    def num_qubits(self) -> int:
        return self.mapping.num_qubits(self.height)

    def block(self, index: int) -> Block:
        return next(b for b in self.blocks if b.index == index)


Structure = Union[Triangle, Square, Zigzag, Cascade]


def zigzag_from_blocks(blocks: Iterable[Block], n: int, mapping=None) -> Zigzag:
    """Arrange at most one block per index ``1..n`` as a zigzag, padding with identities."""
    blocks = list(blocks)
    if mapping is None:
        if not blocks:
            raise ValueError("mapping is required when no blocks are given")
        mapping = blocks[0].mapping
    mapping = get_mapping(mapping)
    by_index: dict[int, Block] = {}
    for b in blocks:
        if b.mapping != mapping:
            raise ValueError("all blocks must share one mapping")
        if not 1 <= b.index <= n:
            raise ValueError(f"block index {b.index} outside 1..{n}")
        if b.index in by_index:
            raise ValueError(f"duplicate block index {b.index}")
        by_index[b.index] = b
    ordered = tuple(by_index.get(i) or Block.identity(mapping, i) for i in Zigzag.order(n))
    return Zigzag(n, mapping, ordered)


def flatten(structure) -> list[Block]:
    """Blocks of a structure (or a list of structures) in matrix-product order."""
    if isinstance(structure, (list, tuple)):
        return [b for s in structure for b in flatten(s)]
    if isinstance(structure, Block):
        return [structure]
    if isinstance(structure, Zigzag):
        return list(structure.blocks)
    if isinstance(structure, Cascade):
        return list(structure.blocks)
    return structure.blocks()


def depth(structure) -> int:
    """Greedy layer count where blocks sharing a qubit may not share a layer.

    Blocks are scheduled as early as possible in product order; identity
    blocks count as occupied positions, so the result is a property of the
    layout rather than of the parameters.
    """
    free_at: dict[int, int] = {}
    layers = 0
    for b in reversed(flatten(structure)):  # rightmost block acts first
        layer = max((free_at.get(q, 0) for q in b.qubits), default=0) + 1
        for q in b.qubits:
            free_at[q] = layer
        layers = max(layers, layer)
    return layers
