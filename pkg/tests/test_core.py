import numpy as np
import pytest

from blockcomp.core import (
    Block,
    Cascade,
    Square,
    Triangle,
    Zigzag,
    commutes,
    depth,
    flatten,
    get_mapping,
    zigzag_from_blocks,
)
from blockcomp.sim import block_operator
from helpers import random_block


def test_mapping_kinds_and_qubits():
    k = get_mapping("kitaev")
    assert [k.kind(i) for i in (1, 2, 3)] == ["xx", "yy", "xx"]
    assert [get_mapping("kitaev-swapped").kind(i) for i in (1, 2)] == ["yy", "xx"]
    t = get_mapping("tfim")
    assert [t.kind(i) for i in (1, 2, 3)] == ["z", "xx", "z"]
    assert t.qubits(3) == (1,) and t.qubits(4) == (1, 2)
    assert t.num_qubits(9) == 5 and k.num_qubits(4) == 5
    with pytest.raises(ValueError):
        t.num_qubits(4)
    with pytest.raises(ValueError):
        get_mapping("nope")


def test_block_validation():
    with pytest.raises(ValueError):
        Block.identity("kitaev", 0)
    b = Block.identity("tfxy", 2)
    with pytest.raises(TypeError):
        Block(get_mapping("kitaev"), 1, b.payload)


def test_block_angle_round_trip():
    for name, idx in (("kitaev", 1), ("kitaev", 2), ("tfim", 1), ("tfim", 2)):
        assert Block.rotation(name, idx, 0.37).angle == pytest.approx(0.37)


def test_commutation_matches_matrices():
    rng = np.random.default_rng(0)
    for name, n, height in (("kitaev", 4, 3), ("tfim", 3, 5), ("tfxy", 4, 3)):
        for i in range(1, height + 1):
            for j in range(1, height + 1):
                a = block_operator(random_block(rng, name, i), n)
                b = block_operator(random_block(rng, name, j), n)
                matrix_commutes = np.linalg.norm(a @ b - b @ a) < 1e-12
                if commutes(Block.identity(name, i), Block.identity(name, j)):
                    assert matrix_commutes
                if abs(i - j) == 1:
                    assert not matrix_commutes


def test_far_blocks_commute_and_same_index_commute_for_single_generators():
    assert commutes(Block.identity("kitaev", 1), Block.identity("kitaev", 3))
    assert not commutes(Block.identity("kitaev", 1), Block.identity("kitaev", 2))
    assert commutes(Block.identity("tfim", 2), Block.identity("tfim", 2))


def test_zigzag_order_and_padding():
    assert Zigzag.order(5) == [1, 3, 5, 2, 4]
    z = zigzag_from_blocks([Block.rotation("kitaev", 2, 0.1)], 4)
    assert [b.index for b in z.blocks] == [1, 3, 2, 4]
    assert z.block(2).angle == pytest.approx(0.1)
    assert z.block(1).is_identity()
    with pytest.raises(ValueError):
        zigzag_from_blocks([Block.identity("kitaev", 5)], 4)
    with pytest.raises(ValueError):
        zigzag_from_blocks([Block.identity("kitaev", 1)] * 2, 4)


def test_cascade_rejects_bad_spans():
    with pytest.raises(ValueError):
        Cascade(2, 1, ())
    with pytest.raises(ValueError):
        Cascade(1, 2, (Block.identity("kitaev", 2), Block.identity("kitaev", 1)))


def test_triangle_layout_and_size():
    assert Triangle.layout(3) == [(3, 3), (2, 3), (1, 3)]
    t = Triangle.identity("tfim", 5)
    assert len(t.blocks()) == 15
    assert t.cascade(2).lo == 2


def test_square_layouts():
    assert Square.layout(5) == [(4, 5), (2, 5), (1, 5), (1, 3), (1, 1)]
    assert Square.layout(4) == [(3, 4), (1, 4), (1, 3), (1, 1)]
    assert Square.layout(2) == [(1, 2), (1, 1)]
    for n in range(1, 12):
        assert sum(hi - lo + 1 for lo, hi in Square.layout(n)) == n * (n + 1) // 2


def test_depth_examples():
    z = zigzag_from_blocks([], 5, "kitaev")
    assert depth(z) == 2
    assert depth(Triangle.identity("kitaev", 3)) == 5
    assert depth(Cascade.identity("kitaev", 1, 4)) == 4
    assert depth(Triangle.identity("kitaev", 5)) == 9
    assert depth(Square(5, get_mapping("kitaev"), tuple(Cascade.identity("kitaev", lo, hi) for lo, hi in Square.layout(5)))) == 6


def test_flatten_order():
    t = Triangle.identity("kitaev", 3)
    assert [b.index for b in flatten(t)] == [3, 2, 3, 1, 2, 3]
    assert [b.index for b in flatten([t.cascade(3), t.cascade(2)])] == [3, 2, 3]
