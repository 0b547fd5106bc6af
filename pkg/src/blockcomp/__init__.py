"""Compression of Trotterized spin-chain circuits into fixed-depth block squares."""

from .core import Block, Cascade, Square, Triangle, Zigzag, commutes, depth, zigzag_from_blocks
from .engine import (
    OpCounter,
    compress,
    compress_time_dependent,
    compress_time_independent,
    merge_block_into_triangle,
    merge_triangles,
    merge_zigzag_into_triangle,
    pass_through_cascade,
    triangle_to_square,
)
from .models import ModelSpec, Schedule, embed_as_tfxy, trotter_circuit, trotter_step
from .su2 import EulerTriple, Su2Element, euler_extract, su2_turnover
from .tfxy import TfxyPayload, tfxy_fuse, tfxy_turnover

__all__ = [
    "Block",
    "Cascade",
    "EulerTriple",
    "ModelSpec",
    "OpCounter",
    "Schedule",
    "Square",
    "Su2Element",
    "TfxyPayload",
    "Triangle",
    "Zigzag",
    "commutes",
    "compress",
    "compress_time_dependent",
    "compress_time_independent",
    "depth",
    "embed_as_tfxy",
    "euler_extract",
    "merge_block_into_triangle",
    "merge_triangles",
    "merge_zigzag_into_triangle",
    "pass_through_cascade",
    "su2_turnover",
    "tfxy_fuse",
    "tfxy_turnover",
    "triangle_to_square",
    "trotter_circuit",
    "trotter_step",
    "zigzag_from_blocks",
]
