"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import math
import time

import numpy as np

from blockcomp.cli import run_asp
from blockcomp.core import Block, Cascade, Triangle, depth, flatten
from blockcomp.engine import (
    OpCounter,
    compress,
    compress_time_dependent,
    compress_time_independent,
    merge_block_into_triangle,
    merge_triangles,
    merge_zigzag_into_triangle,
    triangle_to_square,
)
from blockcomp.export import emit_qasm, lower_to_gates, read_qasm, stats
from blockcomp.models import FAMILIES, hamiltonian_matrix, ModelSpec, ordered_product_blocks, trotter_step
from blockcomp.sim import apply_gate_sequence, build_unitary, ground_state, magnetization, phase_distance
from blockcomp.su2 import EulerTriple, Su2Element, count_su2_turnovers, su2_turnover, turnover_angles_tangent
from blockcomp.tfxy import TfxyPayload, tfxy_turnover
from helpers import I2, kron_all, random_block, random_model, random_tfxy, random_zigzag


def report(capsys, number, title, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
    assert ok, detail


def random_steps(rng, family, n, r):
    """Chronological Trotter steps with fresh random couplings at every step."""
    return [trotter_step(random_model(rng, family, n), 0.3) for _ in range(r)]


def compressed_squares(steps, path="td"):
    return [compress([s[c] for s in steps], path=path).square for c in range(len(steps[0]))]


def random_triangle(rng, mapping, n):
    cascades = [Cascade(lo, n, tuple(random_block(rng, mapping, i) for i in range(lo, n + 1))) for lo in range(n, 0, -1)]
    return Triangle(n, cascades[0].blocks[0].mapping, tuple(cascades))


def test_criterion_1_compression_is_exact(capsys):
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst, cases = 0.0, 0
    for family in FAMILIES:
        for n in range(3, 9):
            for r in (1, 5, 25):
                for _ in range(5):
                    steps = random_steps(rng, family, n, r)
                    ref = build_unitary(ordered_product_blocks(steps), n)
                    worst = max(worst, phase_distance(build_unitary(compressed_squares(steps), n), ref))
                    cases += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 120
    report(capsys, 1, "compressed square equals the ordered Trotter product", ok,
           f"{cases} cases, max distance {worst:.2e} <= 1e-9, {elapsed:.1f}s < 120s")


def test_criterion_2_operation_counts(capsys):
    rng = np.random.default_rng(102)
    bad, fusion_misses = [], []
    for n in range(2, 13):
        t = random_triangle(rng, "kitaev", n)
        for m in range(1, n + 1):
            c = OpCounter()
            merge_block_into_triangle(t, random_block(rng, "kitaev", m), c)
            if (c.turnovers, c.fusions) != (n - m, 1):
                bad.append(f"block n={n} m={m}: {c.turnovers}/{c.fusions}")
        c = OpCounter()
        merge_zigzag_into_triangle(t, random_zigzag(rng, "kitaev", n), c)
        if (c.turnovers, c.fusions) != (n * (n - 1) // 2, n):
            bad.append(f"zigzag n={n}: {c.turnovers}/{c.fusions}")
        c = OpCounter()
        merge_triangles(t, random_triangle(rng, "kitaev", n), c)
        if c.turnovers != n * (n * n - 1) // 6:
            bad.append(f"triangle n={n}: {c.turnovers} turnovers")
        if c.fusions != n * (n - 1) // 2:
            fusion_misses.append(f"n={n}: {c.fusions} != {n * (n - 1) // 2}")
    z = random_zigzag(rng, "kitaev", 5)
    ti, td = OpCounter(), OpCounter()
    compress_time_independent(z, 1024, ti)
    compress_time_dependent([z] * 1024, td)
    if ti.turnovers > 200:
        bad.append(f"r=1024 squaring path used {ti.turnovers} > 200 turnovers")
    if td.turnovers != 10230:
        bad.append(f"r=1024 sequential path used {td.turnovers} != 10230 turnovers")
    detail = f"r=1024: {ti.turnovers} vs {td.turnovers} turnovers"
    if bad:
        detail += f"; {len(bad)} count mismatches, first: {bad[0]}"
    if fusion_misses:
        detail += f"; triangle-merge fusions differ at {len(fusion_misses)} heights, e.g. {fusion_misses[-1]}"
    report(capsys, 2, "operation counters equal the closed-form counts", not bad and not fusion_misses, detail)


def table_one(family, n):
    if family == "kitaev":
        return n * (n - 1) // 2, n * (n - 1)
    if family == "tfim":
        return n * (n - 1), 2 * n * (n - 1)
    return n * (n - 1), n * (n - 1)


def test_criterion_3_table_one_gate_counts(capsys):
    rng = np.random.default_rng(103)
    bad = []
    for family in FAMILIES:
        for n in range(3, 11):
            sq = compressed_squares(random_steps(rng, family, n, 3))
            got = (stats(lower_to_gates(sq, "rotations")).two_qubit_rotations, stats(lower_to_gates(sq, "cnot")).cnots)
            if got != table_one(family, n):
                bad.append(f"{family} n={n}: {got} != {table_one(family, n)}")
    tfxy5 = stats(lower_to_gates(compressed_squares(random_steps(rng, "tfxy", 5, 10)), "cnot")).cnots
    if tfxy5 != 20:
        bad.append(f"TFXY n=5 has {tfxy5} CNOTs")
    report(capsys, 3, "square gate counts match the table", not bad,
           f"5 families x n=3..10, TFXY n=5 CNOTs={tfxy5}" + (f"; first mismatch {bad[0]}" if bad else ""))


def test_criterion_4_triangle_to_square(capsys):
    rng = np.random.default_rng(104)
    bad, ratios, worst = [], {}, 0.0
    for mapping, heights, qubits in (("kitaev", range(2, 9), lambda h: h + 1), ("tfim", (3, 5, 7, 9), lambda h: (h + 1) // 2)):
        for n in heights:
            t = random_triangle(rng, mapping, n)
            sq = triangle_to_square(t)
            nq = qubits(n)
            worst = max(worst, phase_distance(build_unitary(sq, nq), build_unitary(t, nq)))
            if len(sq.blocks()) != len(t.blocks()):
                bad.append(f"{mapping} n={n}: block count changed")
            dt_, ds = depth(t), depth(sq)
            if n >= 3 and not ds < dt_:
                bad.append(f"{mapping} n={n}: depth {ds} !< {dt_}")
            if mapping == "kitaev":
                ratios[n] = f"{ds}/{dt_}={ds / dt_:.2f}"
    ok = not bad and worst <= 1e-10
    report(capsys, 4, "triangle to square keeps blocks and unitary, lowers depth", ok,
           f"max distance {worst:.1e}; depth ratios {', '.join(f'n={k}: {v}' for k, v in ratios.items())}"
           + (f"; {bad[0]}" if bad else ""))


def test_criterion_5_su2_turnover(capsys):
    rng = np.random.default_rng(105)
    worst = 0.0
    for _ in range(10_000):
        src = EulerTriple("xz"[rng.integers(2)], tuple(rng.uniform(-2 * math.pi, 2 * math.pi, 3)))
        worst = max(worst, su2_turnover(src).element().distance(src.element()))
    tangent_worst, checked = 0.0, 0
    while checked < 2000:
        a, b, c = rng.uniform(-math.pi, math.pi, 3)
        if min(abs(math.cos(a + c)), abs(math.sin(a + c)), abs(math.cos(b)), abs(math.sin(a - c))) < 0.1:
            continue
        ref = EulerTriple("z", turnover_angles_tangent(a, b, c)).element()
        got = su2_turnover(EulerTriple("x", (a, b, c))).element()
        tangent_worst = max(tangent_worst, min(got.distance(ref), got.distance(Su2Element(-ref.p, -ref.q))))
        checked += 1
    ok = worst <= 1e-10 and tangent_worst <= 1e-8
    report(capsys, 5, "su(2) turnover reconstructs and agrees with the tangent formulas", ok,
           f"10^4 triples max error {worst:.1e}; tangent cross-check max {tangent_worst:.1e} on {checked} inputs")


def test_criterion_6_tfxy_turnover(capsys):
    rng = np.random.default_rng(106)
    worst, counts = 0.0, set()
    for _ in range(200):
        v = [random_tfxy(rng) for _ in range(3)]
        with count_su2_turnovers() as tally:
            lam = tfxy_turnover(*v)
        counts.add(tally.count)
        lhs = kron_all(v[0].matrix, I2) @ kron_all(I2, v[1].matrix) @ kron_all(v[2].matrix, I2)
        rhs = kron_all(I2, lam[0].matrix) @ kron_all(lam[1].matrix, I2) @ kron_all(I2, lam[2].matrix)
        worst = max(worst, phase_distance(rhs, lhs))
    ok = worst <= 1e-9 and counts == {32}
    report(capsys, 6, "TFXY turnover is exact and uses 32 su(2) turnovers", ok,
           f"200 V shapes max distance {worst:.1e}; turnover counts {sorted(counts)}")


def test_criterion_7_adiabatic_state_preparation(capsys):
    start = time.perf_counter()
    target = magnetization(ground_state(hamiltonian_matrix(ModelSpec("tfim", 5, {"a": -2.0, "b": -1.0}))).state)
    finals = {}
    for dt in (0.05, 0.25):
        (row,) = run_asp(n=5, h=-1.0, j_final=-2.0, ramp=30.0, tail=10.0, dt=dt, times=[40.0])
        finals[dt] = row["m_compressed"]
    elapsed = time.perf_counter() - start
    dev = {dt: abs(m - target) for dt, m in finals.items()}
    ok = dev[0.05] <= 0.02 and dev[0.25] > dev[0.05] and elapsed < 60
    report(capsys, 7, "adiabatic preparation reaches the target magnetization", ok,
           f"m_gs={target:.4f}; dt=0.05: m={finals[0.05]:.4f} dev={dev[0.05]:.4f} <= 0.02; "
           f"dt=0.25: dev={dev[0.25]:.4f}; {elapsed:.1f}s")


def test_criterion_8_qasm_round_trip(capsys):
    rng = np.random.default_rng(108)
    worst, programs = 0.0, 0
    for family in FAMILIES:
        for n in range(2, 7):
            sq = compressed_squares(random_steps(rng, family, n, 4))
            source = build_unitary(sq, n)
            for style in ("rotations", "cnot"):
                gates, n_back = read_qasm(emit_qasm(lower_to_gates(sq, style), n))
                assert n_back == n
                worst = max(worst, phase_distance(apply_gate_sequence(gates, n), source))
                programs += 1
    report(capsys, 8, "QASM programs re-read reproduce the source unitary", worst <= 1e-9,
           f"{programs} programs, n <= 6, max distance {worst:.1e}")
