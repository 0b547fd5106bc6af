"""Command-line front end: ``compile``, ``verify``, ``stats`` and ``asp``.

Exit codes: 0 success, 1 invalid input, 2 tolerance failure, 3 resource cap.
Flags given on the command line override values from the config file.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from . import export, models, sim
from .engine import compress
from .su2 import Su2Element
from .tfxy import TfxyPayload

EXIT_OK, EXIT_INVALID, EXIT_TOLERANCE, EXIT_CAP = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# shared plumbing

def _load(args) -> tuple[models.ModelSpec, models.Schedule]:
    if args.config is None:
        raise CliError("--config is required")
    model, schedule = models.load_config(args.config)
    if args.n is not None and args.n != model.n:
        if any(np.ndim(v) for _, c in schedule.samples for v in c.values()):
            raise CliError("--n can only override configs whose couplings are scalars")
        model = models.ModelSpec(model.family, args.n, schedule.samples[0][1])
    dt = args.dt if args.dt is not None else schedule.dt
    steps = args.steps if args.steps is not None else schedule.steps
    if (dt, steps) != (schedule.dt, schedule.steps):
        schedule = models.Schedule(schedule.kind, schedule.samples, dt, steps)
    return model, schedule


def _circuit_model(model: models.ModelSpec, embed: bool) -> models.ModelSpec:
    return models.embed_as_tfxy(model) if embed and model.family in ("kitaev", "xy", "tfim") else model


def _steps(model: models.ModelSpec, schedule: models.Schedule, embed: bool):
    """Chronological Trotter steps under the chosen block mapping."""
    out = []
    for t in schedule.times():
        m = model.with_couplings(schedule.couplings_at(t, model.family, model.n))
        out.append(models.trotter_step(_circuit_model(m, embed), schedule.dt))
    return out


def _compress_steps(steps, path: str, model_name: str, n: int, r: Optional[int] = None):
    channels = len(steps[0])
    results = [
        compress([s[c] for s in steps], path=path, model=model_name, n_qubits=n, r=r) for c in range(channels)
    ]
    return [res.square for res in results], [res.report for res in results]


def _pick_path(path: str, schedule: models.Schedule) -> str:
    if path == "auto":
        return "ti" if schedule.kind == "constant" else "td"
    return path


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}") from None


def _compile(args):
    model, schedule = _load(args)
    path = _pick_path(args.path, schedule)
    if path == "ti" and schedule.kind != "constant":
        raise CliError("--path ti requires a constant schedule")
    if path == "ti":
        steps = _steps(model, replace(schedule, steps=1), args.embed)
        squares, reports = _compress_steps(steps, "ti", model.family, model.n, r=schedule.steps)
    else:
        steps = _steps(model, schedule, args.embed)
        squares, reports = _compress_steps(steps, "td", model.family, model.n)
    gates = export.lower_to_gates(squares, args.style)
    return model, schedule, squares, reports, gates


def _stats_doc(model, reports, gates, style: str) -> dict:
    record = export.stats_record(gates, model.family, model.n, style)
    record["compression"] = [{k: v for k, v in r.to_dict().items() if k != "wall_time"} for r in reports]
    return record


# ---------------------------------------------------------------------------
# commands

def cmd_compile(args) -> int:
    model, _, _, reports, gates = _compile(args)
    _write(args.qasm, export.emit_qasm(gates, model.n))
    doc = _stats_doc(model, reports, gates, args.style)
    if args.stats:
        _write(args.stats, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_stats(args) -> int:
    if args.qasm_in:
        try:
            with open(args.qasm_in, encoding="utf-8") as fh:
                gates, n = export.read_qasm(fh.read())
        except (OSError, export.QasmError) as exc:
            raise CliError(str(exc)) from None
        doc = export.stats(gates).to_dict() | {"n": n}
    else:
        model, _, _, reports, gates = _compile(args)
        doc = _stats_doc(model, reports, gates, args.style)
    _write(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _random_model(family: str, n: int, rng: np.random.Generator) -> models.ModelSpec:
    shapes = {k: (n - 1 if w == "bond" else n) for k, w in models.FAMILY_FIELDS[family].items()}
    return models.ModelSpec(family, n, {k: rng.uniform(-1.0, 1.0, size) for k, size in shapes.items()})


def _corrupt(square):
    """Test hook: perturb the last block of a square."""
    blocks = square.cascades[-1].blocks
    b = blocks[-1]
    if b.kind == "tfxy":
        bad = b.with_payload(b.payload @ TfxyPayload.from_angles(0, 0, 1e-3, 0, 0, 0))
    else:
        bad = b.with_payload(b.payload @ Su2Element.rot("x" if b.index % 2 else "z", 1e-3))
    cascade = replace(square.cascades[-1], blocks=blocks[:-1] + (bad,))
    return replace(square, cascades=square.cascades[:-1] + (cascade,))


def cmd_verify(args) -> int:
    if args.config is not None:
        base, schedule = _load(args)
        family, n = base.family, base.n
    else:
        if args.family is None or args.n is None:
            raise CliError("give --config or both --family and --n")
        family, n = args.family, args.n
        base = None
        dt = args.dt if args.dt is not None else 0.1
        r = args.steps if args.steps is not None else 10
        if r < 1:
            raise CliError(f"--steps must be >= 1, got {r}")
    if n > sim.UNITARY_CAP:
        raise CliError(f"n={n} exceeds the dense oracle cap of {sim.UNITARY_CAP}", EXIT_CAP)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.trials):
        if base is None:
            # constant random draw; built directly so that dt = 0 is allowed
            step = models.trotter_step(_circuit_model(_random_model(family, n, rng), args.embed), dt)
            steps = [step] * r
        else:
            steps = _steps(base, schedule, args.embed)
        squares, _ = _compress_steps(steps, "td", family, n)
        if args.corrupt:
            squares[0] = _corrupt(squares[0])
        ref = sim.build_unitary(models.ordered_product_blocks(steps), n)
        worst = max(worst, sim.phase_distance(sim.build_unitary(squares, n), ref))
    ok = worst <= args.tol
    print(f"max distance {worst:.3e} over {args.trials} trial(s); tolerance {args.tol:.1e}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_TOLERANCE


# ---------------------------------------------------------------------------
# adiabatic state preparation

def asp_snapshot(t: float, n: int, h: float, j_final: float, ramp: float, end: float, dt: float, embed: bool) -> tuple:
    """One CSV row: compile the circuit for ``[0, t]`` from scratch and measure it."""
    steps_needed = int(round(t / dt))
    psi = sim.basis_state(n)
    if steps_needed:
        schedule = models.asp_schedule(n, h, j_final, ramp, end, dt, steps=steps_needed)
        steps = _steps(models.ModelSpec("tfim", n), schedule, embed)
        squares, _ = _compress_steps(steps, "td", "tfim", n)
        psi = sim.evolve_state(psi, squares, n)
    j_now = j_final * min(t / ramp, 1.0)
    inst = sim.ground_state(models.hamiltonian_matrix(models.ModelSpec("tfim", n, {"a": j_now, "b": h})))
    return t, sim.magnetization(psi), sim.magnetization(inst.state)


def _snapshot_star(params):
    return asp_snapshot(*params)


def run_asp(
    n: int = 5,
    h: float = -1.0,
    j_final: float = -2.0,
    ramp: float = 30.0,
    tail: float = 10.0,
    dt: float = 0.05,
    snap: float = 0.5,
    embed: bool = True,
    jobs: int = 1,
    times: Optional[Sequence[float]] = None,
) -> list[dict]:
    """Rows ``{t, m_compressed, m_exact_instantaneous_gs, m_target_final}`` in time order."""
    if n > sim.UNITARY_CAP:
        raise CliError(f"n={n} exceeds the simulation cap of {sim.UNITARY_CAP}", EXIT_CAP)
    if ramp <= 0 or tail < 0 or dt <= 0 or snap <= 0:
        raise CliError("ramp, dt and snap must be positive and tail non-negative")
    end = ramp + tail
    if times is None:
        count = int(np.floor(end / snap + 1e-9))
        times = [k * snap for k in range(count + 1)]
    target = sim.ground_state(models.hamiltonian_matrix(models.ModelSpec("tfim", n, {"a": j_final, "b": h})))
    m_target = sim.magnetization(target.state)
    params = [(float(t), n, h, j_final, ramp, end, dt, embed) for t in times]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_snapshot_star, params))
    else:
        rows = [_snapshot_star(p) for p in params]
    return [
        {"t": t, "m_compressed": mc, "m_exact_instantaneous_gs": me, "m_target_final": m_target}
        for t, mc, me in sorted(rows)
    ]


ASP_COLUMNS = ("t", "m_compressed", "m_exact_instantaneous_gs", "m_target_final")


def cmd_asp(args) -> int:
    rows = run_asp(
        n=args.n if args.n is not None else 5,
        h=args.h,
        j_final=args.j_final,
        ramp=args.ramp,
        tail=args.tail,
        dt=args.dt if args.dt is not None else 0.05,
        snap=args.snap,
        embed=args.mapping == "tfxy",
        jobs=args.jobs,
    )
    lines = [",".join(ASP_COLUMNS)]
    for row in rows:
        lines.append(",".join(format(row[c], ".12g") for c in ASP_COLUMNS))
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blockcomp", description="Compress Trotter circuits of free-fermion spin chains.")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_args(p, config_required=False):
        p.add_argument("--config", required=config_required, help="JSON model/schedule file")
        p.add_argument("--n", type=int, help="override the qubit count")
        p.add_argument("--dt", type=float, help="override the time step")
        p.add_argument("--steps", type=int, help="override the number of Trotter steps")
        p.add_argument("--embed", action="store_true", help="compile Kitaev/XY/Ising models as TFXY blocks")

    def compile_args(p):
        p.add_argument("--path", choices=("auto", "td", "ti"), default="auto")
        p.add_argument("--style", choices=export.STYLES, default="cnot")

    p = sub.add_parser("compile", help="compress and emit OpenQASM 2.0 plus stats")
    model_args(p, config_required=True)
    compile_args(p)
    p.add_argument("--qasm", default="-", help="QASM output path (default stdout)")
    p.add_argument("--stats", help="JSON stats output path")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("stats", help="gate statistics of a compiled model or a QASM file")
    model_args(p)
    compile_args(p)
    p.add_argument("--qasm-in", help="read gates from this QASM file instead of compiling")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="check compressed against uncompressed unitaries")
    model_args(p)
    p.add_argument("--family", choices=models.FAMILIES)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("asp", help="adiabatic state preparation of the Ising chain")
    p.add_argument("--n", type=int)
    p.add_argument("--h", type=float, default=-1.0)
    p.add_argument("--j-final", type=float, default=-2.0)
    p.add_argument("--ramp", type=float, default=30.0, help="ramp duration T")
    p.add_argument("--tail", type=float, default=10.0, help="hold time after the ramp")
    p.add_argument("--dt", type=float)
    p.add_argument("--snap", type=float, default=0.5)
    p.add_argument("--mapping", choices=("tfxy", "tfim"), default="tfxy")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_asp)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage; 2 is reserved for tolerance failures here
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except sim.ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (models.ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
