"""Lowering of block structures to gates, gate statistics and OpenQASM 2.0 I/O.

Gate angles follow the QASM convention ``r_P(phi) = exp(-i phi/2 P)``, so a
block ``exp(-i theta P)`` becomes a rotation by ``2 theta``.  Gate lists are
in time order (first gate acts first).

CNOT-style identities used below (time order, verified against the oracle):

* ``exp(-i t XX)``: ``h, h; cx(a, b); rz(2t) b; cx(a, b); h, h``.
* ``exp(-i t YY)``: ``rx(pi/2), rx(pi/2); cx(a, b); rz(2t) b; cx(a, b); rx(-pi/2), rx(-pi/2)``.
* ``exp(-i t XX) exp(-i s YY)``: ``rx(pi/2) a, rx(pi/2) b; cx(a, b); rx(2t) a, rz(2s) b;
  cx(a, b); rx(-pi/2) a, rx(-pi/2) b``.
"""

from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .core import Block, flatten

HALF_PI = 0.5 * math.pi
TWO_QUBIT_ROTATIONS = ("rxx", "ryy")
GATE_ARITY = {"rx": 1, "ry": 1, "rz": 1, "h": 1, "cx": 2, "rxx": 2, "ryy": 2}
STYLES = ("rotations", "cnot")


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    angle: float = 0.0


@dataclass(frozen=True)
class GateStats:
    two_qubit_rotations: int
    cnots: int
    depth: int
    gates: int

    def to_dict(self) -> dict:
        return asdict(self)


def _xx_yy_kernel(q0: int, q1: int, t: float, s: float, style: str) -> list[Gate]:
    """``exp(-i t XX) exp(-i s YY)`` on ``(q0, q1)``; the two factors commute."""
    if style == "rotations":
        return [Gate("rxx", (q0, q1), 2 * t), Gate("ryy", (q0, q1), 2 * s)]
    return [
        Gate("rx", (q0,), HALF_PI),
        Gate("rx", (q1,), HALF_PI),
        Gate("cx", (q0, q1)),
        Gate("rx", (q0,), 2 * t),
        Gate("rz", (q1,), 2 * s),
        Gate("cx", (q0, q1)),
        Gate("rx", (q0,), -HALF_PI),
        Gate("rx", (q1,), -HALF_PI),
    ]


def _single_pair(kind: str, q0: int, q1: int, t: float, style: str) -> list[Gate]:
    if style == "rotations":
        return [Gate("r" + kind, (q0, q1), 2 * t)]
    if kind == "xx":
        pre = [Gate("h", (q0,)), Gate("h", (q1,))]
        post = pre
    else:
        pre = [Gate("rx", (q0,), HALF_PI), Gate("rx", (q1,), HALF_PI)]
        post = [Gate("rx", (q0,), -HALF_PI), Gate("rx", (q1,), -HALF_PI)]
    return pre + [Gate("cx", (q0, q1)), Gate("rz", (q1,), 2 * t), Gate("cx", (q0, q1))] + post


def lower_block(b: Block, style: str = "rotations") -> list[Gate]:
    """Gates of one block in time order."""
    if style not in STYLES:
        raise ValueError(f"style must be one of {STYLES}, got {style!r}")
    kind = b.kind
    if kind == "z":
        return [Gate("rz", b.qubits, 2 * b.angle)]
    if kind in ("xx", "yy"):
        q0, q1 = b.qubits
        return _single_pair(kind, q0, q1, b.angle, style)
    if kind == "tfxy":
        q0, q1 = b.qubits
        a, bb, c, d, f, g = b.payload.angles()
        return (
            [Gate("rz", (q0,), 2 * f), Gate("rz", (q1,), 2 * g)]
            + _xx_yy_kernel(q0, q1, c, d, style)
            + [Gate("rz", (q0,), 2 * a), Gate("rz", (q1,), 2 * bb)]
        )
    raise ValueError(f"unknown block kind {kind!r}")


def _lower_pair(xx: Block, yy: Block, style: str) -> list[Gate]:
    q0, q1 = xx.qubits
    return _xx_yy_kernel(q0, q1, xx.angle, yy.angle, style)


def _is_xy_pair(structures) -> bool:
    if not isinstance(structures, (list, tuple)) or len(structures) != 2:
        return False
    names = [getattr(s, "mapping", None) for s in structures]
    return all(names) and [m.name for m in names] == ["kitaev", "kitaev-swapped"]


def lower_to_gates(structure, style: str = "rotations", pair: bool = True) -> list[Gate]:
    """Lower a structure (or list of structures, applied left to right as a product).

    Two commuting Kitaev chains given as ``[kitaev, kitaev-swapped]`` of the
    same layout are paired block by block, so each bond's XX and YY rotations
    share one two-CNOT kernel.
    """
    if style not in STYLES:
        raise ValueError(f"style must be one of {STYLES}, got {style!r}")
    if pair and _is_xy_pair(structure):
        a_blocks, b_blocks = flatten(structure[0]), flatten(structure[1])
        if [b.index for b in a_blocks] != [b.index for b in b_blocks]:
            raise ValueError("paired chains must share one layout")
        gates = []
        for x, y in zip(reversed(a_blocks), reversed(b_blocks)):
            xx, yy = (x, y) if x.kind == "xx" else (y, x)
            gates.extend(_lower_pair(xx, yy, style))
        return gates
    gates = []
    for b in reversed(flatten(structure)):
        gates.extend(lower_block(b, style))
    return gates


def gate_depth(gates: Iterable[Gate]) -> int:
    """ASAP layer count; gates sharing a qubit occupy different layers."""
    free_at: dict[int, int] = {}
    layers = 0
    for g in gates:
        layer = max(free_at.get(q, 0) for q in g.qubits) + 1
        for q in g.qubits:
            free_at[q] = layer
        layers = max(layers, layer)
    return layers


def stats(gates: Sequence[Gate]) -> GateStats:
    return GateStats(
        two_qubit_rotations=sum(g.name in TWO_QUBIT_ROTATIONS for g in gates),
        cnots=sum(g.name == "cx" for g in gates),
        depth=gate_depth(gates),
        gates=len(gates),
    )


def stats_record(gates: Sequence[Gate], model: str, n: int, style: str) -> dict:
    s = stats(gates)
    return {"model": model, "n": n, "style": style, "cnots": s.cnots, "rotations": s.two_qubit_rotations, "depth": s.depth}


# Custom names keep clear of gates that some qelib1.inc variants already define.
QASM_ALIASES = {"rxx": "xx_rot", "ryy": "yy_rot"}
_QASM_DEFS = {
    "xx_rot": "gate xx_rot(theta) a,b { h a; h b; cx a,b; rz(theta) b; cx a,b; h a; h b; }",
    "yy_rot": "gate yy_rot(theta) a,b { rx(pi/2) a; rx(pi/2) b; cx a,b; rz(theta) b; cx a,b; rx(-pi/2) a; rx(-pi/2) b; }",
}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit_qasm(gates: Sequence[Gate], n: int) -> str:
    """OpenQASM 2.0 program; byte-identical output for identical input."""
    used = {QASM_ALIASES[g.name] for g in gates if g.name in QASM_ALIASES}
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    lines += [_QASM_DEFS[name] for name in sorted(used)]
    lines += [f"qreg q[{n}];", f"creg c[{n}];"]
    for g in gates:
        if g.name not in GATE_ARITY:
            raise ValueError(f"unknown gate {g.name!r}")
        name = QASM_ALIASES.get(g.name, g.name)
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.name in ("h", "cx"):
            lines.append(f"{name} {args};")
        else:
            lines.append(f"{name}({_fmt(g.angle)}) {args};")
    return "\n".join(lines) + "\n"


_STMT = re.compile(r"^(\w+)(?:\(([^)]*)\))?\s+(.+)$")
_QARG = re.compile(r"^q\[(\d+)\]$")


class QasmError(ValueError):
    pass


def read_qasm(text: str) -> tuple[list[Gate], int]:
    """Parse the subset of OpenQASM 2.0 produced by :func:`emit_qasm`."""
    reverse = {v: k for k, v in QASM_ALIASES.items()}
    gates: list[Gate] = []
    n = None
    for raw in text.splitlines():
        line = raw.split("//", 1)[0].strip()
        if not line or line.startswith(("OPENQASM", "include", "gate ", "creg", "barrier")):
            continue
        if not line.endswith(";"):
            raise QasmError(f"missing ';' in {raw!r}")
        line = line[:-1].strip()
        if line.startswith("qreg"):
            m = re.match(r"qreg\s+q\[(\d+)\]$", line)
            if not m:
                raise QasmError(f"unsupported register declaration {raw!r}")
            n = int(m.group(1))
            continue
        m = _STMT.match(line)
        if not m:
            raise QasmError(f"cannot parse {raw!r}")
        name, param, args = m.groups()
        name = reverse.get(name, name)
        if name not in GATE_ARITY:
            raise QasmError(f"unsupported gate {name!r}")
        qubits = []
        for arg in args.split(","):
            qm = _QARG.match(arg.strip())
            if not qm:
                raise QasmError(f"bad qubit argument {arg!r}")
            qubits.append(int(qm.group(1)))
        if len(qubits) != GATE_ARITY[name]:
            raise QasmError(f"{name} expects {GATE_ARITY[name]} qubits")
        angle = float(param) if param is not None else 0.0
        gates.append(Gate(name, tuple(qubits), angle))
    if n is None:
        raise QasmError("no qreg declaration")
    return gates, n
