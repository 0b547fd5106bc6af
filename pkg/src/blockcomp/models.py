"""Spin-chain families, coefficient schedules and first-order Trotter steps.

Coupling arrays per family (bond arrays have length n-1, site arrays n):

    ==========  =========================================  ==============
    family      bond couplings                             site couplings
    ==========  =========================================  ==============
    kitaev      a (XX on odd bonds, YY on even bonds)      -
    xy          a (XX), b (YY)                             -
    tfim        a (XX)                                     b (Z)
    tfxy        a (XX), b (YY)                             c (Z)
    gen-tfxy    a (XX), b (YY), c (XY), d (YX)             f (Z)
    ==========  =========================================  ==============

Bonds and sites are numbered from 1 in this table; arrays are 0-based.  All
rotations are ``exp(-i theta P)`` with ``theta = dt * coefficient``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping as TMapping, Optional, Sequence

import numpy as np

from .core import Block, Zigzag, get_mapping, zigzag_from_blocks
from .tfxy import TfxyPayload

FAMILY_FIELDS = {
    "kitaev": {"a": "bond"},
    "xy": {"a": "bond", "b": "bond"},
    "tfim": {"a": "bond", "b": "site"},
    "tfxy": {"a": "bond", "b": "bond", "c": "site"},
    "gen-tfxy": {"a": "bond", "b": "bond", "c": "bond", "d": "bond", "f": "site"},
}
FAMILIES = tuple(FAMILY_FIELDS)


class ConfigError(ValueError):
    """Invalid model, schedule or configuration input; the message names the field."""


def _as_array(name: str, value, length: int) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(length, float(arr))
    if arr.shape != (length,):
        raise ConfigError(f"coupling '{name}' must have length {length}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"coupling '{name}' has non-finite entries")
    return arr


def normalize_couplings(family: str, n: int, couplings: TMapping) -> dict[str, np.ndarray]:
    """Validate a coupling dict, broadcasting scalars; missing channels default to zero."""
    if family not in FAMILY_FIELDS:
        raise ConfigError(f"unknown family {family!r}; expected one of {list(FAMILIES)}")
    fields = FAMILY_FIELDS[family]
    extra = set(couplings) - set(fields)
    if extra:
        raise ConfigError(f"unknown coupling(s) {sorted(extra)} for family {family!r}")
    out = {}
    for name, where in fields.items():
        length = n - 1 if where == "bond" else n
        out[name] = _as_array(name, couplings.get(name, 0.0), length)
    return out


@dataclass(frozen=True)
class ModelSpec:
    family: str
    n: int
    couplings: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}")
        object.__setattr__(self, "couplings", normalize_couplings(self.family, self.n, self.couplings))

    def with_couplings(self, couplings: TMapping) -> ModelSpec:
        return ModelSpec(self.family, self.n, couplings)

    @property
    def mappings(self) -> tuple[str, ...]:
        """Block mapping of each zigzag in a Trotter step."""
        return {
            "kitaev": ("kitaev",),
            "xy": ("kitaev", "kitaev-swapped"),
            "tfim": ("tfim",),
            "tfxy": ("tfxy",),
            "gen-tfxy": ("tfxy",),
        }[self.family]

    @property
    def height(self) -> int:
        return 2 * self.n - 1 if self.family == "tfim" else self.n - 1


def hamiltonian_terms(m: ModelSpec) -> list[tuple[float, dict[int, str]]]:
    """Pauli decomposition ``[(coefficient, {qubit: letter}), ...]``."""
    c = m.couplings
    terms = []
    bond_letters = {
        "kitaev": None,
        "xy": {"a": "XX", "b": "YY"},
        "tfim": {"a": "XX"},
        "tfxy": {"a": "XX", "b": "YY"},
        "gen-tfxy": {"a": "XX", "b": "YY", "c": "XY", "d": "YX"},
    }[m.family]
    site_name = {"tfim": "b", "tfxy": "c", "gen-tfxy": "f"}.get(m.family)
    for i in range(m.n - 1):
        if m.family == "kitaev":
            letters = "XX" if i % 2 == 0 else "YY"
            terms.append((c["a"][i], {i: letters[0], i + 1: letters[1]}))
            continue
        for name, letters in bond_letters.items():
            terms.append((c[name][i], {i: letters[0], i + 1: letters[1]}))
    if site_name:
        for j in range(m.n):
            terms.append((c[site_name][j], {j: "Z"}))
    return terms


def hamiltonian_matrix(m: ModelSpec) -> np.ndarray:
    from .sim import pauli_string

    h = np.zeros((2**m.n, 2**m.n), dtype=complex)
    for coef, ops in hamiltonian_terms(m):
        if coef:
            h += coef * pauli_string(m.n, ops)
    return h


def _tfxy_blocks(m: ModelSpec, dt: float) -> list[Block]:
    c = m.couplings
    n = m.n
    if m.family == "tfxy":
        bond = {"xx": c["a"], "yy": c["b"]}
        site = c["c"]
    else:
        bond = {"xx": c["a"], "yy": c["b"], "xy": c["c"], "yx": c["d"]}
        site = c["f"]
    # Z_j rides in the left factor of the odd block holding qubit j; with odd n
    # the last qubit only sits in the final (even) block.
    z_first = np.zeros(n - 1)
    z_second = np.zeros(n - 1)
    for j in range(n):
        if j % 2 == 0 and j < n - 1:
            z_first[j] += site[j]
        else:
            z_second[j - 1] += site[j]
    mapping = get_mapping("tfxy")
    blocks = []
    for i in range(n - 1):
        zpart = TfxyPayload.from_terms(z_first=dt * z_first[i], z_second=dt * z_second[i])
        bpart = TfxyPayload.from_terms(**{k: dt * v[i] for k, v in bond.items()})
        blocks.append(Block(mapping, i + 1, zpart @ bpart))
    return blocks


def trotter_step(m: ModelSpec, dt: float) -> tuple[Zigzag, ...]:
    """One first-order Trotter step as zigzags whose product approximates ``exp(-i dt H)``.

    Every family yields a single zigzag except ``xy``, which yields two
    commuting Kitaev chains: odd XX / even YY and odd YY / even XX.
    """
    c = m.couplings
    n = m.n
    if m.family == "kitaev":
        blocks = [Block.rotation("kitaev", i + 1, dt * c["a"][i]) for i in range(n - 1)]
        return (zigzag_from_blocks(blocks, n - 1, "kitaev"),)
    if m.family == "xy":
        chain_a = [Block.rotation("kitaev", i + 1, dt * (c["a"] if i % 2 == 0 else c["b"])[i]) for i in range(n - 1)]
        chain_b = [
            Block.rotation("kitaev-swapped", i + 1, dt * (c["b"] if i % 2 == 0 else c["a"])[i]) for i in range(n - 1)
        ]
        return (
            zigzag_from_blocks(chain_a, n - 1, "kitaev"),
            zigzag_from_blocks(chain_b, n - 1, "kitaev-swapped"),
        )
    if m.family == "tfim":
        blocks = []
        for j in range(n):
            blocks.append(Block.rotation("tfim", 2 * j + 1, dt * c["b"][j]))
        for i in range(n - 1):
            blocks.append(Block.rotation("tfim", 2 * i + 2, dt * c["a"][i]))
        return (zigzag_from_blocks(blocks, 2 * n - 1, "tfim"),)
    return (zigzag_from_blocks(_tfxy_blocks(m, dt), n - 1, "tfxy"),)


def embed_as_tfxy(m: ModelSpec) -> ModelSpec:
    """Rewrite a Kitaev, XY or Ising model with TFXY couplings (zeros in unused channels)."""
    c, n = m.couplings, m.n
    if m.family in ("tfxy", "gen-tfxy"):
        return m
    if m.family == "kitaev":
        odd = np.arange(n - 1) % 2 == 0
        return ModelSpec("tfxy", n, {"a": np.where(odd, c["a"], 0.0), "b": np.where(odd, 0.0, c["a"])})
    if m.family == "xy":
        return ModelSpec("tfxy", n, {"a": c["a"], "b": c["b"]})
    return ModelSpec("tfxy", n, {"a": c["a"], "c": c["b"]})


# ---------------------------------------------------------------------------
# free fermions

@dataclass(frozen=True)
class FreeFermionSpec:
    """``H = sum_i (hop_i c+_i c_{i+1} + pair_i c+_i c+_{i+1} + h.c.) + sum_i chem_i c+_i c_i``.

    Uses ``c_i = (prod_{j<i} Z_j) (X_i + i Y_i) / 2``, so an occupied site is
    spin down.
    """

    hop: np.ndarray
    pair: np.ndarray
    chem: np.ndarray

    def __post_init__(self):
        hop = np.asarray(self.hop, dtype=complex)
        pair = np.asarray(self.pair, dtype=complex)
        chem = np.asarray(self.chem, dtype=float)
        if hop.shape != pair.shape or chem.shape != (hop.size + 1,):
            raise ConfigError("free-fermion arrays need lengths n-1, n-1, n")
        object.__setattr__(self, "hop", hop)
        object.__setattr__(self, "pair", pair)
        object.__setattr__(self, "chem", chem)

    @property
    def n(self) -> int:
        return self.chem.size


def from_free_fermion(f: FreeFermionSpec) -> ModelSpec:
    """Spin couplings of a free-fermion chain; equal up to the constant ``free_fermion_offset``."""
    ra, ia = f.hop.real, f.hop.imag
    rb, ib = f.pair.real, f.pair.imag
    couplings = {
        "a": 0.5 * (ra + rb),
        "b": 0.5 * (ra - rb),
        "c": 0.5 * (ib - ia),
        "d": 0.5 * (ia + ib),
        "f": -0.5 * f.chem,
    }
    return ModelSpec("gen-tfxy", f.n, couplings)


def free_fermion_offset(f: FreeFermionSpec) -> float:
    """Identity component: fermionic ``H`` equals the spin model plus this constant."""
    return 0.5 * float(np.sum(f.chem))


def to_free_fermion(m: ModelSpec) -> FreeFermionSpec:
    if m.family != "gen-tfxy":
        m = embed_as_tfxy(m)
        m = ModelSpec("gen-tfxy", m.n, {"a": m.couplings["a"], "b": m.couplings["b"], "f": m.couplings["c"]})
    c = m.couplings
    hop = (c["a"] + c["b"]) + 1j * (c["d"] - c["c"])
    pair = (c["a"] - c["b"]) + 1j * (c["c"] + c["d"])
    return FreeFermionSpec(hop, pair, -2.0 * c["f"])


def bdg_spectrum(f: FreeFermionSpec) -> np.ndarray:
    """All many-body energies from the single-particle Bogoliubov-de Gennes problem."""
    n = f.n
    a = np.diag(f.chem.astype(complex))
    delta = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        a[i, i + 1] += f.hop[i]
        a[i + 1, i] += np.conj(f.hop[i])
        # c+_i c+_{i+1} + h.c. in the antisymmetric pairing matrix convention
        delta[i + 1, i] += np.conj(f.pair[i])
        delta[i, i + 1] -= np.conj(f.pair[i])
    # H = 1/2 Psi+ [[A, D^H], [D, -A^*]] Psi + tr(A)/2, Psi = (c, c+)
    big = np.block([[a, delta.conj().T], [delta, -a.conj()]])
    eps = np.linalg.eigvalsh(big)[n:]
    const = 0.5 * (np.trace(a).real - eps.sum())
    energies = np.array([0.0])
    for e in eps:
        energies = np.concatenate([energies, energies + e])
    return np.sort(energies + const)


# ---------------------------------------------------------------------------
# schedules

SCHEDULE_KINDS = ("constant", "piecewise-linear", "tabulated")


@dataclass(frozen=True)
class Schedule:
    """Coefficient trajectory sampled at ``t_k = (k - 1) dt`` for ``k = 1..steps``.

    ``piecewise-linear`` interpolates between samples; ``tabulated`` holds each
    sample until the next one; ``constant`` uses its single sample.
    """

    kind: str
    samples: tuple
    dt: float
    steps: int

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ConfigError(f"schedule kind must be one of {list(SCHEDULE_KINDS)}, got {self.kind!r}")
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ConfigError(f"steps must be an integer >= 1, got {self.steps}")
        samples = tuple((float(t), dict(c)) for t, c in self.samples)
        if not samples:
            raise ConfigError("schedule needs at least one sample")
        if self.kind == "constant" and len(samples) != 1:
            raise ConfigError("a constant schedule takes exactly one sample")
        times = [t for t, _ in samples]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigError("sample times must be strictly increasing")
        if self.kind != "constant":
            end = self.steps * self.dt
            if times[0] > 0 or times[-1] < end - 1e-12 * max(1.0, end):
                raise ConfigError(f"samples cover [{times[0]}, {times[-1]}] but must cover [0, {end}]")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "steps", int(self.steps))

    @classmethod
    def constant(cls, couplings: TMapping, dt: float, steps: int) -> Schedule:
        return cls("constant", ((0.0, couplings),), dt, steps)

    def times(self) -> np.ndarray:
        return np.arange(self.steps) * self.dt

    def couplings_at(self, t: float, family: str, n: int) -> dict[str, np.ndarray]:
        norm = [(ts, normalize_couplings(family, n, c)) for ts, c in self.samples]
        if self.kind == "constant":
            return norm[0][1]
        times = np.array([ts for ts, _ in norm])
        if self.kind == "tabulated":
            k = max(int(np.searchsorted(times, t, side="right")) - 1, 0)
            return norm[k][1]
        return {name: np.array([np.interp(t, times, [c[name][i] for _, c in norm]) for i in range(len(norm[0][1][name]))])
                for name in norm[0][1]}


def trotter_circuit(m: ModelSpec, s: Schedule) -> list[tuple[Zigzag, ...]]:
    """Chronological Trotter steps; step ``k`` uses the couplings at ``(k - 1) dt``."""
    return [trotter_step(m.with_couplings(s.couplings_at(t, m.family, m.n)), s.dt) for t in s.times()]


def asp_schedule(
    n: int,
    h: float = -1.0,
    j_final: float = -2.0,
    ramp_time: float = 30.0,
    end_time: float = 40.0,
    dt: float = 0.05,
    steps: Optional[int] = None,
) -> Schedule:
    """Ising ramp ``J(t) sum XX + h sum Z`` with J linear from 0 to ``j_final`` on ``[0, ramp_time]``, then held."""
    if ramp_time <= 0 or end_time < ramp_time:
        raise ConfigError("need 0 < ramp_time <= end_time")
    steps = steps if steps is not None else int(round(end_time / dt))
    horizon = max(end_time, steps * dt)
    samples = [(0.0, {"a": 0.0, "b": h}), (ramp_time, {"a": j_final, "b": h})]
    if horizon > ramp_time:
        samples.append((horizon, {"a": j_final, "b": h}))
    return Schedule("piecewise-linear", tuple(samples), dt, steps)


# ---------------------------------------------------------------------------
# configuration files

_TOP_KEYS = {"family", "n", "couplings", "schedule"}
_SCHEDULE_KEYS = {"kind", "dt", "steps", "samples"}
_SAMPLE_KEYS = {"t", "couplings"}


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    extra = set(obj) - allowed
    if extra:
        raise ConfigError(f"unknown key(s) {sorted(extra)} in {where}")


def parse_config(doc: dict) -> tuple[ModelSpec, Schedule]:
    """Build a model and schedule from a parsed JSON document.

    Schema::

        {"family": "tfim", "n": 5,
         "couplings": {"a": -2.0, "b": [-1, -1, -1, -1, -1]},
         "schedule": {"kind": "constant", "dt": 0.05, "steps": 100}}

    Time-dependent schedules replace the top-level couplings by
    ``"samples": [{"t": 0.0, "couplings": {...}}, ...]``.
    """
    _reject_unknown(doc, _TOP_KEYS, "config")
    for key in ("family", "n", "schedule"):
        if key not in doc:
            raise ConfigError(f"missing required key '{key}'")
    family, n = doc["family"], doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ConfigError(f"'n' must be an integer, got {n!r}")
    sched = doc["schedule"]
    _reject_unknown(sched, _SCHEDULE_KEYS, "schedule")
    kind = sched.get("kind", "constant")
    for key in ("dt", "steps"):
        if key not in sched:
            raise ConfigError(f"missing required key 'schedule.{key}'")
    if kind == "constant":
        if "samples" in sched:
            raise ConfigError("'schedule.samples' is not used by a constant schedule; give 'couplings'")
        couplings = doc.get("couplings", {})
        if not isinstance(couplings, dict):
            raise ConfigError("'couplings' must be an object")
        samples = ((0.0, couplings),)
    else:
        if "couplings" in doc:
            raise ConfigError("top-level 'couplings' is only valid for a constant schedule")
        raw = sched.get("samples")
        if not isinstance(raw, list) or not raw:
            raise ConfigError("'schedule.samples' must be a non-empty list")
        samples = []
        for k, item in enumerate(raw):
            _reject_unknown(item, _SAMPLE_KEYS, f"schedule.samples[{k}]")
            samples.append((item.get("t"), item.get("couplings", {})))
            if not isinstance(samples[-1][0], (int, float)):
                raise ConfigError(f"'schedule.samples[{k}].t' must be a number")
    model = ModelSpec(family, n, samples[0][1])
    schedule = Schedule(kind, tuple(samples), float(sched["dt"]), sched["steps"])
    for _, c in schedule.samples:
        normalize_couplings(family, n, c)
    return model, schedule


def load_config(path) -> tuple[ModelSpec, Schedule]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    return parse_config(doc)


def ordered_product_blocks(steps: Sequence[tuple[Zigzag, ...]]) -> list:
    """Blocks of ``Z_r ... Z_1`` in matrix-product order (latest step leftmost)."""
    out = []
    for step in reversed(steps):
        for z in step:
            out.extend(z.blocks)
    return out
