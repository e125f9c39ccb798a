"""Sweep orchestration, shot sampling, counts-file I/O, and tabular output.

A sweep plan fixes a model, a partition, and one or two uniform parameter
grids; running it produces one row per grid point with the ground energy,
the gap, and every entropy/information column.  Rows are always assembled
in grid order (outer axis first for 2D), whatever the worker pool does, so
output files are byte-identical across runs.

Counts files are plain text: a required header line ``# d=<d> N=<N>``
followed by ``<ditstring>,<count>`` records with the ditstring written as
concatenated decimal digits (d <= 10 only).
"""

from __future__ import annotations

import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .entropy import (EntropyReport, ProbabilityTable, composite_report,
                      mutual_information, probabilities)
from .hilbert import (LatticeSpec, dits_to_index, dits_to_text, index_to_dits,
                      parse_partition, text_to_dits)
from .models import (IsingParams, Phi4Params, RydbergParams, build_ising,
                     build_phi4, build_rydberg)
from .solver import ConvergenceError, ground_state

MODEL_NAMES = ("ising", "phi4", "rydberg")

# CLI / sweep-axis parameter name -> dataclass field
MODEL_PARAMS = {
    "ising": {"h": "h", "J": "J", "basis": "basis"},
    "phi4": {"omega": "omega", "lambda": "lam", "kappa": "kappa", "nmax": "n_max"},
    "rydberg": {"rabi": "rabi", "detuning": "detuning",
                "rb_ratio": "blockade_ratio", "spacing": "spacing"},
}

REPORT_COLUMNS = ["E0", "gap",
                  "S_A", "S_B", "S_C", "S_AB", "S_BC", "S_AC", "S_ABC",
                  "H_A", "H_B", "H_C", "H_AB", "H_BC", "H_AC", "H_ABC",
                  "I_A", "I_B", "I_C", "I_AB", "I_BC", "I_AC", "I_ABC",
                  "S_weak", "S_strong", "S_delta",
                  "I_weak", "I_strong", "I_delta", "eta"]


def model_local_dim(model: str, params: dict) -> int:
    if model == "phi4":
        return int(params.get("nmax", 3))
    return 2


def build_hamiltonian(model: str, spec: LatticeSpec, params: dict):
    """Construct the model Hamiltonian from a flat name->value mapping."""
    if model not in MODEL_NAMES:
        raise ValueError(f"unknown model {model!r}; expected one of {MODEL_NAMES}")
    fields = MODEL_PARAMS[model]
    unknown = set(params) - set(fields)
    if unknown:
        raise ValueError(f"unknown parameters for {model}: {sorted(unknown)}")
    kwargs = {fields[k]: v for k, v in params.items()}
    if model == "ising":
        return build_ising(spec, IsingParams(**kwargs))
    if model == "phi4":
        return build_phi4(spec, Phi4Params(**kwargs))
    return build_rydberg(spec, RydbergParams(**kwargs))


def uniform_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive uniform grid start, start+step, ..., stop (within round-off)."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    if stop < start:
        raise ValueError("grid stop must be >= start")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


@dataclass(frozen=True)
class SweepAxis:
    name: str
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError(f"axis {self.name!r} has an empty grid")


@dataclass(frozen=True)
class SweepPlan:
    model: str
    num_sites: int
    pattern: str
    params: dict = field(default_factory=dict)
    axes: tuple = ()
    boundary: str = "pbc"

    def __post_init__(self):
        if self.model not in MODEL_NAMES:
            raise ValueError(f"unknown model {self.model!r}")
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("a sweep needs one or two axes")
        legal = set(MODEL_PARAMS[self.model]) - {"basis"}
        for axis in self.axes:
            if axis.name not in legal:
                raise ValueError(f"{axis.name!r} is not a sweepable parameter "
                                 f"of {self.model} (legal: {sorted(legal)})")
        if self.boundary not in ("pbc", "obc", "both"):
            raise ValueError("boundary must be 'pbc', 'obc' or 'both'")


@dataclass
class SweepTable:
    columns: list
    rows: list
    failures: list
    plan: SweepPlan


def _point_row(plan: SweepPlan, point: dict, boundary: str) -> dict:
    params = dict(plan.params)
    params.update(point)
    spec = LatticeSpec(num_sites=plan.num_sites,
                       local_dim=model_local_dim(plan.model, params),
                       boundary=boundary)
    partition = parse_partition(plan.pattern, spec)
    ham = build_hamiltonian(plan.model, spec, params)
    state = ground_state(ham)
    report = composite_report(state, spec, partition)
    row = {"E0": state.energy,
           "gap": state.gap if state.gap is not None else float("nan")}
    row.update(report.as_row())
    return row


def run_sweep(plan: SweepPlan, workers: int = 1) -> SweepTable:
    """Solve every grid point and assemble rows in grid order.

    Failed points keep their parameter cells, leave the rest empty, and are
    listed in ``failures``; the sweep continues past them.
    """
    boundaries = ["pbc", "obc"] if plan.boundary == "both" else [plan.boundary]
    axis_names = [ax.name for ax in plan.axes]
    if len(plan.axes) == 1:
        points = [{axis_names[0]: float(v)} for v in plan.axes[0].values]
    else:
        points = [{axis_names[0]: float(u), axis_names[1]: float(v)}
                  for u in plan.axes[0].values for v in plan.axes[1].values]

    columns = list(axis_names)
    for bc in boundaries:
        suffix = f"_{bc}" if len(boundaries) > 1 else ""
        columns += [c + suffix for c in REPORT_COLUMNS]

    def solve(point):
        merged = {}
        for bc in boundaries:
            suffix = f"_{bc}" if len(boundaries) > 1 else ""
            part = _point_row(plan, point, bc)
            merged.update({k + suffix: v for k, v in part.items()})
        return merged

    results = [None] * len(points)
    failures = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {k: pool.submit(solve, point)
                       for k, point in enumerate(points)}
            for k, future in futures.items():
                try:
                    results[k] = future.result()
                except (ConvergenceError, ValueError) as exc:
                    failures.append((k, str(exc)))
    else:
        for k, point in enumerate(points):
            try:
                results[k] = solve(point)
            except (ConvergenceError, ValueError) as exc:
                failures.append((k, str(exc)))

    rows = []
    for k, point in enumerate(points):
        row = dict(point)
        if results[k] is not None:
            row.update(results[k])
        rows.append(row)
    return SweepTable(columns=columns, rows=rows, failures=failures, plan=plan)


def peak_location(table: SweepTable, quantity: str):
    """Grid point where ``quantity`` is maximal; ties go to the smaller
    parameter.  Returns None when no row has a value (all points failed)."""
    if len(table.plan.axes) != 1:
        raise ValueError("peak_location expects a 1D sweep")
    if not table.rows:
        raise ValueError("empty sweep table")
    axis = table.plan.axes[0].name
    best = None
    for row in table.rows:
        if quantity not in row:
            continue
        if best is None or row[quantity] > best[1]:
            best = (row[axis], row[quantity])
    return best[0] if best else None


# ---------------------------------------------------------------------------
# tabular output
# ---------------------------------------------------------------------------

def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_table_csv(table: SweepTable, stream) -> None:
    stream.write(",".join(table.columns) + "\n")
    for row in table.rows:
        stream.write(",".join(_format_cell(row.get(c)) for c in table.columns)
                     + "\n")


def write_table_records(table: SweepTable, stream) -> None:
    for row in table.rows:
        record = {c: row[c] for c in table.columns if c in row}
        stream.write(json.dumps(record) + "\n")


def table_to_csv_text(table: SweepTable) -> str:
    buf = io.StringIO()
    write_table_csv(table, buf)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# shot sampling and counts files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountsTable:
    """Ditstring occurrence counts from a (real or emulated) shot run."""

    counts: dict
    num_sites: int
    local_dim: int

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __post_init__(self):
        if self.total <= 0:
            raise ValueError("counts table must contain at least one shot")


def sample_counts(table: ProbabilityTable, shots: int, seed: int) -> CountsTable:
    """Multinomial shot emulation, deterministic for a fixed seed."""
    if shots <= 0:
        raise ValueError("shots must be positive")
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, table.probs / table.probs.sum())
    spec = LatticeSpec(num_sites=table.num_sites, local_dim=table.local_dim)
    counts = {dits_to_text(index_to_dits(int(k), spec)): int(n)
              for k, n in enumerate(draws) if n > 0}
    return CountsTable(counts=counts, num_sites=table.num_sites,
                       local_dim=table.local_dim)


def write_counts(counts: CountsTable, stream) -> None:
    stream.write(f"# d={counts.local_dim} N={counts.num_sites}\n")
    for text in sorted(counts.counts):
        stream.write(f"{text},{counts.counts[text]}\n")


def ingest_counts(stream) -> ProbabilityTable:
    """Parse a counts file into a normalized probability table."""
    header = None
    for line in stream:
        line = line.strip()
        if line:
            header = line
            break
    if header is None or not header.startswith("#"):
        raise ValueError("counts file must start with a '# d=<d> N=<N>' header")
    fields = dict(part.split("=", 1) for part in header[1:].split())
    try:
        local_dim, num_sites = int(fields["d"]), int(fields["N"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"malformed counts header {header!r}") from exc

    spec = LatticeSpec(num_sites=num_sites, local_dim=local_dim)
    probs = np.zeros(spec.dim)
    total = 0
    for raw in stream:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            text, count_text = line.split(",")
            count = int(count_text)
        except ValueError as exc:
            raise ValueError(f"malformed counts line {line!r}") from exc
        if count < 0:
            raise ValueError(f"negative count in line {line!r}")
        index = dits_to_index(text_to_dits(text, spec), spec)
        probs[index] += count
        total += count
    if total == 0:
        raise ValueError("counts file contains no shots")
    return ProbabilityTable(probs=probs / total,
                            sites=tuple(range(num_sites)), local_dim=local_dim)


def counts_to_table(counts: CountsTable) -> ProbabilityTable:
    """Counts divided by total shots, as a probability table."""
    buf = io.StringIO()
    write_counts(counts, buf)
    buf.seek(0)
    return ingest_counts(buf)


def sampled_mutual_information(table: ProbabilityTable, region, shots: int,
                               seed: int) -> float:
    """Mutual information of a region estimated from emulated shot counts."""
    sampled = counts_to_table(sample_counts(table, shots, seed))
    return mutual_information(sampled, region)
