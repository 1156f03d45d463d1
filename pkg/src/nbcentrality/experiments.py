"""Reproduction harness: hub-degree sweeps and the IPR comparison table.

Sweep points are independent and may run in worker processes; results are
always returned in parameter order. CSV output has a fixed column order and,
with ``deterministic=True`` (which blanks the wall-clock column), is
byte-identical across runs for the same inputs and seeds.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .analysis import group_means, inverse_participation_ratio
from .centrality import eigenvector_centrality, nonbacktracking_centrality
from .errors import NBCentralityError
from .generators import HubModelParams, PowerLawParams, generate_er_plus_hub, generate_powerlaw_config
from .graph import Graph, read_edge_list
from .spectral import DEFAULT_MAX_ITERS, DEFAULT_TOL
from .theory import hub_predictions

logger = logging.getLogger(__name__)

__all__ = [
    "SweepRecord",
    "TableEntry",
    "TableRow",
    "DEFAULT_SEEDS",
    "DESK_N",
    "FULL_N",
    "run_hub_point",
    "run_hub_sweep",
    "summarize_sweep",
    "write_records_csv",
    "read_records_csv",
    "load_manifest",
    "run_table",
    "format_table",
    "default_manifest_path",
    "worker_count",
]

DEFAULT_SEEDS = (0, 1, 2, 3, 4)
DESK_N = 100_000
FULL_N = 1_000_001


def worker_count(requested: Optional[int] = None) -> int:
    """Requested worker count, capped by the ``NBC_THREADS`` environment variable."""
    workers = requested or 1
    cap = os.environ.get("NBC_THREADS")
    if cap:
        workers = min(workers, max(1, int(cap)))
    return max(1, workers)


def _map(func, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _opt(x) -> float:
    return math.nan if x is None else float(x)


# -- hub sweep -------------------------------------------------------------------------


@dataclass
class SweepRecord:
    n: int
    c: float
    d: float
    seed: int
    hub_degree: int = -1
    ev_lambda: float = math.nan
    nb_lambda: float = math.nan
    ev_ipr: float = math.nan
    nb_ipr: float = math.nan
    hub_mean: float = math.nan
    neighbor_mean: float = math.nan
    other_mean: float = math.nan
    nb_hub_mean: float = math.nan
    nb_neighbor_mean: float = math.nan
    nb_other_mean: float = math.nan
    theory_z1: float = math.nan
    theory_z2: float = math.nan
    theory_threshold: float = math.nan
    theory_hub_weight_sq: float = math.nan
    predicted_localized: bool = False
    ev_converged: bool = False
    nb_converged: bool = False
    runtime_ms: Optional[float] = None
    error: str = ""

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @property
    def ok(self) -> bool:
        return not self.error


@dataclass(frozen=True)
class _HubJob:
    n: int
    c: float
    d: float
    seed: int
    tol: float
    max_iters: int
    deterministic: bool


def _attach_theory(rec: SweepRecord) -> None:
    th = hub_predictions(rec.c, rec.d)
    rec.theory_z1 = th.z1
    rec.theory_z2 = _opt(th.z2)
    rec.theory_threshold = th.d_threshold
    rec.theory_hub_weight_sq = _opt(th.hub_weight_sq)
    rec.predicted_localized = th.localized


def _run_hub_job(job: _HubJob) -> SweepRecord:
    rec = SweepRecord(n=job.n, c=job.c, d=job.d, seed=job.seed)
    _attach_theory(rec)
    start = time.perf_counter()
    try:
        graph = generate_er_plus_hub(HubModelParams(job.n, job.c, job.d, job.seed))
        hub = graph.n - 1
        rec.hub_degree = int(graph.degrees[hub])
        ev = eigenvector_centrality(graph, tol=job.tol, seed=job.seed, max_iters=job.max_iters,
                                    largest_component=True)
        nb = nonbacktracking_centrality(graph, tol=job.tol, seed=job.seed, max_iters=job.max_iters,
                                        largest_component=True)
        rec.ev_lambda, rec.nb_lambda = ev.eigenvalue, nb.eigenvalue
        rec.ev_converged, rec.nb_converged = ev.converged, nb.converged
        rec.ev_ipr = inverse_participation_ratio(ev)
        rec.nb_ipr = inverse_participation_ratio(nb)
        gm = group_means(graph, ev, hub)
        rec.hub_mean, rec.neighbor_mean, rec.other_mean = gm.hub, _opt(gm.hub_neighbors), _opt(gm.others)
        gm = group_means(graph, nb, hub)
        rec.nb_hub_mean, rec.nb_neighbor_mean, rec.nb_other_mean = (
            gm.hub, _opt(gm.hub_neighbors), _opt(gm.others))
    except (NBCentralityError, ValueError, ArithmeticError) as exc:
        logger.warning("sweep point n=%d c=%g d=%g seed=%d failed: %s", job.n, job.c, job.d, job.seed, exc)
        rec.error = f"{type(exc).__name__}: {exc}"
    if not job.deterministic:
        rec.runtime_ms = round((time.perf_counter() - start) * 1000.0, 1)
    return rec


def run_hub_point(n: int, c: float, d: float, seed: int, tol: float = DEFAULT_TOL,
                  max_iters: int = DEFAULT_MAX_ITERS, deterministic: bool = False) -> SweepRecord:
    return _run_hub_job(_HubJob(n, c, d, seed, tol, max_iters, deterministic))


def run_hub_sweep(
    c: float,
    d_values: Iterable[float],
    n: int = DESK_N,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    workers: int = 1,
    deterministic: bool = False,
) -> list[SweepRecord]:
    """Generate and score one hub-model graph per ``(d, seed)``.

    Records come back ordered by ``d`` then ``seed`` as given. A failing point
    is recorded with its ``error`` set and NaN measurements; the sweep
    carries on.
    """
    jobs = [_HubJob(int(n), float(c), float(d), int(s), tol, max_iters, deterministic)
            for d in d_values for s in seeds]
    return _map(_run_hub_job, jobs, worker_count(workers))


def _stat(values) -> tuple[float, float, float]:
    vals = [v for v in values if not math.isnan(v)]
    if not vals:
        return math.nan, math.nan, math.nan
    return float(np.mean(vals)), float(min(vals)), float(max(vals))


def summarize_sweep(records: Sequence[SweepRecord]) -> list[dict]:
    """Per-``(n, c, d)`` ensemble mean, min and max of the IPRs and eigenvalues."""
    groups: dict[tuple, list[SweepRecord]] = {}
    for r in records:
        groups.setdefault((r.n, r.c, r.d), []).append(r)
    out = []
    for (n, c, d), recs in groups.items():
        good = [r for r in recs if r.ok]
        row = {"n": n, "c": c, "d": d, "seeds": len(recs), "failed": len(recs) - len(good),
               "predicted_localized": recs[0].predicted_localized}
        for key in ("ev_ipr", "nb_ipr", "ev_lambda", "nb_lambda", "hub_mean"):
            row[key], row[key + "_min"], row[key + "_max"] = _stat(getattr(r, key) for r in good)
        out.append(row)
    return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def write_records_csv(records: Sequence[SweepRecord], out) -> None:
    """Write records with a header row; ``out`` is a path or text stream."""
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            return write_records_csv(records, fh)
    writer = csv.writer(out, lineterminator="\n")
    cols = SweepRecord.columns()
    writer.writerow(cols)
    for r in records:
        writer.writerow([_fmt(getattr(r, col)) for col in cols])


def write_rows_csv(rows: Sequence[dict], out) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            return write_rows_csv(rows, fh)
    if not rows:
        return
    writer = csv.writer(out, lineterminator="\n")
    cols = list(rows[0])
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in cols])


def read_records_csv(src) -> list[SweepRecord]:
    if isinstance(src, (str, Path)):
        with open(src, encoding="utf-8", newline="") as fh:
            return read_records_csv(fh)
    types = {f.name: f.type for f in fields(SweepRecord)}
    records = []
    for row in csv.DictReader(src):
        kwargs = {}
        for key, raw in row.items():
            kind = types[key]
            if kind in ("int", int):
                kwargs[key] = int(raw)
            elif kind in ("bool", bool):
                kwargs[key] = raw == "true"
            elif kind == "str":
                kwargs[key] = raw
            elif kind == "Optional[float]":
                kwargs[key] = float(raw) if raw else None
            else:
                kwargs[key] = float(raw)
        records.append(SweepRecord(**kwargs))
    return records


# -- IPR table --------------------------------------------------------------------------


@dataclass
class TableEntry:
    """One network of the comparison table: a generator spec or an edge-list file.

    ``largest_component`` and ``symmetrize`` set the preprocessing of file
    entries; both can be given per network in the manifest.
    """

    name: str
    generator: Optional[str] = None
    params: dict = field(default_factory=dict)
    desk_params: dict = field(default_factory=dict)
    path: Optional[str] = None
    published: dict = field(default_factory=dict)
    description: str = ""
    largest_component: bool = True
    symmetrize: str = "union"

    @property
    def synthetic(self) -> bool:
        return self.generator is not None


@dataclass
class TableRow:
    name: str
    nodes: Optional[int] = None
    ev_ipr: float = math.nan
    nb_ipr: float = math.nan
    ev_ipr_min: float = math.nan
    ev_ipr_max: float = math.nan
    nb_ipr_min: float = math.nan
    nb_ipr_max: float = math.nan
    seeds: int = 0
    published_nodes: Optional[int] = None
    published_ev_ipr: float = math.nan
    published_nb_ipr: float = math.nan
    error: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def default_manifest_path() -> Path:
    return Path(__file__).with_name("data") / "table_manifest.json"


def load_manifest(path=None) -> list[TableEntry]:
    """Read a JSON manifest; relative edge-list paths resolve against the manifest's directory."""
    path = Path(path) if path is not None else default_manifest_path()
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    entries = []
    for item in doc["networks"]:
        entry = TableEntry(**item)
        if entry.path is not None and not os.path.isabs(entry.path):
            entry.path = str((path.parent / entry.path).resolve())
        entries.append(entry)
    return entries


def _build_synthetic(entry: TableEntry, seed: int, full: bool) -> Graph:
    params = dict(entry.params)
    if not full:
        params.update(entry.desk_params)
    if entry.generator == "er-hub":
        return generate_er_plus_hub(HubModelParams(int(params["n"]), float(params["c"]), float(params["d"]), seed))
    if entry.generator == "powerlaw":
        return generate_powerlaw_config(
            PowerLawParams(int(params["n"]), float(params["alpha"]), int(params.get("k_min", 1)), seed))
    raise ValueError(f"unknown generator {entry.generator!r}")


def _score(graph: Graph, tol: float, seed: int, max_iters: int, largest_component: bool) -> tuple[float, float]:
    ev = eigenvector_centrality(graph, tol=tol, seed=seed, max_iters=max_iters, largest_component=largest_component)
    nb = nonbacktracking_centrality(graph, tol=tol, seed=seed, max_iters=max_iters,
                                    largest_component=largest_component)
    if not (ev.converged and nb.converged):
        logger.warning("solver did not converge (ev=%s, nb=%s)", ev.converged, nb.converged)
    return inverse_participation_ratio(ev), inverse_participation_ratio(nb)


def _run_entry(args) -> TableRow:
    entry, tol, seeds, full, max_iters = args
    row = TableRow(
        name=entry.name,
        published_nodes=entry.published.get("nodes"),
        published_ev_ipr=_opt(entry.published.get("ev_ipr")),
        published_nb_ipr=_opt(entry.published.get("nb_ipr")),
    )
    try:
        evs, nbs = [], []
        run_seeds = seeds if entry.synthetic else seeds[:1]
        for seed in run_seeds:
            if entry.synthetic:
                graph = _build_synthetic(entry, seed, full)
            else:
                if entry.path is None or not os.path.exists(entry.path):
                    raise FileNotFoundError(f"edge list not found: {entry.path} (dataset is not bundled)")
                graph = read_edge_list(entry.path, entry.symmetrize)
            row.nodes = graph.n
            ev, nb = _score(graph, tol, seed, max_iters, entry.largest_component)
            evs.append(ev)
            nbs.append(nb)
        row.seeds = len(evs)
        row.ev_ipr, row.ev_ipr_min, row.ev_ipr_max = _stat(evs)
        row.nb_ipr, row.nb_ipr_min, row.nb_ipr_max = _stat(nbs)
    except (OSError, NBCentralityError, ValueError, ArithmeticError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
        logger.warning("table row %r failed: %s", entry.name, exc)
    return row


def run_table(
    entries: Sequence[TableEntry],
    tol: float = DEFAULT_TOL,
    seeds: Sequence[int] = (0,),
    full: bool = False,
    max_iters: int = DEFAULT_MAX_ITERS,
    workers: int = 1,
) -> list[TableRow]:
    """IPR of eigenvector and nonbacktracking centrality for each network.

    Synthetic entries use their desk-scale parameters unless ``full``; they
    are averaged over ``seeds`` with min/max kept. File entries are scored
    once. A missing file or failed solve is reported on its row only.
    """
    jobs = [(e, tol, tuple(seeds), full, max_iters) for e in entries]
    return _map(_run_entry, jobs, worker_count(workers))


def _ipr_text(x: float) -> str:
    if math.isnan(x):
        return "-"
    if x < 1e-3:
        return f"{x:.1e}"
    return f"{x:.4f}"


def format_table(rows: Sequence[TableRow], with_published: bool = True) -> str:
    """Plain-text table in the layout Network | Nodes | Eigenvector | Nonbacktracking."""
    header = ["Network", "Nodes", "Eigenvector", "Nonbacktracking"]
    if with_published:
        header += ["(published EV)", "(published NB)"]
    body = []
    for r in rows:
        cells = [r.name, "-" if r.nodes is None else f"{r.nodes:,}".replace(",", " "),
                 _ipr_text(r.ev_ipr), _ipr_text(r.nb_ipr)]
        if with_published:
            cells += [_ipr_text(r.published_ev_ipr), _ipr_text(r.published_nb_ipr)]
        if r.error:
            cells[2] = cells[3] = "n/a"
        body.append(cells)
    widths = [max(len(str(c)) for c in col) for col in zip(header, *body)]
    lines = ["  ".join(h.ljust(w) if i == 0 else h.rjust(w) for i, (h, w) in enumerate(zip(header, widths)))]
    lines.append("-" * len(lines[0]))
    for cells, r in zip(body, rows):
        line = "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(cells, widths)))
        if r.error:
            line += f"   [{r.error}]"
        lines.append(line)
    return "\n".join(lines)


def table_csv(rows: Sequence[TableRow]) -> str:
    buf = io.StringIO()
    write_rows_csv([r.as_dict() for r in rows], buf)
    return buf.getvalue()
