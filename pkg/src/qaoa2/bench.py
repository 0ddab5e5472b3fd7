"""Experiment grids: instance families, per-cell runs, and CSV rows."""

from __future__ import annotations

import csv
import glob
import io
import itertools
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._rng import child_seed
from .graph import Graph, generate, read_edge_list
from .qaoa import QaoaConfig
from .solver import SolverChoice, select_denominator, solve

__all__ = [
    "COLUMNS",
    "GridSpec",
    "family_instance",
    "instance_name",
    "load_grid",
    "parse_family",
    "run_grid",
    "write_csv",
]

COLUMNS = [
    "instance", "kind", "n", "d", "seed", "partition", "solver", "budget", "p", "iters", "lr",
    "shots", "merge_mode", "cut", "cut_before_polish", "denominator_kind", "denominator",
    "ratio", "modularity", "depth", "wall_ms",
]

SOLVER_ALIASES = {"qaoa": "qaoa", "local": "local_search", "local_search": "local_search",
                  "brute": "brute_force", "brute_force": "brute_force"}
DENOMINATOR_ALIASES = {"exact": "exact", "asymp": "asymptotic", "asymptotic": "asymptotic",
                       "best-known": "best_known", "best_known": "best_known"}

_FAMILY = re.compile(r"^([uw])(\d+)([re])$")


def parse_family(family: str) -> tuple[bool, int, str]:
    """``"u9r"`` -> ``(weighted=False, d=9, kind="regular")``."""
    m = _FAMILY.match(family)
    if not m:
        raise ValueError(f"bad family {family!r}; expected e.g. u9r, w3e")
    return m.group(1) == "w", int(m.group(2)), "regular" if m.group(3) == "r" else "erdos_renyi"


def instance_name(family: str, n: int, k: int) -> str:
    return f"{family}-{n}_g{k}"


def family_instance(family: str, n: int, k: int, seed: int = 0, weight_low: int = 0) -> Graph:
    """The ``k``-th (1-based) seeded instance of a family such as ``u9r``."""
    weighted, d, kind = parse_family(family)
    return generate(kind, n, d, weighted, child_seed(seed, "instance", family, n, k), weight_low)


@dataclass
class GridSpec:
    families: list
    n: list
    instances: int = 1
    instance_seed: int = 0
    seeds: list = (0,)
    budgets: list = (10,)
    p: list = (1,)
    partitions: list = ("random",)
    solvers: list = ("qaoa",)
    merge_modes: list = ("optimized",)
    inputs: list = ()
    iters: int = 20
    lr: float = 0.01
    shots: int = 1000
    samples: int = 1000
    init: str = "uniform"
    mode: str = "shots"
    denominator: str = "best-known"
    restarts: int = 100
    final_polish: bool = True
    weight_low: int = 0

    def __post_init__(self):
        for fam in self.families:
            parse_family(fam)
        for s in self.solvers:
            if s not in SOLVER_ALIASES:
                raise ValueError(f"unknown solver {s!r}")
        if self.denominator not in DENOMINATOR_ALIASES:
            raise ValueError(f"unknown denominator {self.denominator!r}")
        for m in self.merge_modes:
            if m not in ("optimized", "naive"):
                raise ValueError(f"unknown merge mode {m!r}")
        for part in self.partitions:
            if part not in ("random", "greedy"):
                raise ValueError(f"unknown partition {part!r}")
        if not self.families and not self.inputs:
            raise ValueError("grid needs 'families' or 'inputs'")

    def instances_iter(self):
        """Yield ``(name, family_or_kind, n, d, graph)`` in grid order."""
        for fam in self.families:
            _, d, _ = parse_family(fam)
            for n in self.n:
                for k in range(1, self.instances + 1):
                    g = family_instance(fam, n, k, self.instance_seed, self.weight_low)
                    yield instance_name(fam, n, k), fam, n, d, g
        for pattern in self.inputs:
            for path in sorted(glob.glob(pattern)):
                g = read_edge_list(path)
                yield Path(path).stem, "file", g.n_nodes, "", g


def load_grid(path) -> GridSpec:
    try:
        import tomllib
    except ModuleNotFoundError:  # python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    known = set(GridSpec.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown grid keys: {sorted(unknown)}")
    data.setdefault("families", [])
    data.setdefault("n", [])
    for key in ("families", "n", "seeds", "budgets", "p", "partitions", "solvers", "merge_modes", "inputs"):
        if key in data and not isinstance(data[key], list):
            data[key] = [data[key]]
    return GridSpec(**data)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return x


def run_cell(g: Graph, meta: dict, spec: GridSpec, denominator: float) -> dict:
    solver_kind = SOLVER_ALIASES[meta["solver"]]
    cfg = QaoaConfig(
        p=meta["p"], iterations=spec.iters, learning_rate=spec.lr, shots=spec.shots,
        sample_rounds=spec.samples, init_state=spec.init, expectation_mode=spec.mode, seed=meta["seed"],
    )
    t0 = time.perf_counter()
    report = solve(
        g, meta["budget"], meta["partition"], SolverChoice(solver_kind, cfg), meta["seed"],
        merge_mode=meta["merge_mode"], final_polish=spec.final_polish,
    )
    wall_ms = (time.perf_counter() - t0) * 1000
    row = dict(meta)
    row.update(
        iters=spec.iters, lr=spec.lr, shots=spec.shots,
        cut=report.cut, cut_before_polish=report.cut_before_polish,
        denominator_kind=DENOMINATOR_ALIASES[spec.denominator], denominator=denominator,
        ratio=report.cut / denominator if denominator else None,
        modularity=report.modularity, depth=report.depth, wall_ms=round(wall_ms, 3),
    )
    return row


def _run_job(job):
    return run_cell(*job)


def iter_jobs(spec: GridSpec):
    denom_kind = DENOMINATOR_ALIASES[spec.denominator]
    configs = list(itertools.product(spec.budgets, spec.p, spec.partitions, spec.solvers, spec.merge_modes))
    for name, kind, n, d, g in spec.instances_iter():
        denom = select_denominator(
            g, denom_kind, d if d != "" else None,
            child_seed(spec.instance_seed, "denominator", name), spec.restarts,
        )
        for budget, p, part, solver, merge in configs:
            for seed in spec.seeds:
                meta = dict(instance=name, kind=kind, n=n, d=d, seed=seed, partition=part,
                            solver=solver, budget=budget, p=p, merge_mode=merge)
                yield g, meta, spec, denom


def summarize(rows: list[dict]) -> list[dict]:
    """Mean and std rows per configuration (over instances and seeds)."""
    keys = ("kind", "n", "d", "partition", "solver", "budget", "p", "iters", "lr", "shots", "merge_mode")
    numeric = ("cut", "cut_before_polish", "ratio", "modularity", "depth", "wall_ms")
    groups: dict = {}
    for r in rows:
        groups.setdefault(tuple(r[k] for k in keys), []).append(r)
    out = []
    for key, members in groups.items():
        for stat, fn in (("mean", np.mean), ("std", np.std)):
            row = dict(zip(keys, key))
            row.update(instance=stat, seed="", denominator_kind="summary", denominator=None)
            for col in numeric:
                vals = [m[col] for m in members if m[col] is not None]
                row[col] = float(fn(vals)) if vals else None
            out.append(row)
    return out


def run_grid(spec: GridSpec, jobs: int = 1) -> list[dict]:
    work = list(iter_jobs(spec))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_run_job, work))
    else:
        rows = [_run_job(w) for w in work]
    return rows + summarize(rows)


def write_csv(rows: list[dict], fh=None) -> str:
    buf = io.StringIO() if fh is None else fh
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({c: _fmt(r.get(c)) for c in COLUMNS})
    return buf.getvalue() if fh is None else ""
