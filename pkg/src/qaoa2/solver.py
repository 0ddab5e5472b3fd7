"""Hierarchical divide-and-conquer MaxCut driver.

A graph larger than the qubit budget is partitioned into blocks of at most
``budget`` nodes, every block is solved independently, and the choice of
which blocks to flip is itself a MaxCut over the blocks (see
:mod:`qaoa2.merge`). That coarse problem is solved by the same procedure, so
the recursion continues until a level fits the budget.
"""

from __future__ import annotations

import dataclasses
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._rng import child_seed
from .graph import Graph, check_assignment, cut_value, induced_subgraphs, total_weight
from .merge import build_coarse, expand, solve_merge
from .oracle import (
    BRUTE_FORCE_MAX_NODES,
    asymptotic_optimum,
    brute_force,
    local_search_polish,
    multistart_local_search,
)
from .partition import Partition, greedy_modularity_partition, modularity, random_partition
from .qaoa import MAX_QUBITS, QaoaConfig, qaoa_solve

__all__ = ["SolveError", "SolveReport", "SolverChoice", "select_denominator", "solve"]

SOLVER_KINDS = ("qaoa", "brute_force", "local_search")
DENOMINATOR_KINDS = ("exact", "asymptotic", "best_known")


class SolveError(RuntimeError):
    """A block solver failed; ``level`` and ``block`` locate the subproblem."""

    def __init__(self, level: int, block: int, cause: BaseException):
        self.level, self.block = level, block
        super().__init__(f"solver failed on level {level} block {block}: {cause}")


@dataclass(frozen=True)
class SolverChoice:
    """Which MaxCut routine handles subproblems that fit the budget."""

    kind: str = "qaoa"
    qaoa_cfg: QaoaConfig = field(default_factory=QaoaConfig)
    restarts: int = 10

    def __post_init__(self):
        if self.kind not in SOLVER_KINDS:
            raise ValueError(f"unknown solver kind {self.kind!r}")

    def max_nodes(self) -> int:
        return {"qaoa": MAX_QUBITS, "brute_force": BRUTE_FORCE_MAX_NODES}.get(self.kind, 10**9)

    def __call__(self, g: Graph, seed: int) -> np.ndarray:
        """Polished assignment for ``g``; cut is at least half its weight."""
        if g.n_edges == 0:
            return np.ones(g.n_nodes, dtype=np.int8)
        if self.kind == "qaoa":
            return qaoa_solve(g, dataclasses.replace(self.qaoa_cfg, seed=seed))
        if self.kind == "brute_force":
            return local_search_polish(g, brute_force(g)[0])
        return multistart_local_search(g, self.restarts, seed)[0]


@dataclass
class SolveReport:
    assignment: np.ndarray
    cut: float
    cut_before_polish: float
    total_weight: float
    depth: int
    level_sizes: list
    blocks_per_level: list
    wall_times: dict
    seeds: dict
    modularity: float | None = None
    denominator_kind: str | None = None
    denominator: float | None = None

    @property
    def ratio(self) -> float | None:
        return None if self.denominator is None else self.cut / self.denominator

    @property
    def ratio_before_polish(self) -> float | None:
        return None if self.denominator is None else self.cut_before_polish / self.denominator

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "cut": self.cut,
            "cut_before_polish": self.cut_before_polish,
            "total_weight": self.total_weight,
            "depth": self.depth,
            "level_sizes": list(self.level_sizes),
            "blocks_per_level": list(self.blocks_per_level),
            "modularity": self.modularity,
            "denominator_kind": self.denominator_kind,
            "denominator": self.denominator,
            "ratio": self.ratio,
            "seeds": dict(self.seeds),
            "assignment": [int(b) for b in self.assignment],
        }
        if timings:
            out["wall_times"] = dict(self.wall_times)
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), sort_keys=True)


def select_denominator(
    g: Graph,
    kind: str,
    d: float | None = None,
    seed: int = 0,
    restarts: int = 100,
) -> float:
    """Reference optimum for approximation ratios.

    ``exact`` enumerates (small graphs only), ``asymptotic`` evaluates the
    large-degree formula for unweighted graphs, ``best_known`` takes the best
    of ``restarts`` seeded local searches.
    """
    if kind == "exact":
        return brute_force(g)[1]
    if kind == "asymptotic":
        if not np.all(g.w == 1):
            raise ValueError("asymptotic denominator requires an unweighted graph")
        if d is None:
            d = 2 * g.n_edges / g.n_nodes
        return asymptotic_optimum(g.n_nodes, d)
    if kind == "best_known":
        return multistart_local_search(g, restarts, seed)[1]
    raise ValueError(f"unknown denominator kind {kind!r}")


class _Run:
    """Mutable bookkeeping for one :func:`solve` call."""

    def __init__(self, budget, partition_strategy, solver, seed, merge_mode, n_jobs, on_coarse):
        self.budget = budget
        self.partition_strategy = partition_strategy
        self.solver = solver
        self.seed = seed
        self.merge_mode = merge_mode
        self.n_jobs = n_jobs
        self.on_coarse = on_coarse
        self.level_sizes: list[int] = []
        self.blocks_per_level: list[int] = []
        self.base_partition: Partition | None = None
        self.wall = {"partition": 0.0, "local_solve": 0.0, "merge": 0.0, "polish": 0.0}

    def partition(self, g: Graph, level: int) -> Partition:
        t0 = time.perf_counter()
        # greedy modularity needs nonnegative weights, so coarse levels go random
        if self.partition_strategy == "greedy" and level == 0:
            p = greedy_modularity_partition(g, self.budget)
        else:
            p = random_partition(g, self.budget, child_seed(self.seed, "partition", level))
        self.wall["partition"] += time.perf_counter() - t0
        return p

    def solve_block(self, g: Graph, level: int, block: int) -> np.ndarray:
        try:
            return self.solver(g, child_seed(self.seed, "block", level, block))
        except Exception as exc:  # noqa: BLE001
            raise SolveError(level, block, exc) from exc

    def solve_blocks(self, subs, level: int) -> list:
        t0 = time.perf_counter()
        jobs = [(sub, level, i) for i, (sub, _) in enumerate(subs)]
        if self.n_jobs > 1:
            with ThreadPoolExecutor(self.n_jobs) as pool:
                out = list(pool.map(lambda a: self.solve_block(*a), jobs))
        else:
            out = [self.solve_block(*a) for a in jobs]
        self.wall["local_solve"] += time.perf_counter() - t0
        return out

    def level(self, g: Graph, level: int) -> np.ndarray:
        if level == 0:
            self.level_sizes.append(g.n_nodes)
        if g.n_nodes <= self.budget:
            t0 = time.perf_counter()
            z = self.solve_block(g, level, 0)
            self.wall["local_solve"] += time.perf_counter() - t0
            return z
        p = self.partition(g, level)
        if level == 0:
            self.base_partition = p
        self.blocks_per_level.append(p.n_blocks)
        locals_ = self.solve_blocks(induced_subgraphs(g, p), level)
        t0 = time.perf_counter()
        cp = build_coarse(g, p, locals_)
        self.wall["merge"] += time.perf_counter() - t0
        self.level_sizes.append(cp.n_blocks)
        if self.on_coarse is not None:
            self.on_coarse(level, cp)
        if self.merge_mode == "naive":
            s = np.ones(cp.n_blocks, dtype=np.int8)
        else:
            s, _ = solve_merge(cp, lambda cg: self.level(cg, level + 1))
        return expand(cp, s)


def solve(
    g: Graph,
    budget: int,
    partition_strategy: str = "random",
    solver: SolverChoice | None = None,
    seed: int = 0,
    *,
    merge_mode: str = "optimized",
    final_polish: bool = True,
    denominator: str | None = None,
    degree: float | None = None,
    denominator_restarts: int = 100,
    n_jobs: int = 1,
    on_coarse=None,
) -> SolveReport:
    """Run the hierarchical solver on ``g`` with at most ``budget`` nodes per solve.

    ``merge_mode="naive"`` skips the coarse solve and keeps every local
    solution unflipped. ``on_coarse(level, coarse_problem)`` is called for each
    coarse problem built, e.g. to dump it for debugging.
    """
    if budget < 2:
        raise ValueError("budget must be >= 2")
    if partition_strategy not in ("random", "greedy"):
        raise ValueError(f"unknown partition strategy {partition_strategy!r}")
    if merge_mode not in ("optimized", "naive"):
        raise ValueError(f"unknown merge mode {merge_mode!r}")
    solver = solver or SolverChoice()
    if budget > solver.max_nodes():
        raise ValueError(f"budget {budget} exceeds the {solver.kind} limit of {solver.max_nodes()} nodes")

    run = _Run(budget, partition_strategy, solver, seed, merge_mode, n_jobs, on_coarse)
    z = check_assignment(g, run.level(g, 0))
    before = cut_value(g, z)
    if final_polish:
        t0 = time.perf_counter()
        z = local_search_polish(g, z)
        run.wall["polish"] += time.perf_counter() - t0
    report = SolveReport(
        assignment=z,
        cut=cut_value(g, z),
        cut_before_polish=before,
        total_weight=total_weight(g),
        depth=len(run.blocks_per_level),
        level_sizes=run.level_sizes,
        blocks_per_level=run.blocks_per_level,
        wall_times=run.wall,
        seeds={"seed": seed},
    )
    if run.base_partition is not None and report.total_weight > 0 and np.all(g.w >= 0):
        report.modularity = modularity(g, run.base_partition)
    if denominator is not None:
        report.denominator_kind = denominator
        report.denominator = select_denominator(g, denominator, degree, seed, denominator_restarts)
    return report
