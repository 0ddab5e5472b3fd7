"""Merging per-block solutions by solving a coarse signed-weight MaxCut.

Each block ``i`` contributes a local solution ``x_i`` and may be kept as is
(``s_i = +1``) or globally flipped (``s_i = -1``); flipping never changes the
block's own cut. For a pair of blocks the crossing edges split into the
weight cut when both blocks keep the same orientation (``sync``) and the
weight cut when they disagree (``async``). With ``w' = async - sync`` the cut
of the expanded assignment is exactly::

    C(s) = offset - 1/2 * sum_{i<j} w'_ij s_i s_j

so choosing ``s`` is a MaxCut on the block graph with weights ``w'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .graph import Graph, check_assignment, cut_value, induced_subgraphs
from .oracle import local_search_polish
from .partition import Partition

__all__ = ["CoarseProblem", "build_coarse", "coarse_objective", "expand", "solve_merge"]


@dataclass(frozen=True, eq=False)
class CoarseProblem:
    coarse_graph: Graph
    offset: float
    sync_weights: np.ndarray
    async_weights: np.ndarray
    local_solutions: list
    local_cuts: list
    partition: Partition
    base: Graph
    # concatenation of the local solutions over base nodes (the s = +1 expansion)
    naive: np.ndarray

    @property
    def n_blocks(self) -> int:
        return self.partition.n_blocks

    @property
    def coarse_weights(self) -> np.ndarray:
        return self.async_weights - self.sync_weights

    def to_json(self) -> dict:
        return {
            "n_blocks": self.n_blocks,
            "offset": self.offset,
            "local_cuts": [float(c) for c in self.local_cuts],
        }


def build_coarse(g: Graph, p: Partition, locals_: Sequence) -> CoarseProblem:
    h = p.n_blocks
    if len(locals_) != h:
        raise ValueError(f"{len(locals_)} local solutions for {h} blocks")
    subs = induced_subgraphs(g, p)
    x = np.empty(g.n_nodes, dtype=np.int8)
    local_cuts = []
    checked = []
    for (sub, nodes), loc in zip(subs, locals_):
        loc = check_assignment(sub, loc)
        x[nodes] = loc
        checked.append(loc)
        local_cuts.append(cut_value(sub, loc))

    bu, bv = p.block_of[g.u], p.block_of[g.v]
    inter = bu != bv
    lo, hi = np.minimum(bu[inter], bv[inter]), np.maximum(bu[inter], bv[inter])
    w = g.w[inter]
    agree = x[g.u[inter]] * x[g.v[inter]]
    sync = np.zeros((h, h))
    asyn = np.zeros((h, h))
    np.add.at(sync, (lo, hi), np.where(agree < 0, w, 0.0))
    np.add.at(asyn, (lo, hi), np.where(agree > 0, w, 0.0))
    sync = sync + sync.T
    asyn = asyn + asyn.T

    wprime = asyn - sync
    iu, ju = np.nonzero(np.triu(wprime, k=1))
    coarse = Graph(h, iu, ju, wprime[iu, ju])
    offset = float(np.sum(local_cuts) + 0.5 * np.sum(np.triu(sync + asyn, k=1)))
    x.setflags(write=False)
    return CoarseProblem(coarse, offset, sync, asyn, checked, local_cuts, p, g, x)


def coarse_objective(cp: CoarseProblem, s) -> float:
    s = check_assignment(cp.coarse_graph, s)
    cg = cp.coarse_graph
    return cp.offset - 0.5 * float(np.sum(cg.w * s[cg.u] * s[cg.v]))


def expand(cp: CoarseProblem, s) -> np.ndarray:
    """Base-level assignment obtained by flipping the blocks with ``s_i = -1``."""
    s = check_assignment(cp.coarse_graph, s)
    return (s[cp.partition.block_of] * cp.naive).astype(np.int8)


def solve_merge(cp: CoarseProblem, solver: Callable[[Graph], np.ndarray]) -> tuple[np.ndarray, float]:
    """Solve the coarse problem with ``solver`` and make the result safe.

    The solver's answer is 1-flip polished, then replaced by the all-(+1)
    vector if that scores strictly higher. The returned value is therefore
    never below the naive merge and at least half of the coarse weight.
    """
    h = cp.n_blocks
    if h == 1 or cp.coarse_graph.n_edges == 0:
        s = np.ones(h, dtype=np.int8)
        return s, coarse_objective(cp, s)
    s = local_search_polish(cp.coarse_graph, solver(cp.coarse_graph))
    value = coarse_objective(cp, s)
    ones = np.ones(h, dtype=np.int8)
    naive_value = coarse_objective(cp, ones)
    if naive_value > value:
        return ones, naive_value
    return s, value
