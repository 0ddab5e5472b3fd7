"""Classical reference solvers: exhaustive search, 1-flip local search, and
the large-degree asymptotic optimum used as a ratio denominator."""

from __future__ import annotations

import math

import numba
import numpy as np

from ._rng import stream
from .graph import Graph, check_assignment, cut_value

__all__ = [
    "BRUTE_FORCE_MAX_NODES",
    "PARISI_CONSTANT",
    "asymptotic_optimum",
    "brute_force",
    "local_search_polish",
    "multistart_local_search",
]

BRUTE_FORCE_MAX_NODES = 22
PARISI_CONSTANT = 0.7632


@numba.njit(cache=True)
def _gray_search(n, indptr, indices, weights):
    # bit k of the Gray code set <=> node k+1 has spin -1; node 0 fixed at +1
    z = np.ones(n, dtype=np.int8)
    cut = 0.0
    best = 0.0
    best_code = 0
    code = 0
    for step in range(1, 1 << (n - 1)):
        k = 0
        t = step
        while (t & 1) == 0:
            t >>= 1
            k += 1
        node = k + 1
        # flipping `node` changes the cut by sum_j w_ij z_i z_j
        delta = 0.0
        zi = z[node]
        for p in range(indptr[node], indptr[node + 1]):
            delta += weights[p] * zi * z[indices[p]]
        z[node] = -zi
        cut += delta
        code ^= 1 << k
        if cut > best:
            best = cut
            best_code = code
    return best_code


def brute_force(g: Graph) -> tuple[np.ndarray, float]:
    """Exact maximum cut by Gray-code enumeration with node 0 pinned to +1."""
    n = g.n_nodes
    if n > BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_NODES} nodes, got {n}")
    if n <= 1:
        z = np.ones(n, dtype=np.int8)
        return z, 0.0
    indptr, indices, weights = g.csr
    code = _gray_search(n, indptr, indices, weights)
    z = np.ones(n, dtype=np.int8)
    for k in range(n - 1):
        if (code >> k) & 1:
            z[k + 1] = -1
    # recompute from scratch so the reported value carries no accumulated rounding
    return z, cut_value(g, z)


@numba.njit(cache=True)
def _polish(z, indptr, indices, weights):
    n = z.shape[0]
    gain = np.zeros(n)
    for i in range(n):
        s = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            s += weights[p] * z[indices[p]]
        gain[i] = z[i] * s
    improved = True
    while improved:
        improved = False
        for i in range(n):
            if gain[i] > 1e-12:
                zi = z[i]
                z[i] = -zi
                gain[i] = -gain[i]
                for p in range(indptr[i], indptr[i + 1]):
                    j = indices[p]
                    # edge (i, j) flipped between cut/uncut
                    gain[j] -= 2.0 * weights[p] * z[j] * zi
                improved = True
    return z


def local_search_polish(g: Graph, start) -> np.ndarray:
    """Flip single nodes (first improvement, node order) until none helps.

    The result is 1-flip optimal, so its cut is at least half the (signed)
    total weight.
    """
    z = check_assignment(g, start).astype(np.int8, copy=True)
    if g.n_edges == 0:
        return z
    indptr, indices, weights = g.csr
    return _polish(z, indptr, indices, weights)


def multistart_local_search(g: Graph, restarts: int = 50, seed: int = 0) -> tuple[np.ndarray, float]:
    """Best 1-flip local optimum over ``restarts`` seeded random starts.

    Ties keep the lowest restart index.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    rng = stream(seed, "multistart")
    best_z, best_val = None, -math.inf
    for _ in range(restarts):
        start = np.where(rng.random(g.n_nodes) < 0.5, 1, -1).astype(np.int8)
        z = local_search_polish(g, start)
        val = cut_value(g, z)
        if val > best_val:
            best_z, best_val = z, val
    return best_z, best_val


def asymptotic_optimum(n: int, d: float) -> float:
    """Large-``d`` optimal cut estimate ``(d/4 + P*sqrt(d/4)) * n``."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    return (d / 4 + PARISI_CONSTANT * math.sqrt(d / 4)) * n
