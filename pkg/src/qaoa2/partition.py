"""Splitting a graph into blocks no larger than the qubit budget."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from ._rng import stream
from .graph import Graph, total_weight

__all__ = ["Partition", "greedy_modularity_partition", "modularity", "random_partition"]


@dataclass(frozen=True, eq=False)
class Partition:
    """Node -> block labelling with dense labels and a block-size cap."""

    block_of: np.ndarray
    n_blocks: int
    cap: int

    def __post_init__(self):
        block_of = np.asarray(self.block_of, dtype=np.int64)
        if block_of.ndim != 1:
            raise ValueError("block_of must be a vector")
        if self.cap < 1:
            raise ValueError("cap must be >= 1")
        sizes = np.bincount(block_of, minlength=self.n_blocks) if block_of.size else np.zeros(0, int)
        if block_of.size and (block_of.min() < 0 or sizes.size != self.n_blocks or np.any(sizes == 0)):
            raise ValueError("block labels must be dense in [0, n_blocks)")
        if np.any(sizes > self.cap):
            raise ValueError(f"block of size {sizes.max()} exceeds cap {self.cap}")
        block_of.setflags(write=False)
        object.__setattr__(self, "block_of", block_of)

    @classmethod
    def from_labels(cls, labels, cap: int | None = None) -> "Partition":
        """Relabel arbitrary block labels densely in order of first appearance."""
        labels = np.asarray(labels)
        _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
        rank = np.empty(first.size, dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(first.size)
        block_of = rank[inverse.reshape(-1)]
        sizes = np.bincount(block_of) if block_of.size else np.zeros(1, int)
        return cls(block_of, int(first.size), int(cap if cap is not None else max(1, sizes.max())))

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.block_of, minlength=self.n_blocks)

    def blocks(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.block_of == b) for b in range(self.n_blocks)]


def random_partition(g: Graph, cap: int, seed: int = 0) -> Partition:
    """Shuffle the nodes and cut the order into consecutive chunks of ``cap``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    order = stream(seed, "partition").permutation(g.n_nodes)
    block_of = np.empty(g.n_nodes, dtype=np.int64)
    block_of[order] = np.arange(g.n_nodes) // cap
    return Partition(block_of, -(-g.n_nodes // cap), cap)


def modularity(g: Graph, p) -> float:
    """Weighted Newman modularity of the labelling ``p`` (Partition or labels)."""
    labels = np.asarray(getattr(p, "block_of", p), dtype=np.int64)
    if labels.shape != (g.n_nodes,):
        raise ValueError("partition does not match graph size")
    m = total_weight(g)
    if m == 0:
        raise ValueError("modularity is undefined for a graph with zero total weight")
    same = labels[g.u] == labels[g.v]
    internal = np.bincount(labels[g.u[same]], weights=g.w[same], minlength=labels.max() + 1)
    k = np.bincount(labels, weights=g.weighted_degrees(), minlength=labels.max() + 1)
    return float(np.sum(internal / m - (k / (2 * m)) ** 2))


def greedy_modularity_partition(g: Graph, cap: int) -> Partition:
    """Agglomerative greedy modularity maximisation with a community-size cap.

    Starts from singletons and repeatedly merges the admissible pair with the
    largest gain, where a merge is admissible if the joined community has at
    most ``cap`` nodes. Ties go to the lexicographically smallest pair of
    community labels; the merged community keeps the smaller label.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n = g.n_nodes
    m = total_weight(g)
    if n == 0 or m <= 0 or cap == 1:
        return Partition(np.arange(n), n, cap)
    if np.any(g.w < 0):
        raise ValueError("greedy modularity partition requires nonnegative weights")

    # between[c][d]: total edge weight between communities c and d
    between: list[dict[int, float]] = [dict() for _ in range(n)]
    for a, b, w in zip(g.u.tolist(), g.v.tolist(), g.w.tolist()):
        if w > 0:
            between[a][b] = between[a].get(b, 0.0) + w
            between[b][a] = between[b].get(a, 0.0) + w
    strength = g.weighted_degrees().tolist()
    size = [1] * n
    alive = [True] * n
    version = [0] * n
    members: list[list[int]] = [[i] for i in range(n)]
    two_m2 = 2.0 * m * m

    def gain(c: int, d: int) -> float:
        return between[c][d] / m - strength[c] * strength[d] / two_m2

    heap = []
    for c in range(n):
        for d in between[c]:
            if c < d and size[c] + size[d] <= cap:
                heap.append((-gain(c, d), c, d, 0, 0))
    heapq.heapify(heap)

    while heap:
        neg, c, d, vc, vd = heapq.heappop(heap)
        if not (alive[c] and alive[d]) or version[c] != vc or version[d] != vd:
            continue
        if -neg <= 0:
            break
        if size[c] + size[d] > cap:
            continue
        # merge d into c (c < d)
        alive[d] = False
        size[c] += size[d]
        strength[c] += strength[d]
        members[c].extend(members[d])
        version[c] += 1
        nbrs = between[d]
        for e, w in nbrs.items():
            del between[e][d]
            if e == c:
                continue
            between[c][e] = between[c].get(e, 0.0) + w
            between[e][c] = between[c][e]
        between[c].pop(d, None)
        between[d] = {}
        for e in between[c]:
            if size[c] + size[e] <= cap:
                lo, hi = (c, e) if c < e else (e, c)
                heapq.heappush(heap, (-gain(lo, hi), lo, hi, version[lo], version[hi]))

    labels = np.empty(n, dtype=np.int64)
    for c in range(n):
        if alive[c]:
            labels[members[c]] = c
    return Partition.from_labels(labels, cap)
