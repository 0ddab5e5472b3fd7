"""Weighted undirected graphs, edge-list I/O, generators and cut evaluation.

Assignments are plain ``int8`` numpy vectors with entries in ``{+1, -1}``;
:func:`check_assignment` enforces that contract at module boundaries.
"""

from __future__ import annotations

import io
import math
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from ._rng import child_seed, stream

__all__ = [
    "Graph",
    "GraphFormatError",
    "check_assignment",
    "cut_value",
    "generate",
    "induced_subgraphs",
    "inter_block_mask",
    "parse_edge_list",
    "read_edge_list",
    "total_weight",
    "write_edge_list",
]


class GraphFormatError(ValueError):
    """Malformed edge-list input; ``lineno`` is 1-based (0 if not line-specific)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


class Graph:
    """Immutable weighted undirected simple graph.

    Edges are stored once each as parallel arrays ``u``, ``v``, ``w`` with
    ``u < v``. Weights may be negative (coarse merge problems use signed
    weights); generators and parsers of base instances only emit
    nonnegative ones.
    """

    __slots__ = ("n_nodes", "u", "v", "w", "_csr")

    def __init__(self, n_nodes: int, u, v, w=None):
        n_nodes = int(n_nodes)
        if n_nodes < 0:
            raise ValueError("n_nodes must be nonnegative")
        u = np.asarray(u, dtype=np.int64).reshape(-1)
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        if w is None:
            w = np.ones(u.shape[0], dtype=np.float64)
        w = np.asarray(w, dtype=np.float64).reshape(-1)
        if not (u.shape == v.shape == w.shape):
            raise ValueError("u, v, w must have equal length")
        if u.size:
            if u.min() < 0 or v.min() < 0 or u.max() >= n_nodes or v.max() >= n_nodes:
                raise ValueError("edge endpoint out of range")
            if np.any(u == v):
                raise ValueError("self-loops are not allowed")
            if not np.all(np.isfinite(w)):
                raise ValueError("edge weights must be finite")
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        if lo.size and np.unique(lo * n_nodes + hi).size != lo.size:
            raise ValueError("duplicate edge")
        for arr in (lo, hi, w):
            arr.setflags(write=False)
        self.n_nodes = n_nodes
        self.u, self.v, self.w = lo, hi, w
        self._csr = None

    @classmethod
    def from_edges(cls, n_nodes: int, edges: Iterable[Sequence]) -> "Graph":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples (0-indexed)."""
        us, vs, ws = [], [], []
        for e in edges:
            us.append(e[0])
            vs.append(e[1])
            ws.append(e[2] if len(e) > 2 else 1.0)
        return cls(n_nodes, us, vs, ws)

    @classmethod
    def from_networkx(cls, G: nx.Graph, weight: str = "weight") -> "Graph":
        nodes = list(G.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        edges = [(index[a], index[b], d.get(weight, 1.0)) for a, b, d in G.edges(data=True)]
        return cls.from_edges(len(nodes), edges)

    @classmethod
    def from_adjacency(cls, A) -> "Graph":
        """Build from a symmetric (dense or scipy sparse) weight matrix."""
        import scipy.sparse as sp

        if sp.issparse(A):
            A = sp.triu(sp.coo_matrix(A), k=1)
            return cls(A.shape[0], A.row, A.col, A.data)
        A = np.asarray(A, dtype=np.float64)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.allclose(A, A.T):
            raise ValueError("adjacency matrix must be symmetric")
        iu, ju = np.nonzero(np.triu(A, k=1))
        return cls(A.shape[0], iu, ju, A[iu, ju])

    @property
    def n_edges(self) -> int:
        return int(self.u.shape[0])

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(a), int(b), float(c)) for a, b, c in zip(self.u, self.v, self.w)]

    @property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, indices, weights)`` of the symmetric adjacency."""
        if self._csr is None:
            n = self.n_nodes
            rows = np.concatenate([self.u, self.v])
            cols = np.concatenate([self.v, self.u])
            data = np.concatenate([self.w, self.w])
            order = np.lexsort((cols, rows))
            indptr = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
            self._csr = (indptr, cols[order].copy(), data[order].copy())
        return self._csr

    @property
    def adjacency(self) -> list[list[tuple[int, float]]]:
        indptr, idx, data = self.csr
        return [
            [(int(idx[k]), float(data[k])) for k in range(indptr[i], indptr[i + 1])]
            for i in range(self.n_nodes)
        ]

    def degrees(self) -> np.ndarray:
        return np.bincount(np.concatenate([self.u, self.v]), minlength=self.n_nodes)

    def weighted_degrees(self) -> np.ndarray:
        return np.bincount(
            np.concatenate([self.u, self.v]),
            weights=np.concatenate([self.w, self.w]),
            minlength=self.n_nodes,
        )

    def to_dense(self) -> np.ndarray:
        A = np.zeros((self.n_nodes, self.n_nodes))
        A[self.u, self.v] = self.w
        A[self.v, self.u] = self.w
        return A

    def canonical(self) -> tuple:
        order = np.lexsort((self.v, self.u))
        return (
            self.n_nodes,
            tuple(self.u[order].tolist()),
            tuple(self.v[order].tolist()),
            tuple(self.w[order].tolist()),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __repr__(self) -> str:
        return f"Graph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"


def check_assignment(g: Graph, a) -> np.ndarray:
    """Validate a +-1 assignment for ``g`` and return it as an int8 array."""
    a = np.asarray(a)
    if a.ndim != 1 or a.shape[0] != g.n_nodes:
        raise ValueError(f"assignment length {a.shape} does not match {g.n_nodes} nodes")
    if not np.all((a == 1) | (a == -1)):
        raise ValueError("assignment entries must be +1 or -1")
    return a.astype(np.int8, copy=False)


def cut_value(g: Graph, a) -> float:
    """Total weight of edges whose endpoints receive different signs."""
    a = check_assignment(g, a)
    return float(np.sum(g.w[a[g.u] != a[g.v]]))


def total_weight(g: Graph) -> float:
    return float(np.sum(g.w))


# ---------------------------------------------------------------- partition views


def _block_of(g: Graph, p) -> tuple[np.ndarray, int]:
    block_of = np.asarray(getattr(p, "block_of", p), dtype=np.int64)
    if block_of.shape != (g.n_nodes,):
        raise ValueError("partition does not match graph size")
    n_blocks = int(getattr(p, "n_blocks", block_of.max() + 1 if block_of.size else 0))
    return block_of, n_blocks


def induced_subgraphs(g: Graph, p) -> list[tuple[Graph, np.ndarray]]:
    """One ``(subgraph, node_map)`` per block; ``node_map[local] = global``."""
    block_of, n_blocks = _block_of(g, p)
    local = np.empty(g.n_nodes, dtype=np.int64)
    maps = []
    for b in range(n_blocks):
        nodes = np.flatnonzero(block_of == b)
        local[nodes] = np.arange(nodes.size)
        maps.append(nodes)
    bu, bv = block_of[g.u], block_of[g.v]
    inner = bu == bv
    out = []
    for b in range(n_blocks):
        sel = inner & (bu == b)
        out.append((Graph(maps[b].size, local[g.u[sel]], local[g.v[sel]], g.w[sel]), maps[b]))
    return out


def inter_block_mask(g: Graph, p) -> np.ndarray:
    """Boolean mask over ``g``'s edges selecting those that cross blocks."""
    block_of, _ = _block_of(g, p)
    return block_of[g.u] != block_of[g.v]


# ---------------------------------------------------------------- edge-list I/O


def parse_edge_list(text) -> Graph:
    """Parse the 1-indexed ``N M`` / ``u v [w]`` edge-list format."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    header = None
    us, vs, ws = [], [], []
    seen = set()
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            if len(fields) != 2:
                raise GraphFormatError("header must be 'N M'", lineno)
            try:
                n, m = int(fields[0]), int(fields[1])
            except ValueError:
                raise GraphFormatError("header must be two integers", lineno) from None
            if n < 0 or m < 0:
                raise GraphFormatError("negative N or M", lineno)
            header = (n, m)
            continue
        if len(fields) not in (2, 3):
            raise GraphFormatError("edge line must be 'u v' or 'u v w'", lineno)
        try:
            a, b = int(fields[0]), int(fields[1])
            w = float(fields[2]) if len(fields) == 3 else 1.0
        except ValueError:
            raise GraphFormatError("non-numeric field", lineno) from None
        n = header[0]
        if not (1 <= a <= n and 1 <= b <= n):
            raise GraphFormatError(f"node index out of range [1,{n}]", lineno)
        if a == b:
            raise GraphFormatError("self-loop", lineno)
        if not math.isfinite(w):
            raise GraphFormatError("non-finite weight", lineno)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key[0]} {key[1]}", lineno)
        seen.add(key)
        if len(us) == header[1]:
            raise GraphFormatError(f"more than M={header[1]} edges", lineno)
        us.append(a - 1)
        vs.append(b - 1)
        ws.append(w)
    if header is None:
        raise GraphFormatError("missing 'N M' header")
    if len(us) != header[1]:
        raise GraphFormatError(f"expected {header[1]} edges, found {len(us)}")
    return Graph(header[0], us, vs, ws)


def _fmt_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def write_edge_list(g: Graph) -> str:
    lines = [f"{g.n_nodes} {g.n_edges}"]
    lines.extend(f"{a + 1} {b + 1} {_fmt_weight(c)}" for a, b, c in zip(g.u, g.v, g.w))
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    with open(path, "rb") as fh:
        return parse_edge_list(fh.read())


# ---------------------------------------------------------------- generators


def generate(
    kind: str,
    n: int,
    d: int,
    weighted: bool = False,
    seed: int = 0,
    weight_low: int = 0,
) -> Graph:
    """Random ``d``-regular or Erdos-Renyi (mean degree ``d``) graph.

    Weighted instances draw integer weights uniformly from
    ``{weight_low, ..., 5}``; zero-weight edges are kept.
    """
    if n < 1 or d < 0:
        raise ValueError("n must be >= 1 and d >= 0")
    if d >= n and not (n == 1 and d == 0):
        raise ValueError(f"degree d={d} must be < n={n}")
    if kind == "regular":
        if (n * d) % 2:
            raise ValueError(f"n*d must be even for a regular graph (n={n}, d={d})")
        G = nx.random_regular_graph(d, n, seed=child_seed(seed, "graph-gen", "regular") % 2**32)
        u = np.array([e[0] for e in G.edges()], dtype=np.int64)
        v = np.array([e[1] for e in G.edges()], dtype=np.int64)
        order = np.lexsort((np.maximum(u, v), np.minimum(u, v)))
        u, v = np.minimum(u, v)[order], np.maximum(u, v)[order]
    elif kind == "erdos_renyi":
        rng = stream(seed, "graph-gen", "erdos_renyi")
        p_edge = d / (n - 1) if n > 1 else 0.0
        iu, ju = np.triu_indices(n, k=1)
        keep = rng.random(iu.size) < p_edge
        u, v = iu[keep], ju[keep]
    else:
        raise ValueError(f"unknown graph kind {kind!r}")
    if weighted:
        w = stream(seed, "graph-gen", "weights").integers(weight_low, 6, size=u.size).astype(np.float64)
    else:
        w = np.ones(u.size)
    return Graph(n, u, v, w)
