"""scikit-learn style estimators.

MaxCut is a transductive two-way clustering of a weighted graph, so the
estimators follow the ``ClusterMixin`` convention: ``fit(X)`` takes a graph
(or a symmetric weight matrix) and sets ``labels_`` in ``{0, 1}``;
``fit_predict`` comes from the mixin.
"""

from __future__ import annotations

import networkx as nx
import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from .graph import Graph, check_assignment, cut_value
from .oracle import brute_force, multistart_local_search
from .qaoa import QaoaConfig, qaoa_solve
from .solver import SolverChoice, solve

__all__ = [
    "BruteForceMaxCut",
    "LocalSearchMaxCut",
    "QAOA2MaxCut",
    "QAOAMaxCut",
    "check_graph",
    "check_seed",
]


def check_graph(X) -> Graph:
    """Coerce ``X`` into a :class:`Graph`.

    Accepts a ``Graph``, a networkx graph, a scipy sparse matrix, or a dense
    symmetric array-like of edge weights (zero means no edge).
    """
    if isinstance(X, Graph):
        return X
    if isinstance(X, nx.Graph):
        if X.is_directed() or X.is_multigraph():
            raise ValueError("only simple undirected graphs are supported")
        return Graph.from_networkx(X)
    if sp.issparse(X):
        if X.shape[0] != X.shape[1] or abs(X - X.T).max() > 1e-12:
            raise ValueError("sparse adjacency must be square and symmetric")
        return Graph.from_adjacency(X)
    return Graph.from_adjacency(np.asarray(X, dtype=np.float64))


def check_seed(random_state) -> int:
    if random_state is None:
        return int(np.random.SeedSequence().generate_state(1, np.uint64)[0] >> 1)
    if isinstance(random_state, (int, np.integer)):
        return int(random_state)
    raise ValueError(f"random_state must be an int or None, got {random_state!r}")


class _MaxCutMixin(ClusterMixin):
    def _set_result(self, g: Graph, z) -> None:
        z = check_assignment(g, z)
        self.assignment_ = z
        self.labels_ = (z < 0).astype(np.int64)
        self.cut_ = cut_value(g, z)
        self.n_features_in_ = g.n_nodes

    def score(self, X, y=None) -> float:
        """Cut value of the fitted labelling on ``X``."""
        check_is_fitted(self, "assignment_")
        return cut_value(check_graph(X), self.assignment_)


class QAOA2MaxCut(_MaxCutMixin, BaseEstimator):
    """Hierarchical MaxCut with a qubit budget per subproblem.

    Parameters mirror :func:`qaoa2.solver.solve` and
    :class:`qaoa2.qaoa.QaoaConfig`; after ``fit`` the full
    :class:`~qaoa2.solver.SolveReport` is in ``report_``.
    """

    def __init__(
        self,
        budget=10,
        partition="random",
        solver="qaoa",
        p=1,
        iterations=20,
        learning_rate=0.01,
        shots=1000,
        sample_rounds=1000,
        init_state="uniform",
        expectation_mode="shots",
        restarts=10,
        merge="optimized",
        final_polish=True,
        n_jobs=1,
        random_state=0,
    ):
        self.budget = budget
        self.partition = partition
        self.solver = solver
        self.p = p
        self.iterations = iterations
        self.learning_rate = learning_rate
        self.shots = shots
        self.sample_rounds = sample_rounds
        self.init_state = init_state
        self.expectation_mode = expectation_mode
        self.restarts = restarts
        self.merge = merge
        self.final_polish = final_polish
        self.n_jobs = n_jobs
        self.random_state = random_state

    def _qaoa_config(self, seed: int) -> QaoaConfig:
        return QaoaConfig(
            p=self.p,
            iterations=self.iterations,
            learning_rate=self.learning_rate,
            shots=self.shots,
            sample_rounds=self.sample_rounds,
            init_state=self.init_state,
            expectation_mode=self.expectation_mode,
            seed=seed,
        )

    def fit(self, X, y=None):
        g = check_graph(X)
        seed = check_seed(self.random_state)
        choice = SolverChoice(self.solver, self._qaoa_config(seed), self.restarts)
        self.report_ = solve(
            g,
            self.budget,
            self.partition,
            choice,
            seed,
            merge_mode=self.merge,
            final_polish=self.final_polish,
            n_jobs=self.n_jobs,
        )
        self._set_result(g, self.report_.assignment)
        return self


class QAOAMaxCut(QAOA2MaxCut):
    """Plain (non-hierarchical) simulated QAOA; the graph must fit in memory."""

    def __init__(
        self,
        p=1,
        iterations=20,
        learning_rate=0.01,
        shots=1000,
        sample_rounds=1000,
        init_state="uniform",
        expectation_mode="shots",
        polish=True,
        random_state=0,
    ):
        self.p = p
        self.iterations = iterations
        self.learning_rate = learning_rate
        self.shots = shots
        self.sample_rounds = sample_rounds
        self.init_state = init_state
        self.expectation_mode = expectation_mode
        self.polish = polish
        self.random_state = random_state

    def fit(self, X, y=None):
        g = check_graph(X)
        cfg = self._qaoa_config(check_seed(self.random_state))
        self._set_result(g, qaoa_solve(g, cfg, polish=self.polish))
        return self


class LocalSearchMaxCut(_MaxCutMixin, BaseEstimator):
    """Best of ``restarts`` random-start 1-flip local searches."""

    def __init__(self, restarts=50, random_state=0):
        self.restarts = restarts
        self.random_state = random_state

    def fit(self, X, y=None):
        g = check_graph(X)
        z, _ = multistart_local_search(g, self.restarts, check_seed(self.random_state))
        self._set_result(g, z)
        return self


class BruteForceMaxCut(_MaxCutMixin, BaseEstimator):
    """Exact MaxCut by enumeration (at most 22 nodes)."""

    def fit(self, X, y=None):
        g = check_graph(X)
        self._set_result(g, brute_force(g)[0])
        return self
