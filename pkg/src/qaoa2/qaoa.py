"""Dense statevector QAOA for MaxCut.

Basis index ``b`` encodes qubit ``q`` in bit ``q``; bit value 0 is spin +1
and bit value 1 is spin -1. The cost operator ``sum w Z_i Z_j`` is diagonal,
so it is kept as a real energy vector over the ``2**n`` basis states.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numba
import numpy as np

from ._rng import stream
from .graph import Graph, check_assignment
from .oracle import local_search_polish

__all__ = [
    "MAX_QUBITS",
    "CostHamiltonian",
    "QaoaConfig",
    "QaoaParams",
    "apply_ansatz",
    "build_cost",
    "expectation",
    "gradient",
    "optimize",
    "prepare_initial",
    "qaoa_solve",
    "sample_best",
]

MAX_QUBITS = 20
_QUARTER_PI = np.pi / 4


@dataclass(frozen=True)
class QaoaConfig:
    p: int = 1
    iterations: int = 20
    learning_rate: float = 0.01
    shots: int = 1000
    sample_rounds: int = 1000
    init_state: str = "uniform"
    expectation_mode: str = "shots"
    seed: int = 0

    def __post_init__(self):
        for name in ("p", "iterations", "shots", "sample_rounds"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if self.init_state not in ("uniform", "ghz"):
            raise ValueError(f"unknown init_state {self.init_state!r}")
        if self.expectation_mode not in ("exact", "shots"):
            raise ValueError(f"unknown expectation_mode {self.expectation_mode!r}")


@dataclass(frozen=True)
class QaoaParams:
    gammas: np.ndarray
    betas: np.ndarray

    def __post_init__(self):
        g = np.atleast_1d(np.asarray(self.gammas, dtype=np.float64))
        b = np.atleast_1d(np.asarray(self.betas, dtype=np.float64))
        if g.ndim != 1 or g.shape != b.shape or g.size < 1:
            raise ValueError("gammas and betas must be equal-length vectors, p >= 1")
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "betas", b)

    @property
    def p(self) -> int:
        return self.gammas.size

    def wrapped(self) -> "QaoaParams":
        """Angles reduced into (0, 2*pi]."""
        two_pi = 2 * np.pi
        wrap = lambda x: two_pi - np.mod(-x, two_pi)  # noqa: E731
        return QaoaParams(wrap(self.gammas), wrap(self.betas))


@dataclass(eq=False)
class CostHamiltonian:
    """``sum_t w_t Z_{i_t} Z_{j_t}`` on ``n_qubits`` qubits."""

    n_qubits: int
    i: np.ndarray
    j: np.ndarray
    w: np.ndarray

    @property
    def terms(self) -> list[tuple[int, int, float]]:
        return [(int(a), int(b), float(c)) for a, b, c in zip(self.i, self.j, self.w)]

    @cached_property
    def spins(self) -> np.ndarray:
        """``(2**n, n)`` int8 matrix of +-1 spins for every basis state."""
        idx = np.arange(1 << self.n_qubits, dtype=np.int64)
        bits = (idx[:, None] >> np.arange(self.n_qubits)) & 1
        return (1 - 2 * bits).astype(np.int8)

    @cached_property
    def diagonal(self) -> np.ndarray:
        """Energy ``E(z) = sum w z_i z_j`` of every basis state."""
        E = np.zeros(1 << self.n_qubits)
        z = self.spins
        for a, b, c in zip(self.i, self.j, self.w):
            E += c * (z[:, a] * z[:, b])
        return E


def build_cost(g: Graph, max_qubits: int = MAX_QUBITS) -> CostHamiltonian:
    if g.n_nodes > max_qubits:
        raise ValueError(f"{g.n_nodes} qubits exceeds simulator limit of {max_qubits}")
    return CostHamiltonian(g.n_nodes, g.u.copy(), g.v.copy(), g.w.copy())


def prepare_initial(n: int, kind: str = "uniform") -> np.ndarray:
    if n < 1:
        raise ValueError("need at least one qubit")
    dim = 1 << n
    if kind == "uniform":
        return np.full(dim, 2.0 ** (-n / 2), dtype=np.complex128)
    if kind == "ghz":
        sv = np.zeros(dim, dtype=np.complex128)
        sv[0] = sv[-1] = 1 / np.sqrt(2)
        return sv
    raise ValueError(f"unknown initial state {kind!r}")


# ---------------------------------------------------------------- evolution


@numba.njit(cache=True)
def _mix_kernel(states, cos, sin):
    B, dim = states.shape
    n = cos.shape[1]
    for b in range(B):
        for q in range(n):
            c = cos[b, q]
            s = -1j * sin[b, q]
            if s == 0 and c == 1:
                continue
            step = 1 << q
            for base in range(0, dim, 2 * step):
                for k in range(base, base + step):
                    a0 = states[b, k]
                    a1 = states[b, k + step]
                    states[b, k] = c * a0 + s * a1
                    states[b, k + step] = s * a0 + c * a1


def _mix(states: np.ndarray, n: int, angles) -> np.ndarray:
    """Apply ``prod_q exp(-i a_q X_q)`` in place to a ``(B, 2**n)`` batch.

    ``angles`` is a scalar or a ``(B, n)`` array of per-qubit angles.
    """
    angles = np.broadcast_to(np.asarray(angles, dtype=np.float64), (states.shape[0], n))
    _mix_kernel(states, np.cos(angles), np.sin(angles))
    return states


def _layer(states, n, energy, gamma, beta):
    states *= np.exp(-1j * gamma * energy)
    return _mix(states, n, beta)


def apply_ansatz(h: CostHamiltonian, params: QaoaParams, init: np.ndarray) -> np.ndarray:
    """``U_B(b_p) U_C(g_p) ... U_B(b_1) U_C(g_1) |init>``."""
    init = np.asarray(init, dtype=np.complex128)
    if init.shape != (1 << h.n_qubits,):
        raise ValueError("initial state dimension does not match the Hamiltonian")
    states = init.copy()[None, :]
    for gamma, beta in zip(params.gammas, params.betas):
        _layer(states, h.n_qubits, h.diagonal, gamma, beta)
    return states[0]


def _estimate(probs: np.ndarray, energy: np.ndarray, mode: str, shots: int, rng) -> np.ndarray:
    """Per-row expectation of ``energy`` under a ``(B, dim)`` probability batch."""
    if mode == "exact":
        return probs @ energy
    cdf = np.cumsum(probs, axis=1)
    cdf /= cdf[:, -1:]
    out = np.empty(probs.shape[0])
    last = probs.shape[1] - 1
    for k in range(probs.shape[0]):
        idx = np.searchsorted(cdf[k], rng.random(shots), side="right")
        out[k] = energy[np.minimum(idx, last)].mean()
    return out


def expectation(h: CostHamiltonian, sv: np.ndarray, mode: str = "exact", shots: int = 1000, seed=0) -> float:
    """``<sv|H_C|sv>`` exactly, or as the mean energy of ``shots`` measurements."""
    sv = np.asarray(sv)
    if sv.shape != (1 << h.n_qubits,):
        raise ValueError("statevector dimension does not match the Hamiltonian")
    rng = seed if isinstance(seed, np.random.Generator) else stream(seed, "shots")
    probs = (np.abs(sv) ** 2)[None, :]
    return float(_estimate(probs, h.diagonal, mode, shots, rng)[0])


def gradient(h: CostHamiltonian, params: QaoaParams, cfg: QaoaConfig, rng=None):
    """Parameter-shift gradient of ``<H_C>`` with respect to gammas and betas.

    Each ``exp(-i gamma w Z_i Z_j)`` and each ``exp(-i beta X_q)`` is treated
    as its own rotation and shifted by ``+-pi/4`` in its exponent; the
    per-rotation differences are summed with chain-rule factors ``w`` and 1.
    All shifted circuits of one layer are evolved together as a batch, and in
    shots mode each one is estimated from its own ``cfg.shots`` samples.
    """
    if rng is None:
        rng = stream(cfg.seed, "shots")
    n, p = h.n_qubits, params.p
    energy = h.diagonal
    z = h.spins
    mode, shots = cfg.expectation_mode, cfg.shots
    d_gamma = np.zeros(p)
    d_beta = np.zeros(p)
    active = np.flatnonzero(h.w != 0)

    def finish(states, k):
        for g2, b2 in zip(params.gammas[k + 1:], params.betas[k + 1:]):
            _layer(states, n, energy, g2, b2)
        return _estimate(np.abs(states) ** 2, energy, mode, shots, rng)

    prefix = prepare_initial(n, cfg.init_state)[None, :].copy()
    for k in range(p):
        phased = prefix * np.exp(-1j * params.gammas[k] * energy)
        mixed = _mix(phased.copy(), n, params.betas[k])

        if active.size:
            # exp(-+i pi/4 ZZ) = (1 -+ i ZZ)/sqrt(2); the mixer is linear, so only
            # the ZZ-weighted branch needs its own evolution
            zz = np.stack([z[:, h.i[t]] * z[:, h.j[t]] for t in active]).astype(np.float64)
            branch = _mix(phased * zz, n, params.betas[k])
            plus = (mixed - 1j * branch) / np.sqrt(2)
            minus = (mixed + 1j * branch) / np.sqrt(2)
            vals = finish(np.concatenate([plus, minus]), k)
            T = active.size
            d_gamma[k] = np.dot(h.w[active], vals[:T] - vals[T:])

        # rotations on one qubit add, so shifting beta on qubit q is one extra
        # exp(-+i pi/4 X_q) applied after the unshifted mixer
        angles = np.zeros((2 * n, n))
        angles[np.arange(n), np.arange(n)] = _QUARTER_PI
        angles[n + np.arange(n), np.arange(n)] = -_QUARTER_PI
        batch = _mix(np.repeat(mixed, 2 * n, axis=0), n, angles)
        vals = finish(batch, k)
        d_beta[k] = np.sum(vals[:n] - vals[n:])

        prefix = mixed
    return d_gamma, d_beta


def _init_params(cfg: QaoaConfig) -> QaoaParams:
    rng = stream(cfg.seed, "init-params")
    two_pi = 2 * np.pi
    # (0, 2pi] rather than [0, 2pi)
    return QaoaParams(two_pi - two_pi * rng.random(cfg.p), two_pi - two_pi * rng.random(cfg.p))


def optimize(g: Graph, cfg: QaoaConfig) -> tuple[QaoaParams, np.ndarray]:
    """Vanilla gradient descent on ``<H_C>`` from a seeded random start.

    Returns the final parameters and the exact objective recorded before each
    step and after the last one (length ``iterations + 1``).
    """
    h = build_cost(g)
    init = prepare_initial(h.n_qubits, cfg.init_state)
    params = _init_params(cfg)
    rng = stream(cfg.seed, "shots")
    trace = []
    for _ in range(cfg.iterations):
        trace.append(expectation(h, apply_ansatz(h, params, init), "exact"))
        dg, db = gradient(h, params, cfg, rng)
        params = QaoaParams(params.gammas - cfg.learning_rate * dg, params.betas - cfg.learning_rate * db)
    trace.append(expectation(h, apply_ansatz(h, params, init), "exact"))
    return params, np.asarray(trace)


def _index_to_spins(idx: int, n: int) -> np.ndarray:
    bits = (idx >> np.arange(n)) & 1
    return (1 - 2 * bits).astype(np.int8)


def sample_best(g: Graph, params: QaoaParams, cfg: QaoaConfig) -> np.ndarray:
    """Measure ``sample_rounds`` bitstrings and keep the lowest-energy one."""
    h = build_cost(g)
    sv = apply_ansatz(h, params, prepare_initial(h.n_qubits, cfg.init_state))
    probs = np.abs(sv) ** 2
    rng = stream(cfg.seed, "samples")
    draws = rng.choice(probs.size, size=cfg.sample_rounds, p=probs / probs.sum())
    best = draws[np.argmin(h.diagonal[draws])]
    return _index_to_spins(int(best), h.n_qubits)


def qaoa_solve(g: Graph, cfg: QaoaConfig, polish: bool = True) -> np.ndarray:
    """Train, sample, and (by default) 1-flip polish an assignment for ``g``."""
    if g.n_nodes > MAX_QUBITS:
        raise ValueError(f"{g.n_nodes} qubits exceeds simulator limit of {MAX_QUBITS}")
    if g.n_nodes == 0:
        return np.ones(0, dtype=np.int8)
    if g.n_edges == 0:
        return np.ones(g.n_nodes, dtype=np.int8)
    params, _ = optimize(g, cfg)
    z = sample_best(g, params, cfg)
    if polish:
        z = local_search_polish(g, z)
    return check_assignment(g, z)
