"""
Exact stationary analysis of the M/Cox2/c queue as a quasi-birth-death process.

State (n, j): n customers present, j of the min(n, c) busy servers in stage 2.
Levels n >= c + 1 share the same blocks, so the tail is matrix-geometric:
pi_{n+1} = pi_n R for n >= c. The boundary levels 0..c are solved directly.

A brute-force truncated-chain solver, `truncated_oracle`, gives the same
measures without using R and serves as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (OracleInfeasibleError, ParameterError, SolverError,
                     UndefinedConditionalError)
from .model import ModelSpec

__all__ = [
    "GeneratorBlocks", "StationarySolution", "PerfMeasures", "DepartureTimeVector",
    "level_blocks", "build_generator", "solve_R", "stationary", "measures",
    "departure_times", "min_residual_exact", "truncated_oracle", "solve",
]


@dataclass(frozen=True)
class GeneratorBlocks:
    """
    Transition-rate blocks of the QBD.

    ``up[n]``, ``local[n]`` and ``down[n]`` hold the level-n blocks for the
    boundary levels n = 0..c (``down[0]`` is None). ``A0``, ``A1``, ``A2``
    are the level-independent blocks of levels n >= c + 1.
    """

    lam: float
    c: int
    up: list
    local: list
    down: list
    A0: np.ndarray
    A1: np.ndarray
    A2: np.ndarray


@dataclass(frozen=True)
class StationarySolution:
    model: ModelSpec
    boundary: list  # pi_0 .. pi_c
    R: np.ndarray

    @property
    def tail_vector(self) -> np.ndarray:
        """Unnormalised phase distribution over levels n >= c: pi_c (I - R)^-1."""
        c = self.model.c
        return np.linalg.solve((np.eye(c + 1) - self.R).T, self.boundary[c])

    def level(self, n: int) -> np.ndarray:
        c = self.model.c
        if n <= c:
            return self.boundary[n]
        return self.boundary[c] @ np.linalg.matrix_power(self.R, n - c)

    def stage2_occupancy(self) -> float:
        """Mean number of busy servers in stage 2."""
        c = self.model.c
        total = sum(np.arange(n + 1) @ self.boundary[n] for n in range(c))
        return float(total + np.arange(c + 1) @ self.tail_vector)

    def busy_servers(self) -> float:
        c = self.model.c
        total = sum(n * self.boundary[n].sum() for n in range(c))
        return float(total + c * self.tail_vector.sum())


@dataclass(frozen=True)
class PerfMeasures:
    rho: float
    pi_wait: float
    eq: float
    eqw: float
    ew: float
    min_tr: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("rho", "pi_wait", "ew", "eq", "eqw", "min_tr")}


@dataclass(frozen=True)
class DepartureTimeVector:
    """T[j]: expected time to the first service completion with all c
    servers busy and j of them in stage 2."""

    T: np.ndarray


def level_blocks(model: ModelSpec, n: int):
    """Return ``(up, local, down)`` blocks of level `n`; ``down`` is None at n = 0."""
    c, lam = model.c, model.lam
    mu1, mu2, p = model.service.mu1, model.service.mu2, model.service.p_cont
    if p == 0:
        mu2 = mu1  # phases j > 0 are unreachable; any positive rate will do
    busy = min(n, c)
    d = busy + 1
    d_up = min(n + 1, c) + 1
    d_down = min(n - 1, c) + 1 if n > 0 else 0

    up = np.zeros((d, d_up))
    local = np.zeros((d, d))
    down = np.zeros((d, d_down)) if n > 0 else None
    for j in range(d):
        stage1 = (busy - j) * mu1
        up[j, j] = lam
        if j + 1 < d:
            local[j, j + 1] = stage1 * p
        if n > 0:
            if j < d_down:
                down[j, j] = stage1 * (1.0 - p)
            if j > 0:
                down[j, j - 1] = j * mu2
        local[j, j] = -(lam + stage1 + j * mu2)
    return up, local, down


def build_generator(model: ModelSpec) -> GeneratorBlocks:
    c = model.c
    ups, locals_, downs = [], [], []
    for n in range(c + 1):
        u, l, d = level_blocks(model, n)
        ups.append(u)
        locals_.append(l)
        downs.append(d)
    A0, A1, A2 = level_blocks(model, c + 1)
    for n in range(c + 2):
        u, l, d = level_blocks(model, n)
        rows = u.sum(axis=1) + l.sum(axis=1) + (d.sum(axis=1) if d is not None else 0.0)
        scale = max(1.0, np.abs(l).max())
        if np.abs(rows).max() > 1e-12 * scale:
            raise SolverError(f"generator rows of level {n} do not sum to zero")
    return GeneratorBlocks(lam=model.lam, c=c, up=ups, local=locals_, down=downs,
                           A0=A0, A1=A1, A2=A2)


def solve_R(blocks: GeneratorBlocks, tol: float = 1e-12, max_iter: int = 10 ** 6) -> np.ndarray:
    """
    Minimal nonnegative solution of ``A0 + R A1 + R^2 A2 = 0``.

    Fixed point ``R <- -(A0 + R^2 A2) A1^-1`` started from R = 0; the
    iterates increase monotonically to the minimal solution.
    """
    A0, A1, A2 = blocks.A0, blocks.A1, blocks.A2
    A1_inv = np.linalg.inv(A1)
    R = np.zeros_like(A0)
    target = tol * blocks.lam
    res = np.inf
    met = False
    for it in range(max_iter):
        R_next = -(A0 + R @ R @ A2) @ A1_inv
        step = np.abs(R_next - R).max()
        R = R_next
        if not met and (it % 16 == 0 or it == max_iter - 1):
            res = np.abs(A0 + R @ A1 + R @ R @ A2).sum(axis=1).max()
            met = res < target
        # once the residual target is met, keep going while the monotone
        # iterates still move above rounding level: errors in R are
        # amplified by 1/(1 - rho)^2 in the waiting-time measures
        if met and step <= 4 * np.finfo(float).eps * max(1.0, np.abs(R).max()):
            break
    else:
        if not met:
            raise SolverError(f"R iteration did not converge in {max_iter} steps "
                              f"(residual {res:.3e})")
    R = np.maximum(R, 0.0)
    if np.max(np.abs(np.linalg.eigvals(R))) >= 1.0:
        raise SolverError("spectral radius of R >= 1")
    return R


def _boundary_system(blocks: GeneratorBlocks, R: np.ndarray):
    c = blocks.c
    dims = [min(n, c) + 1 for n in range(c + 1)]
    offs = np.concatenate([[0], np.cumsum(dims)])
    size = int(offs[-1])
    M = np.zeros((size, size))  # x @ M = 0 encodes global balance
    for n in range(c + 1):
        rows = slice(offs[n], offs[n + 1])
        local = blocks.local[n]
        if n == c:
            local = local + R @ blocks.A2
        M[rows, rows] += local
        if n < c:
            M[rows, offs[n + 1]:offs[n + 2]] += blocks.up[n]
        if n > 0:
            M[rows, offs[n - 1]:offs[n]] += blocks.down[n]
    norm = np.ones(size)
    norm[offs[c]:] = np.linalg.solve(np.eye(c + 1) - R, np.ones(c + 1))
    return M, norm, offs


def stationary(model: ModelSpec, R: np.ndarray | None = None) -> StationarySolution:
    """Boundary probabilities pi_0..pi_c and the rate matrix R."""
    blocks = build_generator(model)
    if R is None:
        R = solve_R(blocks)
    M, norm, offs = _boundary_system(blocks, R)
    A = M.T.copy()
    b = np.zeros(len(norm))
    A[0, :] = norm
    b[0] = 1.0
    try:
        x = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"singular boundary system: {exc}") from exc
    x = np.where(np.abs(x) < 1e-300, 0.0, x)
    boundary = [x[offs[n]:offs[n + 1]] for n in range(model.c + 1)]
    return StationarySolution(model=model, boundary=boundary, R=R)


def balance_residual(sol: StationarySolution) -> float:
    """Max absolute global-balance residual over levels 0..c+1."""
    model = sol.model
    c = model.c
    blocks = build_generator(model)
    pis = list(sol.boundary) + [sol.level(c + 1), sol.level(c + 2)]
    worst = 0.0
    for n in range(c + 2):
        if n <= c:
            up, local, down = blocks.up, blocks.local, blocks.down
            flow = pis[n] @ local[n]
            if n > 0:
                flow = flow + pis[n - 1] @ up[n - 1]
        else:
            flow = pis[n] @ blocks.A1 + pis[n - 1] @ (blocks.up[c] if n - 1 == c else blocks.A0)
        below = blocks.down[n + 1] if n + 1 <= c else blocks.A2
        flow = flow + pis[n + 1] @ below
        worst = max(worst, float(np.abs(flow).max()))
    return worst


def departure_times(model: ModelSpec) -> DepartureTimeVector:
    """
    Expected time to the first departure when all c servers are busy.

    With r_j = (c - j) mu1 + j mu2, the recursion is T_c = 1/(c mu2) and
    T_j = 1/r_j + ((c - j) mu1 p_cont / r_j) T_{j+1}. Arrivals are
    irrelevant: they only join the queue.
    """
    c = model.c
    mu1, mu2, p = model.service.mu1, model.service.mu2, model.service.p_cont
    if p > 0 and not mu2 > 0:
        raise ParameterError("p_cont > 0 requires mu2 > 0")
    if p == 0:
        mu2 = mu1  # phases j > 0 are unreachable
    T = np.zeros(c + 1)
    T[c] = 1.0 / (c * mu2)
    for j in range(c - 1, -1, -1):
        r = (c - j) * mu1 + j * mu2
        T[j] = 1.0 / r + ((c - j) * mu1 * p / r) * T[j + 1]
    return DepartureTimeVector(T=T)


def _conditional_min(model: ModelSpec, v: np.ndarray) -> float:
    total = v.sum()
    if not total > 0 or not np.isfinite(total):
        raise UndefinedConditionalError("waiting probability is numerically zero")
    return float(v @ departure_times(model).T / total)


def min_residual_exact(model: ModelSpec, sol: StationarySolution) -> float:
    """
    Mean of the smallest remaining service time seen by an arrival that
    finds all servers busy (equivalently, mean time to the next departure).
    """
    return _conditional_min(model, sol.tail_vector)


def measures(model: ModelSpec, sol: StationarySolution) -> PerfMeasures:
    c, lam = model.c, model.lam
    I = np.eye(c + 1)
    pc = sol.boundary[c]
    v = sol.tail_vector
    pi_wait = float(v.sum())
    ones = np.ones(c + 1)
    # pi_c R (I - R)^-2 1
    w = np.linalg.solve(I - sol.R, np.linalg.solve(I - sol.R, ones))
    eqw = float(pc @ sol.R @ w)
    ew = eqw / lam
    head = sum(n * sol.boundary[n].sum() for n in range(c + 1))
    eq = float(head + c * (pi_wait - pc.sum()) + eqw)
    return PerfMeasures(rho=model.rho, pi_wait=pi_wait, eq=eq, eqw=eqw, ew=ew,
                        min_tr=_conditional_min(model, v))


def solve(model: ModelSpec) -> PerfMeasures:
    """Convenience: stationary solution followed by measures."""
    return measures(model, stationary(model))


def _truncated_generator(model: ModelSpec, N: int):
    """
    Explicit generator of the chain on levels 0..N, transposed, built state
    by state from the transition rules (arrivals are blocked at level N).
    """
    c, lam = model.c, model.lam
    mu1, mu2, p = model.service.mu1, model.service.mu2, model.service.p_cont
    if p == 0:
        mu2 = mu1
    level = np.repeat(np.arange(N + 1), [min(n, c) + 1 for n in range(N + 1)])
    offs = np.concatenate([[0], np.cumsum(np.minimum(np.arange(N + 1), c) + 1)])
    phase = np.arange(level.size) - offs[level]
    busy = np.minimum(level, c)
    idx = np.arange(level.size)

    def index(n, j):
        return offs[n] + j

    moves = [
        (level < N, lambda: index(level + 1, phase), np.full(level.size, lam)),
        (level > 0, lambda: index(level - 1, phase), (busy - phase) * mu1 * (1 - p)),
        (phase < busy, lambda: index(level, phase + 1), (busy - phase) * mu1 * p),
        (phase > 0, lambda: index(level - 1, phase - 1), phase * mu2),
    ]
    src, dst, rate = [], [], []
    for ok, target, r in moves:
        ok = ok & (r > 0)
        src.append(idx[ok])
        dst.append(target()[ok] if ok.any() else idx[ok])
        rate.append(r[ok])
    src, dst, rate = map(np.concatenate, (src, dst, rate))
    out = np.bincount(src, weights=rate, minlength=level.size)
    # transpose: row = destination state
    rows = np.concatenate([dst, idx])
    cols = np.concatenate([src, idx])
    vals = np.concatenate([rate, -out])
    return rows, cols, vals, offs


def _truncated_solve(model: ModelSpec, N: int) -> list:
    rows, cols, vals, offs = _truncated_generator(model, N)
    size = int(offs[-1])
    Qt = sp.csc_matrix((vals, (rows, cols)), shape=(size, size))
    # pin x[0] = 1 and drop its balance equation; the rest stays banded
    A = Qt[1:, 1:]
    b = -Qt[1:, 0].toarray().ravel()
    x = np.concatenate([[1.0], spla.spsolve(A.tocsc(), b, permc_spec="NATURAL")])
    x /= x.sum()
    return [x[offs[n]:offs[n + 1]] for n in range(N + 1)]


def truncated_oracle(model: ModelSpec, tail_mass_tol: float = 1e-12,
                     max_states: int = 10 ** 6, start_level: int = 64) -> PerfMeasures:
    """
    Measures from the explicit chain truncated at level N.

    N doubles until the waiting probability moves by less than 1e-10 and
    the mass of the top level is below `tail_mass_tol`. R is never used.
    """
    c, lam = model.c, model.lam
    N = max(start_level, 2 * c)
    prev = None
    while True:
        if (N + 1) * (c + 1) > max_states:
            raise OracleInfeasibleError(f"truncation level {N} exceeds {max_states} states")
        pis = _truncated_solve(model, N)
        tail = pis[c:]
        pi_wait = float(sum(p.sum() for p in tail))
        top = float(pis[N].sum())
        if prev is not None and abs(pi_wait - prev) < 1e-10 and top < tail_mass_tol:
            break
        prev = pi_wait
        N *= 2
    levels = np.arange(N + 1)
    mass = np.array([p.sum() for p in pis])
    eq = float(levels @ mass)
    eqw = float(np.clip(levels - c, 0, None) @ mass)
    v = np.sum(tail, axis=0)
    return PerfMeasures(rho=model.rho, pi_wait=pi_wait, eq=eq, eqw=eqw, ew=eqw / lam,
                        min_tr=_conditional_min(model, v))
