"""
Discrete-event simulation of the FIFO M/Cox2/c queue.

Each replication pre-samples interarrival gaps and full service durations,
then replays the event sequence in a compiled loop. Service durations are
drawn in arrival order, which under FIFO is also service-start order.
Replication streams come from ``SeedSequence(master_seed).spawn(...)``, so
results depend only on the master seed and the replication index.
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy import stats

from .cox2 import sample_many
from .errors import EstimationError, ParameterError
from .model import ModelSpec

METRICS = ("pi_wait", "ew", "eq", "min_tr")

# indices into the per-replication statistics vector
N_ARR, N_WAIT, SUM_WAIT, SUM_MIN, AREA, SPAN, SUM_SOJOURN = range(7)


@dataclass(frozen=True)
class SimConfig:
    replications: int = 30
    arrivals_per_rep: int = 200_000
    warmup_arrivals: int = 20_000
    master_seed: int = 12345
    workers: int = 1

    def __post_init__(self):
        if self.replications < 2:
            raise ParameterError("need at least 2 replications")
        if self.arrivals_per_rep < 1:
            raise ParameterError("arrivals_per_rep must be >= 1")
        if self.warmup_arrivals < 0:
            raise ParameterError("warmup_arrivals must be >= 0")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ParameterError("master_seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class Estimate:
    mean: float
    half_width: float
    n: int

    def covers(self, value: float, k: float = 3.0) -> bool:
        return abs(self.mean - value) <= k * self.half_width


@dataclass(frozen=True)
class SimEstimates:
    pi_wait: Estimate
    ew: Estimate
    eq: Estimate
    min_tr: Estimate
    master_seed: int
    replications: int
    sojourn: Estimate = field(repr=False, default=None)

    def __getitem__(self, metric: str) -> Estimate:
        return getattr(self, metric)


@numba.njit(cache=True, nogil=True)
def _replay(arrivals, services, c, warmup):
    n = arrivals.size
    comp = np.full(c, np.inf)
    out = np.zeros(7)
    busy = 0
    head = 0  # next customer to enter service; head..k-1 are queued
    t_prev = arrivals[warmup] if warmup < n else 0.0

    for k in range(n):
        t = arrivals[k]
        while busy > 0:
            s = 0
            for i in range(1, c):
                if comp[i] < comp[s]:
                    s = i
            tc = comp[s]
            if tc > t:
                break
            if k > warmup:
                out[AREA] += (busy + k - head) * (tc - t_prev)
                t_prev = tc
            if head < k:
                if head >= warmup:
                    w = tc - arrivals[head]
                    out[SUM_WAIT] += w
                    out[SUM_SOJOURN] += w + services[head]
                comp[s] = tc + services[head]
                head += 1
            else:
                comp[s] = np.inf
                busy -= 1
        if k > warmup:
            out[AREA] += (busy + k - head) * (t - t_prev)
            t_prev = t
        if busy == c:
            if k >= warmup:
                out[N_WAIT] += 1
                out[SUM_MIN] += comp.min() - t
        else:
            s = 0
            while comp[s] != np.inf:
                s += 1
            comp[s] = t + services[k]
            busy += 1
            head = k + 1
            if k >= warmup:
                out[SUM_SOJOURN] += services[k]
        if k >= warmup:
            out[N_ARR] += 1

    # let the measured customers still queued enter service
    while head < n:
        s = 0
        for i in range(1, c):
            if comp[i] < comp[s]:
                s = i
        tc = comp[s]
        w = tc - arrivals[head]
        out[SUM_WAIT] += w
        out[SUM_SOJOURN] += w + services[head]
        comp[s] = tc + services[head]
        head += 1
    if warmup < n:
        out[SPAN] = arrivals[n - 1] - arrivals[warmup]
    return out


def replay_reference(arrivals, services, c, warmup, check=True):
    """
    Plain event-list replay of the same sample path, used to cross-check
    the compiled loop.

    With ``check=True`` every recorded minimum residual is compared with the
    epoch of the next departure event actually processed.
    """
    n = len(arrivals)
    out = np.zeros(7)
    departures = []  # heap of (completion time, server)
    idle = list(range(c))  # heap of idle server indices
    queue = deque()
    in_system = 0
    t_start, t_end = arrivals[warmup], arrivals[-1]
    t_last = 0.0
    predicted = None

    def advance(t):
        nonlocal t_last
        lo, hi = max(t_last, t_start), min(t, t_end)
        if hi > lo:
            out[AREA] += in_system * (hi - lo)
        t_last = t

    def start(idx, server, now):
        if idx >= warmup:
            w = now - arrivals[idx]
            out[SUM_WAIT] += w
            out[SUM_SOJOURN] += w + services[idx]
        heapq.heappush(departures, (now + services[idx], server))

    k = 0
    while k < n or queue:
        next_arrival = arrivals[k] if k < n else math.inf
        if departures and departures[0][0] <= next_arrival:
            t, server = heapq.heappop(departures)
            if check and predicted is not None and predicted != t:
                raise AssertionError(f"recorded residual ends at {predicted}, departure at {t}")
            predicted = None
            advance(t)
            in_system -= 1
            if queue:
                start(queue.popleft(), server, t)
            else:
                heapq.heappush(idle, server)
            continue
        t = next_arrival
        advance(t)
        in_system += 1
        if idle:
            start(k, heapq.heappop(idle), t)
        else:
            queue.append(k)
            predicted = departures[0][0]
            if k >= warmup:
                out[N_WAIT] += 1
                out[SUM_MIN] += predicted - t
        if k >= warmup:
            out[N_ARR] += 1
        k += 1
    out[SPAN] = t_end - t_start
    return out


def sample_path(model: ModelSpec, n: int, rng: np.random.Generator):
    """Arrival epochs and service durations for `n` customers."""
    gaps = -np.log1p(-rng.random(n)) / model.lam
    services = sample_many(model.service, rng, n)
    return np.cumsum(gaps), services


def run_replication(model: ModelSpec, horizon: int, warmup: int, seed) -> np.ndarray:
    """
    Simulate one replication and return its raw statistics vector.

    `seed` is anything accepted by ``numpy.random.default_rng``. Only the
    `horizon` arrivals after the first `warmup` ones are measured; the
    population integral starts at the epoch of the first measured arrival.
    """
    rng = np.random.default_rng(seed)
    arrivals, services = sample_path(model, warmup + horizon, rng)
    return _replay(arrivals, services, model.c, warmup)


def replication_means(raw: np.ndarray) -> dict:
    """Per-replication point estimates; min_tr is NaN if nobody waited."""
    n_wait = raw[N_WAIT]
    return {
        "pi_wait": raw[N_WAIT] / raw[N_ARR],
        "ew": raw[SUM_WAIT] / raw[N_ARR],
        "eq": raw[AREA] / raw[SPAN] if raw[SPAN] > 0 else math.nan,
        "min_tr": raw[SUM_MIN] / n_wait if n_wait > 0 else math.nan,
        "sojourn": raw[SUM_SOJOURN] / raw[N_ARR],
    }


def t_interval(values, level: float = 0.95) -> Estimate:
    """Mean and Student-t half-width of replication means, ignoring NaNs."""
    x = np.asarray(values, dtype=float)
    x = x[np.isfinite(x)]
    if x.size < 2:
        return Estimate(mean=float(x.mean()) if x.size else math.nan,
                        half_width=math.nan, n=int(x.size))
    q = stats.t.ppf(0.5 + level / 2, x.size - 1)
    return Estimate(mean=float(x.mean()),
                    half_width=float(q * x.std(ddof=1) / math.sqrt(x.size)),
                    n=int(x.size))


def estimate(model: ModelSpec, config: SimConfig = SimConfig()) -> SimEstimates:
    """
    Independent replications and 95% Student-t intervals for the four metrics.

    Replication i uses the i-th child of ``SeedSequence(master_seed)``;
    results are collected by index, so output does not depend on how the
    replications were scheduled across workers.
    """
    children = np.random.SeedSequence(config.master_seed).spawn(config.replications)

    def job(i):
        return run_replication(model, config.arrivals_per_rep, config.warmup_arrivals,
                               children[i])

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            raws = list(pool.map(job, range(config.replications)))
    else:
        raws = [job(i) for i in range(config.replications)]

    per_rep = [replication_means(r) for r in raws]
    usable = [r for r in per_rep if np.isfinite(r["eq"])]
    if len(usable) < 2:
        raise EstimationError(f"only {len(usable)} usable replications")
    cols = {k: [r[k] for r in usable] for k in (*METRICS, "sojourn")}
    return SimEstimates(
        pi_wait=t_interval(cols["pi_wait"]),
        ew=t_interval(cols["ew"]),
        eq=t_interval(cols["eq"]),
        min_tr=t_interval(cols["min_tr"]),
        master_seed=config.master_seed,
        replications=config.replications,
        sojourn=t_interval(cols["sojourn"]),
    )
