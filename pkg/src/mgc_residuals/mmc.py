"""Exact M/M/c results via the Erlang-C formula."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError, UnstableQueueError


@dataclass(frozen=True)
class MMcResult:
    pi_wait: float
    ew: float
    eq: float
    min_tr: float


def erlang_c(c: int, a: float) -> float:
    """
    Probability that an arrival waits in an M/M/c queue with offered load `a`.

    The terms a^k/k! are built by the recurrence t_{k+1} = t_k * a / (k + 1),
    so no factorial is ever formed. Terms are rescaled whenever they grow
    large, which keeps the routine finite for large `c`.
    """
    if int(c) != c or c < 1:
        raise ParameterError(f"server count must be a positive integer, got {c}")
    c = int(c)
    if not a > 0:
        raise ParameterError(f"offered load must be > 0, got {a}")
    if a >= c:
        raise UnstableQueueError(f"offered load {a} >= server count {c}")
    term = 1.0
    head = 0.0  # sum_{k<c} a^k/k!, in the same running scale as `term`
    for k in range(c):
        head += term
        term *= a / (k + 1)
        if term > 1e250 or head > 1e250:
            term /= 1e250
            head /= 1e250
    tail = term / (1.0 - a / c)
    return tail / (head + tail)


def mmc_measures(lam: float, m: float, c: int) -> MMcResult:
    if not (lam > 0 and m > 0):
        raise ParameterError(f"lambda and m must be > 0, got {lam}, {m}")
    rho = lam * m / c
    if rho >= 1:
        raise UnstableQueueError(f"utilisation {rho} >= 1")
    pw = erlang_c(c, lam * m)
    ew = pw * m / (c * (1.0 - rho))
    return MMcResult(pi_wait=pw, ew=ew, eq=c * rho + lam * ew, min_tr=m / c)
