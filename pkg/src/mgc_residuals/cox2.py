"""
Two-stage Coxian (Cox-2) service time distribution.

A Cox-2 service consists of an exponential first stage with rate ``mu1``.
When it ends, the service continues with probability ``p_cont`` into a
second exponential stage with rate ``mu2``, otherwise it completes. The
catalog tables print the exit probability ``q1_exit = 1 - p_cont``.

Routines:

- moments_from_params()
- fit_from_moments()
- sample_service()
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from os import PathLike
from typing import Sequence, Union

import numpy as np

from .errors import InfeasibleFitError, ParameterError


@dataclass(frozen=True)
class Cox2Params:
    """Rates of both stages and the probability of entering stage 2."""

    mu1: float
    mu2: float
    p_cont: float

    def __post_init__(self):
        if not (math.isfinite(self.mu1) and self.mu1 > 0):
            raise ParameterError(f"mu1 must be > 0, got {self.mu1}")
        if not (0.0 <= self.p_cont <= 1.0):
            raise ParameterError(f"p_cont must lie in [0, 1], got {self.p_cont}")
        if self.p_cont > 0 and not (math.isfinite(self.mu2) and self.mu2 > 0):
            raise ParameterError(
                f"mu2 must be > 0 when p_cont > 0, got {self.mu2}")

    @property
    def q1_exit(self) -> float:
        return 1.0 - self.p_cont

    @classmethod
    def exponential(cls, rate: float) -> "Cox2Params":
        return cls(mu1=rate, mu2=rate, p_cont=0.0)

    @classmethod
    def from_dict(cls, record: dict) -> "Cox2Params":
        """Build from a ``{"mu1", "mu2", "q1_exit"}`` record."""
        try:
            mu1 = float(record["mu1"])
            q1 = float(record["q1_exit"])
            mu2 = float(record.get("mu2", mu1))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"malformed distribution record: {exc}") from exc
        return cls(mu1=mu1, mu2=mu2, p_cont=1.0 - q1)

    def to_dict(self) -> dict:
        return {"mu1": self.mu1, "mu2": self.mu2, "q1_exit": self.q1_exit}

    @classmethod
    def load(cls, path: Union[str, PathLike]) -> "Cox2Params":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def generator(self):
        """Return ``(alpha, S)``, the phase-type representation of the law."""
        alpha = np.array([1.0, 0.0])
        mu2 = self.mu2 if self.p_cont > 0 else 1.0
        S = np.array([[-self.mu1, self.p_cont * self.mu1],
                      [0.0, -mu2]])
        return alpha, S


@dataclass(frozen=True)
class ServiceMoments:
    m: float
    cv: float
    skewness: float
    ex_kurtosis: float
    raw: tuple  # E[T^k] for k = 1..4; raw[0] is E[T]

    @property
    def variance(self) -> float:
        return self.raw[1] - self.m ** 2


def raw_moments(p: Cox2Params, order: int = 4) -> np.ndarray:
    """
    Raw moments ``E[T^n]`` for ``n = 1..order``.

    Uses ``E[T^n] = n! (mu1^-n + p_cont * sum_{k=1..n} mu1^-(n-k) mu2^-k)``,
    i.e. the exit branch plus the hypoexponential branch.
    """
    out = np.empty(order)
    for n in range(1, order + 1):
        tail = 0.0
        if p.p_cont > 0:
            tail = sum(1.0 / (p.mu1 ** (n - k) * p.mu2 ** k) for k in range(1, n + 1))
        out[n - 1] = math.factorial(n) * (1.0 / p.mu1 ** n + p.p_cont * tail)
    return out


def moments_from_params(p: Cox2Params) -> ServiceMoments:
    """
    Mean, cv, skewness and excess kurtosis of a Cox-2 law.

    Kurtosis is reported as excess kurtosis (6 for the exponential law).
    """
    if not isinstance(p, Cox2Params):
        raise ParameterError(f"expected Cox2Params, got {type(p).__name__}")
    m1, m2, m3, m4 = raw_moments(p, 4)
    var = m2 - m1 ** 2
    sigma = math.sqrt(var)
    mu3 = m3 - 3 * m1 * m2 + 2 * m1 ** 3
    mu4 = m4 - 4 * m1 * m3 + 6 * m1 ** 2 * m2 - 3 * m1 ** 4
    return ServiceMoments(
        m=m1,
        cv=sigma / m1,
        skewness=mu3 / sigma ** 3,
        ex_kurtosis=mu4 / var ** 2 - 3.0,
        raw=(m1, m2, m3, m4),
    )


def fit_from_moments(m: float, cv: float, mu1: float) -> Cox2Params:
    """
    Fit a Cox-2 law with given mean and cv and a prescribed stage-1 rate.

    The stage-1 rate is a free input: two laws with equal (m, cv) but
    different ``mu1`` differ in their third and higher moments.

    Parameters
    ----------
    m : float
        Target mean service time.
    cv : float
        Target coefficient of variation.
    mu1 : float
        Stage-1 rate, must satisfy ``mu1 >= 1/m``.

    Raises
    ------
    ParameterError
        If ``m``, ``cv`` or ``mu1`` is not positive.
    InfeasibleFitError
        If no Cox-2 with this stage-1 rate has the target (m, cv).
    """
    if not (m > 0 and cv > 0 and mu1 > 0):
        raise ParameterError(f"m, cv and mu1 must be > 0, got {m}, {cv}, {mu1}")
    b = m - 1.0 / mu1
    # b is the stage-2 contribution to the mean: p_cont / mu2
    if abs(b) <= 1e-14 * m:
        if abs(cv - 1.0) > 1e-12:
            raise InfeasibleFitError(
                f"mu1 = 1/m forces an exponential law (cv = 1), got cv = {cv}")
        return Cox2Params.exponential(mu1)
    if b < 0:
        raise InfeasibleFitError(f"mu1 < 1/m: stage 1 alone exceeds the mean (mu1={mu1}, m={m})")
    second = m * m * (1.0 + cv * cv)
    D = second - 2.0 / mu1 ** 2 - 2.0 * b / mu1
    if D <= 0:
        raise InfeasibleFitError(f"second moment too small for mu1={mu1}: D={D:.6g} <= 0")
    mu2 = 2.0 * b / D
    p_cont = b * mu2
    if p_cont > 1.0 + 1e-12:
        raise InfeasibleFitError(f"p_cont = {p_cont:.6g} > 1 (cv too small for mu1={mu1})")
    return Cox2Params(mu1=mu1, mu2=mu2, p_cont=min(p_cont, 1.0))


def sample_service(p: Cox2Params, stream) -> float:
    """
    Draw one service time.

    `stream` is any zero-argument callable, or iterator, yielding uniforms
    in (0, 1]. Uniforms are consumed in the order stage 1, routing, stage 2;
    with ``p_cont == 0`` only the stage-1 uniform is drawn.
    """
    draw = stream if callable(stream) else stream.__next__
    t = -math.log(draw()) / p.mu1
    if p.p_cont > 0 and draw() <= p.p_cont:
        t += -math.log(draw()) / p.mu2
    return t


def sample_many(p: Cox2Params, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorised draw of `size` service times from a numpy Generator."""
    # 1 - U maps [0, 1) onto (0, 1]
    t = -np.log1p(-rng.random(size)) / p.mu1
    if p.p_cont > 0:
        cont = rng.random(size) < p.p_cont
        t += np.where(cont, -np.log1p(-rng.random(size)) / p.mu2, 0.0)
    return t


def uniform_stream(rng: np.random.Generator):
    """Callable yielding uniforms in (0, 1] from a numpy Generator."""
    return lambda: 1.0 - rng.random()


def params_grid(ms: Sequence[float], cvs: Sequence[float], mu1s: Sequence[float]):
    """Yield every feasible fitted law over a grid of targets, skipping infeasible ones."""
    for m in ms:
        for cv in cvs:
            for mu1 in mu1s:
                try:
                    yield (m, cv, mu1), fit_from_moments(m, cv, mu1)
                except InfeasibleFitError:
                    continue
