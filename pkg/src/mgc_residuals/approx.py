"""
The classical two-moment pipeline for the M/G/c mean wait, and error metrics.

The mean wait is estimated as ``pi_wait * min_tr / (1 - rho)``, where
``min_tr`` comes from the M/G/1 residual divided by c and ``pi_wait`` is
borrowed from an M/M/c queue with the same rates.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError, UndefinedConditionalError
from .mmc import erlang_c
from .model import ModelSpec


@dataclass(frozen=True)
class ApproxBundle:
    min_tr_eq2: float
    pi_wait_mmc: float
    ew_eq1: float
    eq_approx: float


def min_residual_eq2(m: float, cv: float, c: int) -> float:
    """M/G/1 mean residual ``m (1 + cv^2) / 2`` scaled down by the server count."""
    if not (m > 0 and cv >= 0 and c >= 1):
        raise ParameterError(f"need m > 0, cv >= 0, c >= 1; got {m}, {cv}, {c}")
    return m * (1.0 + cv * cv) / (2.0 * c)


def wait_eq1(pi_wait: float, min_tr: float, rho: float) -> float:
    if not 0.0 < rho < 1.0:
        raise ParameterError(f"rho must lie in (0, 1), got {rho}")
    if not 0.0 <= pi_wait <= 1.0:
        raise ParameterError(f"pi_wait must lie in [0, 1], got {pi_wait}")
    if min_tr < 0:
        raise ParameterError(f"min_tr must be >= 0, got {min_tr}")
    return pi_wait * min_tr / (1.0 - rho)


def classic_bundle(model: ModelSpec) -> ApproxBundle:
    mom = model.moments
    min_tr = min_residual_eq2(mom.m, mom.cv, model.c)
    pw = erlang_c(model.c, model.lam * mom.m)
    ew = wait_eq1(pw, min_tr, model.rho)
    return ApproxBundle(min_tr_eq2=min_tr, pi_wait_mmc=pw, ew_eq1=ew,
                        eq_approx=model.c * model.rho + model.lam * ew)


def relative_error(approx: float, exact: float) -> float:
    """Signed error ``(approx - exact) / exact``; multiply by 100 for percent."""
    if exact == 0:
        raise UndefinedConditionalError("relative error undefined for exact value 0")
    return (approx - exact) / exact
