"""Queue description shared by the exact, simulated and approximate solvers."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .cox2 import Cox2Params, ServiceMoments, moments_from_params
from .errors import ParameterError, UnstableQueueError


@dataclass(frozen=True)
class ModelSpec:
    """
    M/Cox2/c queue: Poisson arrivals at rate `lam`, `c` identical FIFO
    servers, infinite buffer.
    """

    lam: float
    c: int
    service: Cox2Params

    def __post_init__(self):
        if int(self.c) != self.c or self.c < 1:
            raise ParameterError(f"server count must be a positive integer, got {self.c}")
        object.__setattr__(self, "c", int(self.c))
        if not self.lam > 0:
            raise ParameterError(f"arrival rate must be > 0, got {self.lam}")
        if self.rho >= 1:
            raise UnstableQueueError(f"utilisation rho = {self.rho:.6g} >= 1")

    @classmethod
    def from_rho(cls, rho: float, c: int, service: Cox2Params) -> "ModelSpec":
        """Derive the arrival rate c*rho/m from the law's own mean."""
        m = moments_from_params(service).m
        return cls(lam=c * rho / m, c=c, service=service)

    @cached_property
    def moments(self) -> ServiceMoments:
        return moments_from_params(self.service)

    @property
    def m(self) -> float:
        return self.moments.m

    @property
    def rho(self) -> float:
        return self.lam * self.m / self.c
