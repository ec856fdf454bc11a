"""
Cox-2 families used throughout the study: mean 1, cv in {2, 4, 6, 8, 10},
and a fixed stage-1 rate per family.

Family II prints its stage-1 rate as 1.11; the exact value is 10/9 (a
stage-1 mean of 0.9), which is the only reading that reproduces the printed
stage-2 rates and exit probabilities.
"""
from __future__ import annotations

from .cox2 import Cox2Params, fit_from_moments
from .errors import ParameterError

FAMILY_MU1 = {"I": 1000.0, "II": 10.0 / 9.0, "III": 2.5}
CVS = (2, 4, 6, 8, 10)
MEAN = 1.0

# Printed rows: cv -> (mu2, q1_exit, skewness, excess kurtosis)
PRINTED_TABLES = {
    "I": {
        2: (0.400, 0.601, 3.07, 12.77),
        4: (0.118, 0.883, 6.01, 48.28),
        6: (0.054, 0.946, 9.01, 108.30),
        8: (0.031, 0.969, 12.01, 192.43),
        10: (0.020, 0.980, 15.02, 300.63),
    },
    "II": {
        2: (0.063, 0.9938, 19.26, 608.91),
        4: (0.013, 0.9987, 54.10, 4107.30),
        6: (0.006, 0.9994, 86.00, 10087.28),
        8: (0.003, 0.9997, 116.98, 18480.19),
        10: (0.002, 0.9998, 147.58, 29276.89),
    },
    "III": {
        2: (0.286, 0.829, 4.64, 29.76),
        4: (0.074, 0.956, 9.80, 129.44),
        6: (0.033, 0.980, 14.87, 296.05),
        8: (0.019, 0.989, 19.90, 529.36),
        10: (0.012, 0.993, 24.92, 829.35),
    },
}


def dist_catalog(family: str, cv: float) -> Cox2Params:
    family = str(family).upper()
    if family not in FAMILY_MU1:
        raise ParameterError(f"unknown family {family!r}; expected one of I, II, III")
    if cv not in CVS:
        raise ParameterError(f"cv {cv!r} not in catalog; expected one of {CVS}")
    return fit_from_moments(MEAN, float(cv), FAMILY_MU1[family])


def all_entries():
    """Yield ``(family, cv, params)`` for all 15 catalog laws."""
    for fam in FAMILY_MU1:
        for cv in CVS:
            yield fam, cv, dist_catalog(fam, cv)
