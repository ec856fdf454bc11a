"""
Erlang-C as a stand-in for the waiting probability
==================================================

How far is the M/M/c waiting probability from the exact M/Cox2/c one,
and where along the load axis is the gap largest?
"""
import numpy as np

from mgc_residuals import ModelSpec, erlang_c, relative_error, solve
from mgc_residuals.catalog import CVS, dist_catalog

rhos = np.round(np.arange(0.1, 1.0, 0.1), 1)
print("family III, c=4; relative error of Erlang-C in %")
print("cv  " + " ".join(f"{r:6.1f}" for r in rhos))
for cv in CVS:
    errs = []
    for rho in rhos:
        model = ModelSpec.from_rho(rho, 4, dist_catalog("III", cv))
        errs.append(100 * relative_error(erlang_c(4, model.lam * model.m), solve(model).pi_wait))
    print(f"{cv:>2}  " + " ".join(f"{e:6.1f}" for e in errs))
