"""
Simulation against the exact solution
=====================================

Independent replications with 95% t-intervals, next to the
matrix-geometric values. Also shows the load dependence of the residual
for the high-variance family.
"""
from mgc_residuals import ModelSpec, SimConfig, estimate, solve
from mgc_residuals.catalog import dist_catalog

cfg = SimConfig(replications=20, arrivals_per_rep=100_000, warmup_arrivals=10_000, master_seed=7)
for fam in ("I", "II"):
    for rho in (0.1, 0.5, 0.9):
        model = ModelSpec.from_rho(rho, 4, dist_catalog(fam, 4))
        exact, est = solve(model), estimate(model, cfg)
        print(f"family {fam} rho={rho}")
        for k in ("pi_wait", "ew", "eq", "min_tr"):
            e = est[k]
            print(f"   {k:8s} exact {getattr(exact, k):9.4f}   sim {e.mean:9.4f} +/- {e.half_width:.4f}")
