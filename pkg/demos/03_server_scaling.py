"""
More servers, shorter residuals
===============================

For the slow-first-stage family the waiting arrival's residual shrinks
much faster than 1/c, because with several servers at least one is
usually still in its short stage.
"""
from mgc_residuals import ModelSpec, solve
from mgc_residuals.catalog import dist_catalog

for fam in ("I", "II", "III"):
    vals = [solve(ModelSpec.from_rho(0.5, c, dist_catalog(fam, 4))).min_tr for c in range(1, 11)]
    print(f"family {fam}: " + " ".join(f"{v:.3f}" for v in vals))
    print(f"   c=2/c=4 ratio {vals[1] / vals[3]:.3f}")
