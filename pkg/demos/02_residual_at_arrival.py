"""
Residual service seen by a waiting arrival
==========================================

Compare the exact mean time until the first server frees up, as seen by
an arrival that has to wait, with the usual renewal-theory shortcut.
"""
from mgc_residuals import ModelSpec, classic_bundle, relative_error, solve
from mgc_residuals.catalog import CVS, dist_catalog

print(" fam  cv  c    exact    shortcut   rel.err%")
for fam in ("I", "II", "III"):
    for cv in CVS:
        for c in (2, 4):
            model = ModelSpec.from_rho(0.5, c, dist_catalog(fam, cv))
            exact = solve(model).min_tr
            approx = classic_bundle(model).min_tr_eq2
            print(f" {fam:>3} {cv:>3} {c:>2} {exact:9.4f} {approx:9.4f} "
                  f"{100 * relative_error(approx, exact):9.1f}")

# with a single server the two coincide
model = ModelSpec.from_rho(0.5, 1, dist_catalog("II", 4))
print("\nc=1:", solve(model).min_tr, classic_bundle(model).min_tr_eq2)
