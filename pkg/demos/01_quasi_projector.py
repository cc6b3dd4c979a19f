"""Circular phase-space regions: from a smeared quasi-projector to an exact projector."""

# %%

import numpy as np

from fockproj import fock, projector

# Integrating coherent-state projectors over the disc |z| <= R gives an operator
# that is diagonal in the number basis. Its eigenvalues are lambda_n = P(n+1, R^2).
R = 3.0
lam = projector.lambda_profile(R, 20)
for n, v in enumerate(lam):
    print(f"n={n:2d}  lambda={v:.6f}")

# %%
# The profile drops from ~1 to ~0 across n ~ R^2; it is not a projector.
P = projector.quasi_projector(R, 32)
print("||P^2 - P||_max =", fock.projector_defect(P))

# %%
# Rounding eigenvalues at 1/2 gives an exact projector of rank ~ R^2.
E = projector.round_to_projector(P)
print("rank", round(np.trace(E).real), "vs rank_for_radius", projector.rank_for_radius(R))
print("||E^2 - E||_max =", fock.projector_defect(E))

# %%
# Moving the region: conjugate with the displacement operator.
d = 96
c = (1.0, -2.0)   # (p, q)
Ec = projector.displaced_projector(8, c, d)
print("displaced trace", np.trace(Ec).real, "defect", fock.projector_defect(Ec))
print("coherent label of the centre:", fock.label(*c))
print("required dimension for this region:", fock.required_dim(8, fock.label(*c)))
