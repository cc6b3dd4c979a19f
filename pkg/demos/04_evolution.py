"""Projectors ride the classical flow exactly."""

# %%
import math

import numpy as np

from fockproj import dynamics, projector

d, N = 96, 6
c = (0.0, 2.0)
E = projector.displaced_projector(N, c, d)

# %%
# Heisenberg evolution of the region projector equals the projector of the
# region carried backwards along the classical trajectory.
for t in (0.3, 1.0, math.pi / 2, math.pi):
    back = dynamics.classical_flow(c, -t)
    F = projector.displaced_projector(N, back, d)
    err = np.abs(dynamics.evolve_projector(E, t) - F).max()
    print(f"t={t:.3f}  flowed centre=({back[0]:+.3f}, {back[1]:+.3f})  defect={err:.1e}")

# %%
# Regions centred at the origin never move.
E0 = projector.exact_projector(N, d)
print("origin:", np.abs(dynamics.evolve_projector(E0, 2.2) - E0).max())

# %%
tr = dynamics.trajectory(c, np.linspace(0, 2 * math.pi, 9))
print("energy along the orbit:", tr.energies())
