"""Elliptical and potential-shaped regions."""

# %%
import math

import numpy as np

from fockproj import dynamics, fock, phase_space
from fockproj.projector import Ellipse, GeneralRegion, elliptical_projector, general_region_projector

# Squeeze then rotate a circular projector. A real squeeze r narrows q by e^-r.
spec = Ellipse(center=(0.0, 0.0), squeeze=0.5, rotation=0.0, rank=11)
E = elliptical_projector(spec, 128)
g = phase_space.wigner_grid(E, np.linspace(-16, 16, 161), np.linspace(-8, 8, 121))
P, Q = g.mesh()
a_p, a_q = math.exp(0.5) * math.sqrt(20), math.exp(-0.5) * math.sqrt(20)
inside = (P / a_p) ** 2 + (Q / a_q) ** 2 <= 1
print("Wigner mass inside the ellipse:", g.integrate(inside) / g.integrate())

# %%
# Level sets of K = p^2/2 + U(q): keep the lowest `levels` eigenvectors of K.
quartic = dynamics.Potential.polynomial([0, 0, 0, 0, 0.25])
Eq, k = general_region_projector(GeneralRegion(quartic, 8), 128)
print("projector defect", fock.projector_defect(Eq), "energy cut", k)
g = phase_space.wigner_grid(Eq, np.linspace(-8, 8, 201), np.linspace(-5, 5, 201))
P, Q = g.mesh()
print("mass inside K <= cut:", g.integrate(0.5 * P ** 2 + 0.25 * Q ** 4 <= k) / 8)

# %%
# The harmonic potential gives back the circular projector.
Eh, _ = general_region_projector(GeneralRegion(dynamics.Potential(), 8), 128)
print("harmonic vs circle:", np.abs(Eh - np.diag([1.0] * 8 + [0.0] * 120)).max())
