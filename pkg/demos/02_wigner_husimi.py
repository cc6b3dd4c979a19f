"""Phase-space pictures of an exact projector."""

# %%
import math

import numpy as np

from fockproj import phase_space, projector

N = 10
E = projector.exact_projector(N, 64)
ax = np.linspace(-8, 8, 161)

# %%
# Wigner function: flat-ish plateau of height 1/pi inside |z|^2 < N, ringing at the edge.
W = phase_space.wigner_grid(E, ax, ax)
print("integral of W:", W.integrate(), "(trace is", N + 1, ")")
print("W at origin:", W.values[80, 80], "1/pi =", 1 / math.pi)
r2 = np.linspace(0, 60, 7)
print("radial profile:", np.round(phase_space.wigner_series_circular(N, r2), 5))

# %%
# Husimi function: a smoothed picture, the cumulative Poisson distribution in |z|^2.
for x in (0.0, 5.0, 10.0, 15.0, 25.0):
    print(f"|z|^2={x:5.1f}  Q={phase_space.husimi(E, math.sqrt(x)):.4f}")

# %%
# Overlaps become phase-space integrals: Tr(E rho) = 2 pi int W_E W_rho.
rho = projector.exact_projector(0, 64)
Wr = phase_space.wigner_grid(rho, ax, ax)
print("2 pi int W_E W_vac =", 2 * math.pi * W.integrate(Wr.values))

# %%
# Probability that a P-function mixture lies in the region, exact vs sharp cutoff.
mix = phase_space.CoherentMixture((0.5, 0.5), (math.sqrt(N / 4), 2j * math.sqrt(N)))
print("exact, cutoff:", phase_space.pfunction_probability(mix, N))
