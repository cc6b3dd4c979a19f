"""Decoherence of phase-space histories."""

# %%
import math

import numpy as np

from fockproj import histories, projector

d, N = 96, 5
c = (0.5, 2.0)
times = [0.0, 0.8, 2.1]
w = (2 / 3) ** np.arange(d)
rho = np.diag(w / w.sum()).astype(complex)

# %%
# Regions placed along the classical orbit: off-diagonal terms vanish.
rep = histories.decoherence_functional(histories.classical_history_spec(N, c, times, d, rho))
print("decoherent:", rep.decoherent, "max off-diagonal:", rep.max_offdiag)
for b, p in zip(rep.branches, rep.probabilities):
    print(" ", "-".join(b), f"{p:.6f}")

# %%
# Starting inside the region, the system stays inside with probability 1.
E = projector.displaced_projector(N, c, d)
rep = histories.decoherence_functional(
    histories.classical_history_spec(N, c, times, d, E / (N + 1)))
print("p(in, in, in) =", rep.probability(("in", "in", "in")))

# %%
# Shift the second region off the orbit by one radius: interference returns.
bad = histories.misaligned_history_spec(N, (0.0, 2.0), [0.0, 1.0], (0.0, math.sqrt(2 * N)), d, rho)
rep = histories.decoherence_functional(bad)
print("misaligned: decoherent", rep.decoherent,
      "ratio", rep.max_offdiag / rep.probabilities.max())
