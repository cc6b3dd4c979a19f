"""Poisson / incomplete-gamma tails and Laguerre recurrences.

Everything here works for integer orders only, which is all the oscillator
algebra needs.
"""

import math

import numpy as np


def _poisson_weights(x, kmax):
    """Unnormalized Poisson weights w_k ∝ x^k / k!, k = 0..kmax, scaled so the
    mode carries weight 1.

    Anchoring at the mode keeps every weight in [0, 1]; terms far in either
    tail simply underflow to zero.
    """
    w = np.zeros(kmax + 1)
    mode = min(int(math.floor(x)), kmax)
    w[mode] = 1.0
    if mode < kmax:
        up = x / np.arange(mode + 1, kmax + 1)
        w[mode + 1:] = np.cumprod(up)
    if mode > 0:
        down = np.arange(mode, 0, -1) / x
        w[:mode][::-1] = np.cumprod(down)
    return w


def _tail_cutoff(x):
    # Poisson mass beyond x + 40 sqrt(x) + 40 is far below double precision.
    return int(math.ceil(x + 40.0 * math.sqrt(x) + 40.0))


def poisson_sf_profile(x, count):
    """Return ``P(n + 1, x)`` for ``n = 0 .. count - 1``.

    ``P`` is the regularized lower incomplete gamma function, equivalently
    ``Pr[Poisson(x) > n]``. The tail sums are accumulated from the far end
    inward, so the result is exactly non-increasing in ``n`` and bounded by 1.
    """
    if x < 0:
        raise ValueError("x must be non-negative")
    if count < 1:
        raise ValueError("count must be at least 1")
    if x == 0:
        return np.zeros(count)
    kmax = max(count, _tail_cutoff(x))
    w = _poisson_weights(x, kmax)
    tail = np.cumsum(w[::-1])[::-1]  # tail[k] = sum_{j >= k} w_j
    out = tail[1:count + 1] / tail[0]
    return np.minimum(out, 1.0)


def poisson_cdf(n, x):
    """``Pr[Poisson(x) <= n]``; 1 for n beyond the represented tail."""
    if n < 0:
        return 0.0
    if x == 0:
        return 1.0
    kmax = max(n + 1, _tail_cutoff(x))
    w = _poisson_weights(x, kmax)
    head = math.fsum(w[:n + 1])
    return head / math.fsum(w)


def laguerre_sequence(nmax, x, scale=1.0):
    """Values ``scale * L_n(x)`` for n = 0..nmax via the three-term recurrence

        (n + 1) L_{n+1} = (2n + 1 - x) L_n - n L_{n-1}.

    ``x`` may be an array. Passing ``scale = exp(-x / 2)`` folds the Gaussian
    envelope in before the recurrence runs, avoiding overflow for large x.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = scale * np.ones_like(x)
    if nmax >= 1:
        out[1] = scale * (1.0 - x)
    for n in range(1, nmax):
        out[n + 1] = ((2 * n + 1 - x) * out[n] - n * out[n - 1]) / (n + 1)
    return out
