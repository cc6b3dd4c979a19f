"""Quasi-projectors on phase-space discs and the exact projectors built from them.

The coherent-state quasi-projector on the disc ``|z| <= R`` is diagonal in the
number basis with eigenvalues ``lambda_n = P(n + 1, R^2)``. Rounding those
eigenvalues to 0/1 gives the exact projector ``E_N = sum_{n<=N} |n><n|``;
displacing, rotating and squeezing it moves the region to any ellipse.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import Potential, build_hamiltonian, position_nodes
from .errors import DimensionError, EigenvalueRangeError, FockError
from .fock import _check_dim, displacement, eigh, rotate, squeeze
from .special import poisson_sf_profile

DEFAULT_THRESHOLD = 0.5


class NonConfiningWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Circle:
    """Disc of radius ``R`` in the ``z`` plane centred at ``center = (p, q)``.

    ``N`` pins the projector rank to ``N + 1``; by default it is derived from
    ``R`` with :func:`rank_for_radius`.
    """

    R: float
    center: tuple = (0.0, 0.0)
    N: int = None

    def __post_init__(self):
        if not self.R > 0:
            raise FockError(f"circle radius must be positive, got {self.R}")
        if self.N is not None and self.N < 0:
            raise FockError("N must be non-negative")

    @property
    def top_level(self):
        return self.N if self.N is not None else rank_for_radius(self.R) - 1


@dataclass(frozen=True)
class Ellipse:
    center: tuple = (0.0, 0.0)
    squeeze: complex = 0.0
    rotation: float = 0.0
    rank: int = 1

    def __post_init__(self):
        if self.rank < 1:
            raise FockError("ellipse rank must be at least 1")


@dataclass(frozen=True)
class GeneralRegion:
    """Region bounded by a level set of ``K = p^2 / 2 + U(q)``."""

    potential: Potential
    levels: int

    def __post_init__(self):
        if self.levels < 1:
            raise FockError("levels must be at least 1")


def lambda_profile(R, count):
    """Eigenvalues ``lambda_n = (2 / n!) int_0^R r^{2n+1} e^{-r^2} dr`` for ``n < count``.

    Equal to the regularized incomplete gamma ``P(n + 1, R^2)``.
    """
    if R < 0:
        raise FockError("R must be non-negative")
    return poisson_sf_profile(float(R) ** 2, int(count))


def rank_for_radius(R, threshold=DEFAULT_THRESHOLD):
    """Number of levels whose quasi-projector eigenvalue reaches ``threshold``.

    Starts from ``round(R^2)`` and moves until ``lambda_{rank-1} >= threshold >
    lambda_rank``; lambda is monotone, so this is well defined.
    """
    guess = max(int(round(R * R)), 1)
    lam = lambda_profile(R, guess + int(4 * R) + 8)
    return int(np.count_nonzero(lam >= threshold))


def quasi_projector(R, d):
    """``int_{|z|<=R} d^2z / pi |z><z|`` in the number basis (diagonal)."""
    d = _check_dim(d)
    if R * R > d:
        raise DimensionError(f"R^2 = {R * R:.4g} exceeds dimension {d}")
    return np.diag(lambda_profile(R, d)).astype(complex)


def round_to_projector(P, threshold=DEFAULT_THRESHOLD, eps=1e-10):
    """Replace each eigenvalue of ``P`` by 1 if it reaches ``threshold`` and 0 otherwise."""
    if not 0.0 < threshold < 1.0:
        raise FockError("threshold must lie in (0, 1)")
    evals, V = eigh(P)
    if evals.size and (evals[0] < -eps or evals[-1] > 1.0 + eps):
        raise EigenvalueRangeError(
            f"eigenvalues span [{evals[0]:.3g}, {evals[-1]:.3g}], outside [0, 1]")
    B = V[:, evals >= threshold]
    return B @ B.conj().T


def exact_projector(N, d):
    """``sum_{n=0}^{N} |n><n|``."""
    d = _check_dim(d)
    if not 0 <= N < d:
        raise DimensionError(f"rank {N + 1} exceeds dimension {d}")
    E = np.zeros((d, d), dtype=complex)
    E[np.arange(N + 1), np.arange(N + 1)] = 1.0
    return E


def _conjugated(W, N):
    # W E_N W^dag = B B^dag with B the first N + 1 columns of W
    B = W[:, :N + 1]
    E = B @ B.conj().T
    return 0.5 * (E + E.conj().T)


def displaced_projector(N, center, d):
    """``U(p, q) E_N U(p, q)^dag`` for ``center = (p, q)``."""
    d = _check_dim(d)
    if not 0 <= N < d:
        raise DimensionError(f"rank {N + 1} exceeds dimension {d}")
    p, q = center
    if p == 0 and q == 0:
        return exact_projector(N, d)
    return _conjugated(displacement(p, q, d), N)


def elliptical_projector(spec, d):
    """Projector onto an ellipse: ``U(center) R(rotation) S(squeeze) E U^dag``-chain.

    A real squeeze ``r > 0`` gives semi-axes ``e^{r} sqrt(2N)`` along p and
    ``e^{-r} sqrt(2N)`` along q before rotation, with ``N = rank - 1``.
    """
    d = _check_dim(d)
    if spec.rank > d:
        raise DimensionError(f"rank {spec.rank} exceeds dimension {d}")
    p, q = spec.center
    W = displacement(p, q, d) @ rotate(spec.rotation, d) @ squeeze(spec.squeeze, d)
    return _conjugated(W, spec.rank - 1)


def general_region_projector(spec, d):
    """Projector onto the lowest ``spec.levels`` eigenstates of ``K = p^2/2 + U(q)``.

    Returns ``(E, K_boundary)`` where the boundary energy is the midpoint of the
    last included and first excluded eigenvalues.
    """
    d = _check_dim(d)
    L = spec.levels
    if L > d // 2:
        raise DimensionError(f"levels = {L} exceeds half the dimension {d}")
    K = build_hamiltonian(spec.potential, d)
    evals, V = eigh(K)
    k_gamma = 0.5 * (evals[L - 1] + evals[L])
    nodes, _ = position_nodes(d)
    u = spec.potential(nodes)
    edge = min(u[0], u[-1]) - u.min()
    # boundary curve must stay well inside the represented position range
    if k_gamma - u.min() > 0.5 * edge:
        warnings.warn(
            f"boundary energy {k_gamma:.4g} approaches the truncation edge; "
            "the potential may not be confining at this dimension",
            NonConfiningWarning, stacklevel=2)
    B = V[:, :L]
    E = B @ B.conj().T
    return 0.5 * (E + E.conj().T), float(k_gamma)


def region_projector(region, d):
    """Dispatch on a region description to the matching exact projector."""
    if isinstance(region, Circle):
        N = region.top_level
        if N < 0:
            raise FockError(f"circle of radius {region.R} holds no level at the rounding threshold")
        return displaced_projector(N, region.center, d)
    if isinstance(region, Ellipse):
        return elliptical_projector(region, d)
    if isinstance(region, GeneralRegion):
        return general_region_projector(region, d)[0]
    raise TypeError(f"unsupported region {region!r}")
