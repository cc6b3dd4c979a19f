"""Oscillator time evolution, classical reference flow, and the Hamiltonian builder.

The evolving Hamiltonian is ``H = a_dag a``; the zero-point term 1/2 only
contributes a global phase and is dropped everywhere.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DimensionError, FockError, NonConfiningPotentialError, NotProjectorError
from .fock import eigh, hermiticity_defect, ladder_ops, projector_defect, quadratures, rotate

PROJECTOR_TOL = 1e-10


@dataclass(frozen=True)
class Potential:
    """A potential ``U(q)`` for ``K = p^2 / 2 + U(q)``.

    ``kind`` is ``"harmonic"`` (``q^2 / 2``), ``"polynomial"`` (``coefficients``
    in ascending powers of q) or ``"tabulated"`` (``grid`` / ``values``,
    linearly interpolated and linearly extrapolated past the ends).
    """

    kind: str = "harmonic"
    coefficients: tuple = ()
    grid: tuple = ()
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("harmonic", "polynomial", "tabulated"):
            raise FockError(f"unknown potential kind {self.kind!r}")
        if self.kind == "polynomial" and len(self.coefficients) == 0:
            raise FockError("polynomial potential needs coefficients")
        if self.kind == "tabulated":
            grid = np.asarray(self.grid, dtype=float)
            if grid.size < 2 or grid.size != len(self.values):
                raise FockError("tabulated potential needs matching grid/values of length >= 2")
            if np.any(np.diff(grid) <= 0):
                raise FockError("tabulated grid must be strictly increasing")

    @classmethod
    def polynomial(cls, coefficients):
        return cls("polynomial", coefficients=tuple(float(c) for c in coefficients))

    @classmethod
    def tabulated(cls, grid, values):
        return cls("tabulated", grid=tuple(float(g) for g in grid),
                   values=tuple(float(v) for v in values))

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        if self.kind == "harmonic":
            return 0.5 * q * q
        if self.kind == "polynomial":
            return npoly.polyval(q, self.coefficients)
        g = np.asarray(self.grid)
        v = np.asarray(self.values)
        out = np.interp(q, g, v)
        lo, hi = q < g[0], q > g[-1]
        out[lo] = v[0] + (q[lo] - g[0]) * (v[1] - v[0]) / (g[1] - g[0])
        out[hi] = v[-1] + (q[hi] - g[-1]) * (v[-1] - v[-2]) / (g[-1] - g[-2])
        return out


def kinetic_term(d):
    """``p^2 / 2`` truncated from the infinite matrix (not the product of truncated p's).

    Squaring the truncated momentum corrupts the top diagonal entry, which
    would put a spurious level in the middle of the spectrum.
    """
    a, ad = ladder_ops(d)
    diag = np.diag(2.0 * np.arange(d) + 1.0)
    return 0.25 * (diag - a @ a - ad @ ad)


def position_nodes(d):
    """Eigenvalues and eigenvectors of the truncated position operator."""
    qop, _ = quadratures(d)
    return eigh(qop)


def build_hamiltonian(potential, d, check_confining=True):
    """Matrix of ``K = p^2 / 2 + U(q)`` in the number basis.

    ``U(q)`` is represented spectrally on the eigenbasis of the truncated
    position operator, ``V diag(U(q_i)) V^dag``. The nodes ``q_i`` are the
    Gauss-Hermite points of order ``d``.
    """
    nodes, V = position_nodes(d)
    u = potential(nodes)
    if not np.all(np.isfinite(u)):
        raise FockError("potential is not finite on the position nodes")
    if check_confining and d >= 3:
        # the outermost nodes must sit well above the well bottom
        rise = min(u[0], u[-1]) - u.min()
        if rise < 1.0:
            raise NonConfiningPotentialError(
                f"potential rises only {rise:.3g} between its minimum and the edge nodes "
                f"q = {nodes[0]:.3g}, {nodes[-1]:.3g}")
    K = kinetic_term(d) + (V * u) @ V.conj().T
    return 0.5 * (K + K.conj().T)


def evolution_operator(t, d):
    """``exp(-i H t)`` with ``H = a_dag a``."""
    return rotate(t, d)


def heisenberg_quadratures(t, d):
    """``(q(t), p(t)) = (q cos t + p sin t, -q sin t + p cos t)``."""
    q, p = quadratures(d)
    c, s = math.cos(t), math.sin(t)
    return c * q + s * p, -s * q + c * p


def classical_flow(x0, t):
    """Oscillator flow of the phase-space point ``x0 = (p, q)`` for time ``t``."""
    p, q = x0
    c, s = math.cos(t), math.sin(t)
    return (-q * s + p * c, q * c + p * s)


@dataclass
class Trajectory:
    initial: tuple
    times: np.ndarray
    points: list = field(default_factory=list)

    def energies(self):
        return np.array([0.5 * (p * p + q * q) for p, q in self.points])


def trajectory(x0, times):
    times = np.asarray(times, dtype=float)
    return Trajectory(tuple(x0), times, [classical_flow(x0, t) for t in times])


def _heisenberg_phases(t, d):
    t = math.remainder(float(t), 2.0 * math.pi)
    u = np.exp(1j * t * np.arange(d))
    return np.outer(u, u.conj())


def heisenberg(A, t):
    """``e^{iHt} A e^{-iHt}``.

    H is diagonal, so this only rephases elements: ``A_mn -> A_mn e^{i(m-n)t}``.
    """
    A = np.asarray(A)
    return A * _heisenberg_phases(t, A.shape[0])


def evolve_projector(E, t, tol=PROJECTOR_TOL):
    """Heisenberg-picture evolution of a projector.

    For a displaced circular projector centred at ``(p, q)`` the result is the
    projector centred at ``classical_flow((p, q), -t)``.
    """
    E = np.asarray(E)
    if E.ndim != 2 or E.shape[0] != E.shape[1]:
        raise DimensionError("projector must be a square matrix")
    if hermiticity_defect(E) > tol or projector_defect(E) > tol:
        raise NotProjectorError("operator is not a projector")
    return heisenberg(E, t)
