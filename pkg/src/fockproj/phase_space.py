"""Wigner and Husimi representations, trace overlaps and region probabilities.

Wigner convention: ``W_A(p, q) = Tr[A U(p,q) Pi U(p,q)^dag] / pi`` with ``Pi``
the parity operator, so that ``int W_A dp dq = Tr A`` and
``Tr(AB) = 2 pi int W_A W_B dp dq``.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import gammaln

from .errors import FockError, InvalidDensityError, NotHermitianError, NotProjectorError
from .fock import HERMITIAN_TOL, coherent_state, hermiticity_defect, projector_defect
from .special import laguerre_sequence

CHUNK = 4096


@dataclass
class PhaseGrid:
    """Values on a tensor grid; ``values[i, j]`` sits at ``(p_axis[i], q_axis[j])``."""

    p_axis: np.ndarray
    q_axis: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.p_axis = np.asarray(self.p_axis, dtype=float)
        self.q_axis = np.asarray(self.q_axis, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        for name, ax in (("p_axis", self.p_axis), ("q_axis", self.q_axis)):
            if ax.ndim != 1 or ax.size < 2 or np.any(np.diff(ax) <= 0):
                raise FockError(f"{name} must be strictly increasing with at least 2 points")
        if self.values.shape != (self.p_axis.size, self.q_axis.size):
            raise FockError("values shape does not match the axes")

    def integrate(self, weight=None):
        """Trapezoid-rule integral of ``values`` (optionally times ``weight``) over the grid."""
        f = self.values if weight is None else self.values * weight
        return float(trapezoid(trapezoid(f, self.q_axis, axis=1), self.p_axis))

    def mesh(self):
        """``(P, Q)`` coordinate arrays shaped like ``values``."""
        return np.meshgrid(self.p_axis, self.q_axis, indexing="ij")


@dataclass
class CoherentMixture:
    """Point-mass P-function ``rho = sum_i w_i |z_i><z_i|``."""

    weights: tuple
    labels: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.size == 0 or w.size != len(self.labels):
            raise FockError("mixture needs matching, non-empty weights and labels")
        if np.any(w <= 0):
            raise FockError("mixture weights must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise FockError(f"mixture weights sum to {w.sum()!r}, not 1")


def _require_hermitian(A):
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise FockError("operator must be square")
    if hermiticity_defect(A) > HERMITIAN_TOL:
        raise NotHermitianError("operator is not Hermitian")
    return A


def _support(A, tol=0.0):
    """1 + the largest index touched by a non-zero entry of ``A``."""
    mask = np.abs(A) > tol
    rows = np.nonzero(mask.any(axis=1) | mask.any(axis=0))[0]
    return int(rows[-1]) + 1 if rows.size else 0


def _wigner_alpha(A, alpha):
    """Wigner values of ``A`` at coherent labels ``alpha`` (1-d complex array).

    Uses ``D(alpha) Pi D(alpha)^dag = D(2 alpha) Pi`` and the closed form of the
    displacement matrix elements. Along each diagonal ``m = n + k`` the
    normalized Laguerre functions

        phi_n = sqrt(n! / (n + k)!) x^{k/2} e^{-x/2} L_n^{(k)}(x),   x = |2 alpha|^2

    obey a three-term recurrence in ``n`` that is run forward (the stable
    direction). These are the infinite-space matrix elements, so the result is
    the exact Wigner function of the finite matrix ``A``.
    """
    dim = _support(A)
    acc = np.zeros(alpha.shape)
    if dim == 0:
        return acc
    A = A[:dim, :dim]
    beta = 2.0 * alpha
    x = np.abs(beta) ** 2
    half_logx = np.where(x > 0, 0.5 * np.log(np.where(x > 0, x, 1.0)), -np.inf)
    phase = np.exp(1j * np.angle(beta))
    sign = (-1.0) ** np.arange(dim)
    for k in range(dim):
        coef = np.diagonal(A, offset=k)  # A[n, n + k]
        if not np.any(coef):
            continue
        coef = coef * sign[:coef.size]
        if k == 0:
            phi_prev = np.exp(-0.5 * x)
        else:
            phi_prev = np.exp(k * half_logx - 0.5 * x - 0.5 * gammaln(k + 1))
        s = coef[0] * phi_prev
        if coef.size > 1:
            phi = (1.0 + k - x) * phi_prev / np.sqrt(k + 1.0)
            s = s + coef[1] * phi
            for n in range(1, coef.size - 1):
                nxt = ((2 * n + k + 1 - x) * phi
                       - np.sqrt(n * (n + k)) * phi_prev) / np.sqrt((n + 1.0) * (n + k + 1))
                phi_prev, phi = phi, nxt
                s = s + coef[n + 1] * phi
        if k == 0:
            acc += s.real
        else:
            acc += 2.0 * (s * phase ** k).real
    return acc / math.pi


def wigner_point(A, x):
    """Wigner function of the Hermitian operator ``A`` at ``x = (p, q)``."""
    A = _require_hermitian(A)
    p, q = x
    alpha = np.array([complex(q, p) / math.sqrt(2.0)])
    return float(_wigner_alpha(A, alpha)[0])


def _worker_count(workers):
    if workers is None:
        workers = int(os.environ.get("FOCKPROJ_THREADS", "1") or 1)
    if workers == 0:
        workers = os.cpu_count() or 1
    return max(1, int(workers))


def _map_chunks(fn, flat, workers):
    chunks = [flat[i:i + CHUNK] for i in range(0, flat.size, CHUNK)]
    workers = _worker_count(workers)
    if workers == 1 or len(chunks) == 1:
        parts = [fn(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, chunks))
    return np.concatenate(parts)


def wigner_grid(A, p_axis, q_axis, workers=None):
    """Wigner function on the tensor grid ``p_axis x q_axis``.

    Cells are independent; ``workers`` (default: ``FOCKPROJ_THREADS``, 0 = all
    cores) splits the grid into chunks evaluated in a thread pool. The result
    does not depend on the worker count.
    """
    A = _require_hermitian(A)
    p_axis = np.asarray(p_axis, dtype=float)
    q_axis = np.asarray(q_axis, dtype=float)
    P, Q = np.meshgrid(p_axis, q_axis, indexing="ij")
    alpha = ((Q + 1j * P) / math.sqrt(2.0)).ravel()
    vals = _map_chunks(lambda chunk: _wigner_alpha(A, chunk), alpha, workers)
    return PhaseGrid(p_axis, q_axis, vals.reshape(P.shape),
                     meta={"kind": "wigner", "normalization": "int W dp dq = Tr A"})


def wigner_series_circular(N, r2):
    """``sum_{n<=N} (-1)^n L_n(r^2) e^{-r^2/2} / pi``, the Wigner function of ``E_N``.

    ``r2 = 2 (p^2 + q^2)``; accepts scalars or arrays.
    """
    r2 = np.asarray(r2, dtype=float)
    if np.any(r2 < 0):
        raise FockError("r2 must be non-negative")
    L = laguerre_sequence(int(N), r2, scale=np.exp(-0.5 * r2))
    signs = (-1.0) ** np.arange(N + 1)
    val = np.tensordot(signs, L, axes=1) / math.pi
    return float(val) if val.ndim == 0 else val


def husimi(A, z):
    """``<z|A|z>`` with the coherent state truncated to the dimension of ``A``."""
    A = _require_hermitian(A)
    psi = coherent_state(z, A.shape[0])
    return float(np.vdot(psi, A @ psi).real)


def _coherent_rows(alpha, d):
    """Coherent-state amplitudes for many labels at once, shape ``(len(alpha), d)``."""
    n = np.arange(d)
    r = np.abs(alpha)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        logr = np.log(r)
        logmod = np.where(r > 0, n * logr, np.where(n == 0, 0.0, -np.inf))
    logmod = logmod - 0.5 * r * r - 0.5 * gammaln(n + 1)
    return np.exp(logmod) * np.exp(1j * n * np.angle(alpha)[:, None])


def husimi_grid(A, p_axis, q_axis, workers=None):
    A = _require_hermitian(A)
    p_axis = np.asarray(p_axis, dtype=float)
    q_axis = np.asarray(q_axis, dtype=float)
    P, Q = np.meshgrid(p_axis, q_axis, indexing="ij")
    alpha = ((Q + 1j * P) / math.sqrt(2.0)).ravel()
    d = A.shape[0]

    def chunk_values(chunk):
        Z = _coherent_rows(chunk, d)
        return np.einsum("gm,gm->g", Z.conj(), Z @ A.T).real

    vals = _map_chunks(chunk_values, alpha, workers)
    return PhaseGrid(p_axis, q_axis, vals.reshape(P.shape),
                     meta={"kind": "husimi", "normalization": "Q = <z|A|z>"})


def trace_overlap(A, B):
    """``Tr(AB)`` without forming the product."""
    return complex(np.sum(np.asarray(A) * np.asarray(B).T))


def check_density(rho, tol=1e-10):
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidDensityError("density operator must be square")
    if hermiticity_defect(rho) > tol:
        raise InvalidDensityError("density operator is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise InvalidDensityError(f"density operator has trace {tr!r}")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] < -tol:
        raise InvalidDensityError("density operator has a negative eigenvalue")
    return rho


def region_probability(rho, E, tol=1e-10, raw=False):
    """``Tr(E rho)`` clamped to [0, 1]; ``raw=True`` returns ``(clamped, raw)``."""
    rho = check_density(rho, tol)
    E = np.asarray(E, dtype=complex)
    if E.shape != rho.shape:
        raise FockError("rho and E have different dimensions")
    if hermiticity_defect(E) > tol or projector_defect(E) > tol:
        raise NotProjectorError("E is not a projector")
    value = trace_overlap(E, rho).real
    clamped = min(max(value, 0.0), 1.0)
    return (clamped, value) if raw else clamped


def pfunction_probability(mix, N):
    """Region probability of a point-mass P-function mixture for ``E_N``.

    Returns ``(exact, cutoff)``: the exact ``sum_i w_i <z_i|E_N|z_i>`` and the
    sharp-boundary estimate ``sum_{|z_i|^2 <= N} w_i``. The boundary is closed so
    that the vacuum counts as inside ``E_0``.
    """
    from .projector import exact_projector

    E = exact_projector(N, N + 1)
    exact = sum(w * husimi(E, z) for w, z in zip(mix.weights, mix.labels))
    cutoff = sum(w for w, z in zip(mix.weights, mix.labels) if abs(z) ** 2 <= N)
    return float(exact), float(cutoff)
