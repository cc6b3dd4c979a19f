"""Truncated Fock-space linear algebra.

States are complex vectors of length ``d`` and operators are dense complex
``d x d`` arrays in the number basis ``|0>, ..., |d-1>``, with element
``(m, n) = <m|A|n>``. Units have hbar = 1 and the oscillator
``K = (p^2 + q^2) / 2``; coherent-state labels are ``z = (q + i p) / sqrt(2)``.
"""

import math

import numpy as np
from scipy.special import gammaln

from .errors import DimensionError, NotHermitianError
from .special import poisson_sf_profile

HERMITIAN_TOL = 1e-10


def _check_dim(d):
    if int(d) != d or d < 1:
        raise DimensionError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


def label(p, q):
    """Coherent-state label of the phase-space point ``(p, q)``."""
    return complex(q, p) / math.sqrt(2.0)


def point(z):
    """Inverse of :func:`label`: returns ``(p, q)``."""
    z = complex(z)
    return math.sqrt(2.0) * z.imag, math.sqrt(2.0) * z.real


def required_dim(rank_minus_one, z=0.0):
    """Smallest working dimension accepted for a rank ``N + 1`` projector at ``z``."""
    return int(math.ceil(rank_minus_one + max(4.0 * abs(z) ** 2, 25.0)))


def number_state(n, d):
    d = _check_dim(d)
    if not 0 <= n < d:
        raise DimensionError(f"number state |{n}> outside dimension {d}")
    psi = np.zeros(d, dtype=complex)
    psi[n] = 1.0
    return psi


def coherent_state(z, d):
    """Truncated coherent state, ``<n|z> = z^n / sqrt(n!) exp(-|z|^2 / 2)``.

    The amplitudes are the exact infinite-space ones; nothing is renormalized,
    so the norm deficit equals :func:`coherent_tail`.
    """
    d = _check_dim(d)
    z = complex(z)
    r = abs(z)
    psi = np.zeros(d, dtype=complex)
    if r == 0.0:
        psi[0] = 1.0
        return psi
    n = np.arange(d)
    log_mod = n * math.log(r) - 0.5 * r * r - 0.5 * gammaln(n + 1)
    psi[:] = np.exp(log_mod) * np.exp(1j * n * math.atan2(z.imag, z.real))
    return psi


def coherent_tail(z, d):
    """Poisson tail ``sum_{n >= d} |z|^{2n} e^{-|z|^2} / n!`` lost to truncation."""
    d = _check_dim(d)
    return float(poisson_sf_profile(abs(complex(z)) ** 2, d)[d - 1])


def ladder_ops(d):
    """Annihilation and creation operators ``(a, a_dag)``."""
    d = _check_dim(d)
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(complex)
    return a, a.conj().T.copy()


def number_op(d):
    d = _check_dim(d)
    return np.diag(np.arange(d, dtype=float)).astype(complex)


def quadratures(d):
    """Position and momentum ``(q, p)`` built from the truncated ladder operators."""
    a, ad = ladder_ops(d)
    q = (a + ad) / math.sqrt(2.0)
    p = (a - ad) / (1j * math.sqrt(2.0))
    return q, p


def hermiticity_defect(A):
    A = np.asarray(A)
    return float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0


def is_hermitian(A, tol=HERMITIAN_TOL):
    return hermiticity_defect(A) <= tol


def unitarity_defect(W):
    W = np.asarray(W)
    return float(np.max(np.abs(W.conj().T @ W - np.eye(W.shape[0]))))


def projector_defect(E):
    """``max |E^2 - E|`` entrywise."""
    E = np.asarray(E)
    return float(np.max(np.abs(E @ E - E)))


def is_projector(E, tol=1e-10):
    return hermiticity_defect(E) <= tol and projector_defect(E) <= tol


def eigh(A, tol=HERMITIAN_TOL):
    """Ascending eigenvalues and unitary eigenvector matrix of a Hermitian operator.

    Raises NotHermitianError if ``max |A - A^dag|`` exceeds ``tol``.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"operator must be square, got shape {A.shape}")
    defect = hermiticity_defect(A)
    if defect > tol:
        raise NotHermitianError(f"operator is not Hermitian (defect {defect:.3g})")
    # symmetrize so LAPACK sees an exactly Hermitian input
    evals, evecs = np.linalg.eigh(0.5 * (A + A.conj().T))
    return evals, evecs


def expi(G, s=1.0):
    """``exp(i s G)`` for Hermitian ``G``, via its eigendecomposition.

    Exponentiating real eigenvalues keeps the result unitary to rounding,
    unlike a truncated power series.
    """
    evals, V = eigh(G)
    return (V * np.exp(1j * s * evals)) @ V.conj().T


def displacement(p, q, d):
    """``U(p, q) = exp(i p q_op - i q p_op)``; maps ``|0>`` to ``|z>`` with ``z = label(p, q)``."""
    qop, pop = quadratures(d)
    return expi(p * qop - q * pop)


def squeeze(xi, d):
    """``S(xi) = exp((xi^* a^2 - xi a_dag^2) / 2)``.

    For real ``xi = r > 0`` this narrows q by ``e^{-r}`` and stretches p by ``e^{r}``.
    """
    a, ad = ladder_ops(d)
    xi = complex(xi)
    gen = 0.5 * (xi.conjugate() * (a @ a) - xi * (ad @ ad))  # anti-Hermitian
    return expi(-1j * gen)


def rotate(theta, d):
    """``exp(-i theta a_dag a)``: rotates phase-space labels ``z -> z e^{-i theta}``.

    This is the oscillator propagator for time ``theta`` with the zero-point
    phase dropped.
    """
    d = _check_dim(d)
    theta = math.remainder(float(theta), 2.0 * math.pi)
    return np.diag(np.exp(-1j * theta * np.arange(d)))
