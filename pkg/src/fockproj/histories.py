"""Decoherence functional for phase-space histories of exact projectors.

A history branch picks one alternative per time step; its class operator is
the time-ordered product of Heisenberg-picture projectors
``C_b = P_{a_n}(t_n) ... P_{a_1}(t_1)``, and
``D(b, b') = Tr(C_b rho C_{b'}^dag)``.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .dynamics import classical_flow, heisenberg
from .errors import InvalidHistoryError
from .fock import hermiticity_defect, projector_defect
from .phase_space import check_density
from .projector import displaced_projector

MAX_STEPS = 12
DEFAULT_TOL = 1e-9


@dataclass
class BranchAlternative:
    projector: np.ndarray
    label: str


@dataclass
class Step:
    time: float
    alternatives: list


@dataclass
class HistorySpec:
    steps: list
    rho0: np.ndarray = None

    @property
    def times(self):
        return [s.time for s in self.steps]

    @property
    def dim(self):
        return self.steps[0].alternatives[0].projector.shape[0]


@dataclass
class DecoherenceReport:
    branches: list
    functional: np.ndarray
    probabilities: np.ndarray
    max_offdiag: float
    tolerance: float
    decoherent: bool
    extra: dict = field(default_factory=dict)

    def probability(self, branch):
        return float(self.probabilities[self.branches.index(tuple(branch))])


def two_way_step(t, E, labels=("in", "out")):
    """Step with the alternatives ``{E, 1 - E}``."""
    E = np.asarray(E, dtype=complex)
    return Step(float(t), [BranchAlternative(E, labels[0]),
                           BranchAlternative(np.eye(E.shape[0]) - E, labels[1])])


def validate(spec, tol=1e-10):
    if not spec.steps:
        raise InvalidHistoryError("history has no steps")
    if len(spec.steps) > MAX_STEPS:
        raise InvalidHistoryError(f"more than {MAX_STEPS} steps; branch set too large")
    times = np.array(spec.times, dtype=float)
    if np.any(np.diff(times) <= 0):
        raise InvalidHistoryError("times must be strictly increasing")
    d = spec.dim
    for k, step in enumerate(spec.steps):
        labels = [a.label for a in step.alternatives]
        if len(set(labels)) != len(labels):
            raise InvalidHistoryError(f"step {k}: duplicate labels {labels}")
        total = np.zeros((d, d), dtype=complex)
        for a in step.alternatives:
            P = a.projector
            if P.shape != (d, d):
                raise InvalidHistoryError(f"step {k}: projector {a.label!r} has wrong shape")
            if hermiticity_defect(P) > tol or projector_defect(P) > tol:
                raise InvalidHistoryError(f"step {k}: {a.label!r} is not a projector")
            total += P
        if np.max(np.abs(total - np.eye(d))) > tol:
            raise InvalidHistoryError(f"step {k}: alternatives do not sum to the identity")
        for a, b in itertools.combinations(step.alternatives, 2):
            if np.max(np.abs(a.projector @ b.projector)) > tol:
                raise InvalidHistoryError(f"step {k}: {a.label!r} and {b.label!r} overlap")


def _lookup(step, label):
    for a in step.alternatives:
        if a.label == label:
            return a.projector
    raise InvalidHistoryError(f"unknown label {label!r} at time {step.time}")


def class_operator(spec, branch):
    """``P_{a_n}(t_n) ... P_{a_1}(t_1)`` for ``branch = (a_1, ..., a_n)``."""
    if len(branch) != len(spec.steps):
        raise InvalidHistoryError("branch needs one label per step")
    times = spec.times
    if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        raise InvalidHistoryError("times must be strictly increasing")
    C = np.eye(spec.dim, dtype=complex)
    for step, lab in zip(spec.steps, branch):
        C = heisenberg(_lookup(step, lab), step.time) @ C
    return C


def _all_class_operators(spec):
    # extend prefixes one step at a time so shared prefixes are multiplied once
    ops = {(): np.eye(spec.dim, dtype=complex)}
    for step in spec.steps:
        heis = [(a.label, heisenberg(a.projector, step.time)) for a in step.alternatives]
        ops = {pre + (lab,): P @ C for pre, C in ops.items() for lab, P in heis}
    return list(ops), np.stack(list(ops.values()))


def decoherence_functional(spec, tol=DEFAULT_TOL, rho0=None):
    """Full decoherence functional over every branch of ``spec``.

    ``decoherent`` is true when the largest off-diagonal modulus is at most
    ``tol`` times the largest diagonal entry.
    """
    validate(spec)
    rho = spec.rho0 if rho0 is None else rho0
    if rho is None:
        raise InvalidHistoryError("no initial density operator given")
    rho = check_density(rho)
    if rho.shape[0] != spec.dim:
        raise InvalidHistoryError("initial state dimension does not match the projectors")
    branches, C = _all_class_operators(spec)
    X = C @ rho
    D = np.einsum("bij,cij->bc", X, C.conj())
    diag = D.diagonal().real.copy()
    off = np.abs(D - np.diag(D.diagonal()))
    max_off = float(off.max()) if len(branches) > 1 else 0.0
    decoherent = max_off <= tol * float(diag.max())
    return DecoherenceReport(branches, D, diag, max_off, tol, bool(decoherent),
                             extra={"sum": complex(D.sum())})


def classical_history_spec(N, center, times, d, rho0=None):
    """Circular regions at ``classical_flow(center, t_i)`` and their complements."""
    times = [float(t) for t in times]
    if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        raise InvalidHistoryError("times must be strictly increasing")
    steps = [two_way_step(t, displaced_projector(N, classical_flow(center, t), d))
             for t in times]
    return HistorySpec(steps, rho0)


def misaligned_history_spec(N, center, times, offset, d, rho0=None):
    """Like :func:`classical_history_spec`, but the second region is shifted by ``offset``.

    Negative control: the shifted region is no longer the classical image of
    the first one.
    """
    if offset[0] == 0 and offset[1] == 0:
        raise InvalidHistoryError("offset must be non-zero")
    if len(times) < 2:
        raise InvalidHistoryError("misaligned history needs at least two times")
    spec = classical_history_spec(N, center, times, d, rho0)
    t = spec.steps[1].time
    p, q = classical_flow(center, t)
    shifted = (p + offset[0], q + offset[1])
    spec.steps[1] = two_way_step(t, displaced_projector(N, shifted, d))
    return spec
