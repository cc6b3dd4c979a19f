import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fockproj import fock
from fockproj.dynamics import classical_flow, heisenberg
from fockproj.errors import InvalidDensityError, InvalidHistoryError
from fockproj.histories import (
    HistorySpec, Step, BranchAlternative, class_operator, classical_history_spec,
    decoherence_functional, misaligned_history_spec, two_way_step,
)
from fockproj.phase_space import husimi
from fockproj.projector import displaced_projector, exact_projector

D = 96


def coherent_density(z, d=D):
    psi = fock.coherent_state(z, d)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def thermal(nbar, d=D):
    w = (nbar / (1 + nbar)) ** np.arange(d)
    return np.diag(w / w.sum()).astype(complex)


def explicit_functional(spec, rho):
    """Branch-by-branch traces with freshly built class operators."""
    import itertools
    labels = [[a.label for a in s.alternatives] for s in spec.steps]
    branches = list(itertools.product(*labels))
    ops = [class_operator(spec, b) for b in branches]
    return branches, np.array([[np.trace(Cb @ rho @ Cc.conj().T) for Cc in ops] for Cb in ops])


class TestClassOperator:
    def test_single_step(self):
        E = displaced_projector(3, (1.0, 0.0), 48)
        spec = HistorySpec([two_way_step(0.8, E)])
        assert np.max(np.abs(class_operator(spec, ("in",)) - heisenberg(E, 0.8))) == 0.0

    def test_aligned_chain_collapses(self):
        N, c = 4, (0.5, 1.5)
        spec = classical_history_spec(N, c, [0.0, 1.0, 2.5], D)
        C = class_operator(spec, ("in", "in", "in"))
        assert np.max(np.abs(C - displaced_projector(N, c, D))) <= 1e-9

    def test_mixed_branch_vanishes(self):
        spec = classical_history_spec(4, (0.5, 1.5), [0.0, 1.0], D)
        assert np.max(np.abs(class_operator(spec, ("in", "out")))) <= 1e-9
        assert np.max(np.abs(class_operator(spec, ("out", "in")))) <= 1e-9

    def test_unknown_label(self):
        spec = classical_history_spec(2, (0.0, 0.0), [0.0, 1.0], 24)
        with pytest.raises(InvalidHistoryError):
            class_operator(spec, ("in", "maybe"))
        with pytest.raises(InvalidHistoryError):
            class_operator(spec, ("in",))


class TestDecoherenceFunctional:
    def test_matches_explicit_traces(self):
        rho = thermal(1.5)
        spec = classical_history_spec(5, (0.3, 1.0), [0.0, 0.9, 2.0], D, rho)
        rep = decoherence_functional(spec)
        branches, ref = explicit_functional(spec, rho)
        assert rep.branches == branches
        assert np.max(np.abs(rep.functional - ref)) <= 1e-13

    def test_aligned_coherent_state(self):
        N, c = 5, (0.0, 1.0)
        spec = classical_history_spec(N, c, [0.0, math.pi / 2, math.pi], D,
                                      coherent_density(fock.label(*c)))
        rep = decoherence_functional(spec)
        assert rep.decoherent
        assert rep.max_offdiag <= 1e-9 * rep.probabilities.max()

    def test_in_chain_probability_is_region_probability(self):
        N, c = 5, (1.0, -0.5)
        z = 0.8 + 1.1j
        rho = coherent_density(z)
        rep = decoherence_functional(classical_history_spec(N, c, [0.0, 1.3], D, rho))
        E = displaced_projector(N, c, D)
        assert abs(rep.probability(("in", "in")) - np.trace(E @ rho).real) <= 1e-12
        assert abs(rep.probability(("in", "in")) - husimi(E, z)) <= 1e-9

    def test_determinism(self):
        N, c = 5, (0.5, 2.0)
        E = displaced_projector(N, c, D)
        rep = decoherence_functional(
            classical_history_spec(N, c, [0.0, 0.7, 1.9, 3.0], D, E / (N + 1)))
        probs = dict(zip(rep.branches, rep.probabilities))
        assert abs(probs.pop(("in",) * 4) - 1.0) <= 1e-9
        assert max(probs.values()) <= 1e-9

    def test_sum_rule_and_hermiticity(self):
        rng = np.random.default_rng(3)
        v = rng.normal(size=D) + 1j * rng.normal(size=D)
        v *= np.exp(-0.05 * np.arange(D))
        rho = np.outer(v, v.conj()) / np.vdot(v, v).real
        rep = decoherence_functional(
            misaligned_history_spec(4, (0.0, 1.0), [0.0, 0.5, 1.7], (1.0, 0.0), D, rho))
        F = rep.functional
        assert abs(F.sum() - 1.0) <= 1e-10
        assert abs(rep.extra["sum"] - 1.0) <= 1e-10
        assert np.max(np.abs(F - F.conj().T)) <= 1e-15
        assert rep.probabilities.min() >= -1e-12

    @settings(max_examples=12, deadline=None)
    @given(N=st.sampled_from([3, 8]), nsteps=st.integers(2, 4), seed=st.integers(0, 2 ** 31),
           pure=st.booleans(), data=st.data())
    def test_exact_decoherence_for_random_states(self, N, nsteps, seed, pure, data):
        rng = np.random.default_rng(seed)
        gaps = data.draw(st.lists(st.floats(0.1, 1.5), min_size=nsteps, max_size=nsteps))
        times = np.cumsum(gaps) - gaps[0]
        ang = rng.uniform(0, 2 * math.pi)
        rad = math.sqrt(2 * rng.uniform(0, 8))
        c = (rad * math.sin(ang), rad * math.cos(ang))
        if pure:
            v = rng.normal(size=D) + 1j * rng.normal(size=D)
            v *= np.exp(-0.04 * np.arange(D))
            rho = np.outer(v, v.conj()) / np.vdot(v, v).real
        else:
            w = rng.uniform(size=D) * np.exp(-0.05 * np.arange(D))
            rho = np.diag(w / w.sum()).astype(complex)
        rep = decoherence_functional(classical_history_spec(N, c, times, D, rho))
        assert rep.max_offdiag <= 1e-9 * rep.probabilities.max()
        assert abs(rep.probabilities.sum() - 1.0) <= 1e-10


class TestClassicalHistorySpec:
    def test_single_step_at_origin(self):
        spec = classical_history_spec(4, (0.0, 0.0), [0.0], 20)
        assert len(spec.steps) == 1
        np.testing.assert_allclose(spec.steps[0].alternatives[0].projector,
                                   exact_projector(4, 20), atol=1e-15)

    def test_alternatives_complete(self):
        spec = classical_history_spec(3, (1.0, 1.0), [0.0, 0.4, 2.0], 64)
        for step in spec.steps:
            total = sum(a.projector for a in step.alternatives)
            assert np.max(np.abs(total - np.eye(64))) == 0.0

    def test_centers_follow_flow(self):
        c, t = (1.0, 0.0), 0.9
        spec = classical_history_spec(2, c, [0.0, t], 64)
        ref = displaced_projector(2, classical_flow(c, t), 64)
        np.testing.assert_allclose(spec.steps[1].alternatives[0].projector, ref, atol=1e-15)

    def test_non_increasing_times(self):
        with pytest.raises(InvalidHistoryError):
            classical_history_spec(2, (0, 0), [0.0, 0.0], 16)


class TestMisaligned:
    def test_zero_offset_rejected(self):
        with pytest.raises(InvalidHistoryError):
            misaligned_history_spec(5, (0.0, 1.0), [0.0, 1.0], (0.0, 0.0), D)

    def test_large_offset(self):
        N = 5
        R = math.sqrt(N + 1)
        c = (0.0, 1.0)
        spec = misaligned_history_spec(N, c, [0.0, 1.0], (0.0, 4 * R), D,
                                       coherent_density(fock.label(*c)))
        rep = decoherence_functional(spec)
        assert rep.max_offdiag <= 1e-9
        assert rep.probability(("in", "in")) < 1.0 - 1e-3
        assert rep.probability(("in", "out")) > 0.9

    def test_negative_control_golden(self):
        # golden value recorded at bring-up: N = 5, thermal nbar = 2, offset one radius
        N = 5
        spec = misaligned_history_spec(N, (0.0, 2.0), [0.0, 1.0], (0.0, math.sqrt(2 * N)),
                                       D, thermal(2.0))
        rep = decoherence_functional(spec)
        ratio = rep.max_offdiag / rep.probabilities.max()
        assert ratio > 1e-3
        assert ratio == pytest.approx(0.023487246423669377, rel=1e-6)
        assert not rep.decoherent


class TestValidation:
    def test_missing_density(self):
        with pytest.raises(InvalidHistoryError):
            decoherence_functional(classical_history_spec(2, (0, 0), [0.0], 16))

    def test_bad_density(self):
        spec = classical_history_spec(2, (0, 0), [0.0], 16, np.eye(16))
        with pytest.raises(InvalidDensityError):
            decoherence_functional(spec)

    def test_incomplete_step(self):
        E = exact_projector(2, 8)
        step = Step(0.0, [BranchAlternative(E, "in")])
        with pytest.raises(InvalidHistoryError):
            decoherence_functional(HistorySpec([step], np.eye(8) / 8))

    def test_overlapping_alternatives(self):
        E = exact_projector(2, 8)
        F = exact_projector(3, 8)
        G = np.eye(8) - F
        step = Step(0.0, [BranchAlternative(E, "a"), BranchAlternative(F - E, "b"),
                          BranchAlternative(G, "c")])
        # a valid three-way split passes
        rep = decoherence_functional(HistorySpec([step], np.eye(8) / 8))
        assert rep.probability(("a",)) == pytest.approx(3 / 8)
        bad = Step(0.0, [BranchAlternative(E, "a"), BranchAlternative(F, "b"),
                         BranchAlternative(G - E, "c")])
        with pytest.raises(InvalidHistoryError):
            decoherence_functional(HistorySpec([bad], np.eye(8) / 8))

    def test_too_many_steps(self):
        steps = [two_way_step(float(t), exact_projector(1, 4)) for t in range(13)]
        with pytest.raises(InvalidHistoryError):
            decoherence_functional(HistorySpec(steps, np.eye(4) / 4))

    def test_decreasing_times(self):
        E = exact_projector(1, 4)
        spec = HistorySpec([two_way_step(1.0, E), two_way_step(0.5, E)], np.eye(4) / 4)
        with pytest.raises(InvalidHistoryError):
            decoherence_functional(spec)
