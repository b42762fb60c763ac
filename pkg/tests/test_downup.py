import math
from itertools import combinations

import numpy as np
import pytest

from ndppmap import (
    ChainMatrix,
    DomainError,
    InfeasibilityError,
    Kernel,
    KernelDistribution,
    TableDistribution,
    UniformDistribution,
    apply_field,
    build_downup,
    conductance,
    sample_walk,
    spectral_gap,
    tv_distance,
)
from ndppmap.downup import chain_checks, cheeger_ok, empirical_density
from ndppmap.instances import random_field, random_npsd


class TestApplyField:
    def test_all_ones_identity(self):
        mu = KernelDistribution(random_npsd(5, 1), 2)
        nu = apply_field(mu, np.ones(5))
        for S in combinations(range(5), 2):
            assert nu.value(S) == pytest.approx(mu.value(S))

    def test_zero_entry_deletes(self):
        mu = UniformDistribution(4, 2)
        nu = apply_field(mu, [0.0, 1.0, 1.0, 1.0])
        assert nu.value((0, 1)) == 0.0
        assert nu.value((1, 2)) == 1.0

    def test_infinite_entry_forces(self):
        mu = UniformDistribution(4, 2)
        nu = apply_field(mu, [math.inf, 1.0, 1.0, 1.0])
        assert nu.value((1, 2)) == 0.0
        assert nu.value((0, 2)) == 1.0

    def test_ratios_are_products(self):
        mu = KernelDistribution(random_npsd(6, 4), 3)
        lam = random_field(6, seed=2)
        nu = apply_field(mu, lam)
        for S in combinations(range(6), 3):
            expect = mu.value(S) * np.prod([lam[i] for i in S])
            assert nu.value(S) == pytest.approx(expect, rel=1e-12)

    def test_empty_support_rejected(self):
        mu = UniformDistribution(4, 2)
        with pytest.raises(InfeasibilityError):
            apply_field(mu, [0.0, 0.0, 0.0, 0.0])

    def test_negative_field_rejected(self):
        mu = UniformDistribution(4, 2)
        with pytest.raises(DomainError):
            apply_field(mu, [-1.0, 1.0, 1.0, 1.0])


class TestBuildDownup:
    def test_uniform_three_states(self):
        C = build_downup(UniformDistribution(3, 2), 3, 2, 1)
        # each off-diagonal neighbor reached with prob 1/2 * 1/2, self-loop 1/2
        expect = np.full((3, 3), 0.25)
        np.fill_diagonal(expect, 0.5)
        assert np.allclose(C.P, expect)
        assert np.allclose(C.pi, 1.0 / 3.0)

    def test_k_equals_l_identity(self):
        C = build_downup(UniformDistribution(4, 2), 4, 2, 2)
        assert np.array_equal(C.P, np.eye(6))

    def test_stationarity_seeded(self):
        mu = KernelDistribution(random_npsd(6, 8), 3)
        C = build_downup(mu, 6, 3, 1)
        assert np.max(np.abs(C.pi @ C.P - C.pi)) <= 1e-10

    def test_chain_validity_checks(self):
        mu = KernelDistribution(random_npsd(7, 3), 3)
        for l in (1, 2):
            rep = chain_checks(build_downup(mu, 7, 3, l), 7, 3, l)
            assert rep["ok"], rep
            assert rep["gap"] > 0.0

    def test_field_commutation(self):
        mu = KernelDistribution(random_npsd(6, 11), 2)
        lam = random_field(6, seed=5)
        nu = apply_field(mu, lam)
        C = build_downup(nu, 6, 2, 1)
        expect = np.array([nu.value(S) for S in C.states])
        assert np.allclose(C.pi, expect / expect.sum(), atol=1e-12)


class TestSpectralGap:
    def test_identity_chain(self):
        C = build_downup(UniformDistribution(4, 2), 4, 2, 2)
        assert spectral_gap(C) == pytest.approx(0.0, abs=1e-12)

    def test_two_state_closed_form(self):
        p, q = 0.3, 0.2
        P = np.array([[1 - p, p], [q, 1 - q]])
        pi = np.array([q, p]) / (p + q)
        C = ChainMatrix([(0,), (1,)], P, pi)
        assert spectral_gap(C) == pytest.approx(p + q)

    def test_matches_independent_eigensolver(self):
        C = build_downup(UniformDistribution(4, 2), 4, 2, 1)
        ev = np.sort(np.real(np.linalg.eigvals(C.P)))
        assert spectral_gap(C) == pytest.approx(1.0 - ev[-2], abs=1e-9)


class TestConductance:
    def test_two_state_symmetric(self):
        P = np.array([[0.5, 0.5], [0.5, 0.5]])
        C = ChainMatrix([(0,), (1,)], P, np.array([0.5, 0.5]))
        res = conductance(C)
        assert res.exact and res.value == pytest.approx(0.5)

    def test_cheeger_sandwich(self):
        mu = KernelDistribution(random_npsd(6, 13), 2)
        C = build_downup(mu, 6, 2, 1)
        res = conductance(C)
        gap = spectral_gap(C)
        assert res.exact
        assert cheeger_ok(gap, res)
        assert res.value**2 / 2 <= gap + 1e-9 <= 2 * res.value + 1e-9

    def test_disconnected_support(self):
        mu = TableDistribution(4, 2, {(0, 1): 1.0, (2, 3): 1.0})
        C = build_downup(mu, 4, 2, 1)
        res = conductance(C)
        assert res.value == pytest.approx(0.0, abs=1e-12)
        assert spectral_gap(C) == pytest.approx(0.0, abs=1e-12)

    def test_capacity_returns_flagged_bounds(self):
        mu = KernelDistribution(random_npsd(6, 13), 2)
        C = build_downup(mu, 6, 2, 1)
        res = conductance(C, state_cap=5)
        gap = spectral_gap(C)
        assert not res.exact and res.value is None
        assert res.lower == pytest.approx(gap / 2)
        assert res.upper == pytest.approx(math.sqrt(2 * gap))


class TestSampleWalk:
    def test_k_equals_l_constant(self):
        mu = UniformDistribution(5, 2)
        traj = sample_walk(mu, (1, 3), 2, 50, seed=0)
        assert traj == [(1, 3)] * 51

    def test_reproducible_per_seed(self):
        mu = KernelDistribution(random_npsd(6, 17), 3)
        a = sample_walk(mu, (0, 1, 2), 1, 200, seed=42)
        b = sample_walk(mu, (0, 1, 2), 1, 200, seed=42)
        c = sample_walk(mu, (0, 1, 2), 1, 200, seed=43)
        assert a == b
        assert a != c

    def test_uniform_frequencies(self):
        mu = UniformDistribution(5, 2)
        traj = sample_walk(mu, (0, 1), 1, 20000, seed=7)
        states = list(combinations(range(5), 2))
        emp = empirical_density(traj, states)
        assert tv_distance(emp, np.full(len(states), 0.1)) < 0.05

    def test_zero_start_rejected(self):
        mu = TableDistribution(4, 2, {(0, 1): 1.0})
        with pytest.raises(DomainError):
            sample_walk(mu, (2, 3), 1, 10, seed=0)


class TestTvDistance:
    def test_equal(self):
        assert tv_distance([0.5, 0.5], [0.5, 0.5]) == 0.0

    def test_disjoint_point_masses(self):
        assert tv_distance([1.0, 0.0], [0.0, 1.0]) == 1.0

    def test_direct_formula(self):
        assert tv_distance([0.5, 0.5], [0.75, 0.25]) == pytest.approx(0.25)

    def test_dict_supports(self):
        assert tv_distance({"a": 0.5, "b": 0.5}, {"a": 0.75, "b": 0.25}) == pytest.approx(0.25)
        with pytest.raises(DomainError):
            tv_distance({"a": 1.0}, {"b": 1.0})

    def test_mismatched_lengths(self):
        with pytest.raises(DomainError):
            tv_distance([1.0], [0.5, 0.5])
