import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from brlkit import (SystemRealization, classify_minimality, compute_similarity,
                    moment_match, scale_io, transform_system, truncate_operators,
                    verify_similarity)
from brlkit.exceptions import DimensionMismatch, MomentMismatch, NotMinimal
from brlkit.operators import reverse_blocks
from brlkit.sysmat import spectral_radius
from brlkit.testing import random_minimal, random_transform

from conftest import opnorm

ONE_DIM = SystemRealization([[0.5]], [[1.0]], [[1.0]], [[0.0]])
PADDED = SystemRealization(np.diag([0.5, 1 / 3]), [[1.0], [0.0]], [[1.0, 0.7]], [[0.0]])


def recover_pair(rng, n=None, cond=100.0):
    n = n or int(rng.integers(1, 7))
    a = random_minimal(rng, n, int(rng.integers(1, 4)), int(rng.integers(1, 4)), complex_=True)
    T = random_transform(rng, n, cond)
    return a, transform_system(a, T), T


class TestMomentMatch:
    def test_similar_systems(self, rng):
        a, b, _ = recover_pair(rng)
        assert moment_match(a, b)

    def test_padding_keeps_moments(self):
        assert moment_match(ONE_DIM, PADDED)

    def test_scaling_changes_moments(self):
        assert not moment_match(ONE_DIM, scale_io(ONE_DIM, 2))

    def test_io_dimension_check(self, rng):
        with pytest.raises(DimensionMismatch):
            moment_match(ONE_DIM, random_minimal(rng, 2, 2, 1))


class TestComputeSimilarity:
    def test_same_system_gives_identity(self, rng):
        a = random_minimal(rng, 4, 2, 2, complex_=True)
        sim = compute_similarity(a, a)
        assert np.abs(sim.gamma - np.eye(4)).max() < 1e-12
        assert sim.valid

    def test_recovers_transform(self, rng):
        for _ in range(10):
            a, b, T = recover_pair(rng)
            sim = compute_similarity(a, b)
            assert opnorm(sim.gamma - T) <= 1e-7 * opnorm(T)
            assert sim.valid and sim.residuals.max() <= 1e-8

    def test_non_minimal_refused(self):
        with pytest.raises(NotMinimal):
            compute_similarity(PADDED, PADDED)

    def test_different_functions_refused(self, rng):
        a = random_minimal(rng, 3, 1, 1)
        with pytest.raises(MomentMismatch):
            compute_similarity(a, scale_io(a, 1.5))

    def test_different_dimension_refused(self, rng):
        a = random_minimal(rng, 3, 1, 1)
        b = random_minimal(rng, 2, 1, 1)
        with pytest.raises(MomentMismatch):
            compute_similarity(a, b)

    def test_larger_horizon_changes_nothing(self, rng):
        a, b, T = recover_pair(rng, n=3)
        g3 = compute_similarity(a, b).gamma
        g8 = compute_similarity(a, b, horizon=8).gamma
        assert np.abs(g3 - g8).max() < 1e-9


class TestVerify:
    def test_identity_zero_residuals(self, rng):
        a = random_minimal(rng, 3, 2, 2)
        res = verify_similarity(a, a, np.eye(3), np.eye(3))
        assert res.max() == 0

    def test_recovered_map(self, rng):
        a, b, _ = recover_pair(rng)
        sim = compute_similarity(a, b)
        assert verify_similarity(a, b, sim).max() <= 1e-8

    def test_corrupted_map(self, rng):
        a, b, _ = recover_pair(rng, n=4, cond=5)
        sim = compute_similarity(a, b)
        G = sim.gamma.copy()
        G[1, 2] += 1
        assert verify_similarity(a, b, G, sim.gamma_left).max() > 0.1

    def test_shape_check(self, rng):
        a = random_minimal(rng, 3, 2, 2)
        with pytest.raises(DimensionMismatch):
            verify_similarity(a, a, np.eye(2))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_similarity_identities(seed):
    rng = np.random.default_rng(seed)
    a, b, _ = recover_pair(rng)
    sim = compute_similarity(a, b)
    n, G, L = a.n_state, sim.gamma, sim.gamma_left
    tol = 1e-8 * (1 + opnorm(G)) * (1 + opnorm(L))
    assert opnorm(L @ G - np.eye(n)) <= tol
    assert opnorm(G @ L - np.eye(n)) <= tol
    ta, tb = truncate_operators(a, n), truncate_operators(b, n)
    assert opnorm(G @ ta.Wc - tb.Wc) <= tol * (1 + opnorm(ta.Wc))
    assert opnorm(b.C @ tb.Wc - a.C @ ta.Wc) <= tol * (1 + opnorm(ta.Wc))
    assert spectral_radius(a.A) == pytest.approx(spectral_radius(b.A), rel=1e-8)
    assert classify_minimality(b).minimal


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_passing_similarity_implies_moment_match(seed):
    rng = np.random.default_rng(seed)
    a, b, _ = recover_pair(rng)
    sim = compute_similarity(a, b)
    assert sim.valid
    k = a.n_state + b.n_state + 1
    scale = (1 + opnorm(a.A)) ** k * (1 + opnorm(sim.gamma)) ** 2 * (1 + opnorm(a.B))
    assert moment_match(a, b, k, tol=sim.tol * scale)


def test_composition(rng):
    a = random_minimal(rng, 4, 2, 2, complex_=True)
    T1, T2 = random_transform(rng, 4, 10), random_transform(rng, 4, 10)
    b = transform_system(a, T1)
    c = transform_system(b, T2)
    g_ab = compute_similarity(a, b).gamma
    g_bc = compute_similarity(b, c).gamma
    g_ac = compute_similarity(a, c).gamma
    assert opnorm(g_bc @ g_ab - g_ac) <= 1e-7 * opnorm(g_ac)


def test_wc_ordering_is_documented(rng):
    a = random_minimal(rng, 2, 1, 1)
    Wc = truncate_operators(a, 2).Wc
    assert np.allclose(reverse_blocks(Wc, 1)[:, 0], a.B[:, 0])
