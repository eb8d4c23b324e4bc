import numpy as np
import pytest
from numpy.linalg import matrix_power

from brlkit import (SystemRealization, adjoint_system, augment, classify_minimality,
                    controllability_gramian, divergence_probe, eval_transfer,
                    kalman_minimal, observability_gramian, reverse_blocks, shift_probe,
                    transfer_on_points, transform_system, truncate_operators)
from brlkit.exceptions import UnstableSystem
from brlkit.operators import numerical_rank
from brlkit.sysmat import spectral_radius
from brlkit.testing import (random_contractive, random_dims, random_minimal,
                            random_stable, random_transform)

from conftest import disk_points, opnorm

DIAG_EXAMPLE = SystemRealization(np.diag([0.5, 1 / 3]), [[1.0], [0.0]], [[1.0, 0.0]], [[0.0]])


class TestTruncation:
    def test_horizon_one(self, rng):
        sys = random_stable(rng, 3, 2, 2)
        tr = truncate_operators(sys, 1)
        assert np.array_equal(tr.Wc, sys.B)
        assert np.array_equal(tr.Wo, sys.C)
        assert np.allclose(tr.hankel, sys.C @ sys.B, atol=1e-15)

    def test_scalar_powers(self):
        sys = SystemRealization([[2.0]], [[1.0]], [[1.0]], [[0.0]])
        tr = truncate_operators(sys, 3)
        assert np.array_equal(tr.hankel.real, [[1, 2, 4], [2, 4, 8], [4, 8, 16]])
        assert np.array_equal(tr.Wc.real, [[4, 2, 1]])

    def test_block_layout(self, rng):
        sys = random_stable(rng, 3, 2, 2)
        N = 4
        tr = truncate_operators(sys, N)
        for k in range(N):
            block = tr.Wc[:, k * 2:(k + 1) * 2]
            assert np.allclose(block, matrix_power(sys.A, N - 1 - k) @ sys.B, atol=1e-14)
        for i in range(N):
            for j in range(N):
                blk = tr.hankel[2 * i:2 * i + 2, 2 * j:2 * j + 2]
                ref = sys.C @ matrix_power(sys.A, i + j) @ sys.B
                assert np.allclose(blk, ref, atol=1e-13)

    def test_factorization(self, rng):
        for _ in range(30):
            n, m, p = random_dims(rng)
            sys = random_stable(rng, n, m, p, complex_=True)
            N = int(rng.integers(1, 17))
            tr = truncate_operators(sys, N)
            fact = tr.Wo @ reverse_blocks(tr.Wc, m)
            assert np.linalg.norm(tr.hankel - fact) <= 1e-12 * np.linalg.norm(tr.hankel)

    def test_contractive_system_has_contractive_operators(self, rng):
        for _ in range(20):
            sys = random_contractive(rng, 4, 2, 3)
            tr = truncate_operators(sys, 12)
            assert opnorm(tr.Wc) <= 1 + 1e-12
            assert opnorm(tr.Wo) <= 1 + 1e-12
            assert opnorm(tr.hankel) <= 1 + 1e-9

    def test_duality(self, rng):
        sys = random_stable(rng, 3, 2, 4, complex_=True)
        Wo = truncate_operators(sys, 5).Wo
        Wc_adj = truncate_operators(adjoint_system(sys), 5).Wc
        # same products in a different association order: equal up to rounding
        assert np.abs(Wo - reverse_blocks(Wc_adj, sys.n_out).conj().T).max() < 1e-14


class TestGramians:
    def test_zero_input(self):
        sys = SystemRealization([[0.5, 0.1], [0, 0.2]], np.zeros((2, 1)), [[1, 1]], [[0]])
        assert np.all(controllability_gramian(sys) == 0)

    def test_scalar(self):
        sys = SystemRealization([[0.5]], [[1.0]], [[1.0]], [[0.0]])
        assert controllability_gramian(sys)[0, 0].real == pytest.approx(4 / 3, rel=1e-14)
        assert observability_gramian(sys)[0, 0].real == pytest.approx(4 / 3, rel=1e-14)

    def test_zero_output(self):
        sys = SystemRealization([[0.5]], [[1.0]], [[0.0]], [[0.0]])
        assert np.all(observability_gramian(sys) == 0)

    def test_truncation_oracle(self, rng):
        sys = random_stable(rng, 4, 2, 2, rho=0.8, complex_=True)
        oracle = sum(matrix_power(sys.A, k) @ sys.B @ sys.B.conj().T
                     @ matrix_power(sys.A, k).conj().T for k in range(200))
        P = controllability_gramian(sys)
        assert np.abs(P - oracle).max() < 1e-12
        Wc = truncate_operators(sys, 200).Wc
        assert np.abs(P - Wc @ Wc.conj().T).max() < 1e-12

    def test_stein_residual_and_psd(self, rng):
        sys = random_stable(rng, 5, 2, 2, complex_=True)
        P = controllability_gramian(sys)
        BB = sys.B @ sys.B.conj().T
        assert opnorm(P - sys.A @ P @ sys.A.conj().T - BB) <= 1e-10 * opnorm(BB)
        assert np.linalg.eigvalsh(P)[0] >= -1e-14

    def test_duality(self, rng):
        sys = random_stable(rng, 4, 2, 3, complex_=True)
        assert np.abs(observability_gramian(sys)
                      - controllability_gramian(adjoint_system(sys))).max() < 1e-12

    def test_unstable(self):
        with pytest.raises(UnstableSystem):
            controllability_gramian(SystemRealization([[2.0]], [[1.0]], [[1.0]], [[0.0]]))


class TestMinimality:
    def test_full_rank_square(self, rng):
        sys = SystemRealization(rng.standard_normal((3, 3)), np.eye(3), np.eye(3),
                                np.zeros((3, 3)))
        rep = classify_minimality(sys)
        assert rep.controllable and rep.observable and rep.minimal

    def test_diag_example(self):
        rep = classify_minimality(DIAG_EXAMPLE)
        assert (rep.controllable, rep.observable, rep.minimal) == (False, False, False)
        assert (rep.reach_rank, rep.obs_rank) == (1, 1)
        assert rep.gramian_min_eigs is not None
        assert max(rep.gramian_min_eigs) < 1e-14

    def test_gramian_eigs_absent_when_unstable(self):
        rep = classify_minimality(SystemRealization([[2.0]], [[1.0]], [[1.0]], [[0.0]]))
        assert rep.minimal and rep.gramian_min_eigs is None

    @pytest.mark.parametrize('eps', [1e-3, 0.01, 0.5])
    def test_augmented_is_minimal(self, rng, eps):
        base = SystemRealization(np.diag([0.5, 0.2, 0.1]), np.zeros((3, 1)),
                                 np.zeros((1, 3)), [[0.3]])
        assert not classify_minimality(base).controllable
        assert classify_minimality(augment(base, eps)).minimal

    def test_invariant_under_transform(self, rng):
        sys = SystemRealization(np.diag([0.5, 0.3, 0.1]), [[1.0], [1.0], [0.0]],
                                [[1.0, 0.0, 1.0]], [[0.0]])
        rep = classify_minimality(sys)
        rep2 = classify_minimality(transform_system(sys, random_transform(rng, 3, 10)))
        assert (rep.reach_rank, rep.obs_rank) == (rep2.reach_rank, rep2.obs_rank) == (2, 2)

    def test_numerical_rank_cutoff(self):
        assert numerical_rank(np.diag([1.0, 1e-8, 1e-12])) == 2
        assert numerical_rank(np.zeros((2, 2))) == 0


class TestKalmanMinimal:
    def test_minimal_unchanged(self, rng):
        sys = random_minimal(rng, 4, 2, 2, complex_=True)
        red = kalman_minimal(sys)
        assert red.n_state == 4
        zs = disk_points(rng, 50)
        assert np.abs(transfer_on_points(red, zs) - transfer_on_points(sys, zs)).max() < 1e-9

    def test_diag_example(self, rng):
        red = kalman_minimal(DIAG_EXAMPLE)
        assert red.n_state == 1
        for z in disk_points(rng, 10):
            ref = z / (1 - z / 2)
            assert eval_transfer(red, z).value[0, 0] == pytest.approx(ref, abs=1e-12)
        assert classify_minimality(red).minimal

    def test_zero_dimensional(self):
        sys = SystemRealization(np.diag([0.5, 0.2]), np.zeros((2, 1)), np.zeros((1, 2)),
                                [[0.7]])
        red = kalman_minimal(sys)
        assert red.n_state == 0
        assert eval_transfer(red, 0.3).value[0, 0] == 0.7

    def test_padded_and_idempotent(self, rng):
        core = random_minimal(rng, 3, 2, 2)
        n = 3
        A = np.block([[core.A, rng.standard_normal((n, 2))], [np.zeros((2, n)), 0.3 * np.eye(2)]])
        B = np.vstack([core.B, np.zeros((2, 2))])
        C = np.hstack([core.C, rng.standard_normal((2, 2))])
        padded = transform_system(SystemRealization(A, B, C, core.D),
                                  random_transform(rng, 5, 10))
        red = kalman_minimal(padded)
        assert red.n_state == 3
        assert classify_minimality(red).minimal
        assert kalman_minimal(red).n_state == 3
        zs = disk_points(rng, 50)
        assert np.abs(transfer_on_points(red, zs) - transfer_on_points(core, zs)).max() < 1e-9


class TestProbes:
    def test_shift_n1(self):
        sys = shift_probe(1)
        assert np.array_equal(sys.A, [[0]]) and np.array_equal(sys.B, [[1]])

    def test_shift_n3_exchange_matrix(self):
        Wc = truncate_operators(shift_probe(3), 3).Wc
        assert np.array_equal(Wc, np.fliplr(np.eye(3)))

    @pytest.mark.parametrize('N', [1, 2, 5, 17, 64])
    def test_shift_identity_block(self, N):
        sys = shift_probe(N)
        Wc = truncate_operators(sys, N).Wc
        assert np.array_equal(reverse_blocks(Wc, 1), np.eye(N))
        assert classify_minimality(sys).controllable
        assert spectral_radius(sys.A) == 0

    def test_divergence_values(self):
        assert divergence_probe(1) == pytest.approx(1.0)
        assert divergence_probe(2) == pytest.approx(np.sqrt(5), rel=1e-15)

    @pytest.mark.parametrize('N', [3, 10, 25, 40])
    def test_divergence_closed_form(self, N):
        assert divergence_probe(N) == pytest.approx(np.sqrt((4.0 ** N - 1) / 3), rel=1e-13)

    def test_divergence_ratio(self):
        # exact ratio is 2 sqrt((1 - 4^-N) / (1 - 4^-(N-1))), within 1e-6 of 2 from N = 12 on
        r10 = divergence_probe(10) / divergence_probe(9)
        assert abs(r10 - 2) < 3e-6
        for N in range(12, 41):
            assert abs(divergence_probe(N) / divergence_probe(N - 1) - 2) < 1e-6
