import numpy as np
import pytest

from brlkit import (SchurClass, SystemRealization, classify_schur, hinf_certified,
                    kyp_slack, sample_norm, scale_io, shift_probe, strict_solve,
                    transfer_on_points)
from brlkit.exceptions import BrlkitError, SingularResolvent, UnstableSystem
from brlkit.hinf import gamma_feasible, spectral_radius
from brlkit.kyp import min_eig
from brlkit.testing import random_contractive, random_stable, with_sampled_norm

HALF = SystemRealization([[0.5]], [[1.0]], [[1.0]], [[0.0]])
UNSTABLE = SystemRealization([[2.0]], [[1.0]], [[1.0]], [[0.0]])
SWAP = SystemRealization([[0.5]], np.zeros((1, 2)), np.zeros((2, 1)), [[0, 1], [1, 0]])


def test_spectral_radius_examples():
    assert spectral_radius(np.zeros((2, 2))) == 0
    assert spectral_radius(UNSTABLE.A) == 2
    assert spectral_radius(shift_probe(16).A) == 0


class TestSampleNorm:
    def test_constant(self, rng):
        D = rng.standard_normal((2, 3))
        sys = SystemRealization([[0.1]], np.zeros((1, 3)), np.zeros((2, 1)), D)
        for radius in (0.5, 1.0):
            assert sample_norm(sys, 64, radius) == pytest.approx(np.linalg.norm(D, 2))

    def test_closed_form(self):
        # |z / (1 - z/2)| peaks at z = 1, which is a sample point
        assert abs(sample_norm(HALF, 4096) - 2) < 1e-6

    def test_radius(self):
        r = 0.5
        assert sample_norm(HALF, 256, r) == pytest.approx(r / (1 - r / 2))

    def test_contractive(self, rng):
        for _ in range(10):
            assert sample_norm(random_contractive(rng, 3, 2, 2)) <= 1 + 1e-9

    def test_refinement_monotone(self, rng):
        sys = random_stable(rng, 4, 2, 2, complex_=True)
        # 4k points contain the k points
        values = [sample_norm(sys, 64 * 2 ** j) for j in range(5)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_matches_dense_grid(self, rng):
        sys = random_stable(rng, 3, 2, 2, complex_=True)
        z = np.exp(2j * np.pi * np.arange(4096) / 4096)
        ref = np.linalg.svd(transfer_on_points(sys, z), compute_uv=False)[:, 0].max()
        assert sample_norm(sys, 4096) == pytest.approx(ref, rel=1e-13)

    def test_pole_on_circle(self):
        sys = SystemRealization([[1.0]], [[1.0]], [[1.0]], [[0.0]])
        with pytest.raises(SingularResolvent):
            sample_norm(sys, 16)


class TestCertified:
    def test_zero_function(self):
        sys = SystemRealization([[0.5]], [[0.0]], [[0.0]], [[0.0]])
        nb = hinf_certified(sys, tol=1e-6)
        assert nb.lower == 0 and 0 <= nb.upper <= 1e-6 and nb.certified

    def test_scalar_closed_form(self):
        nb = hinf_certified(HALF, tol=1e-6)
        assert nb.lower <= 2 + 1e-12 and nb.upper >= 2
        assert nb.upper - nb.lower <= 1e-6 * (1 + nb.lower)

    def test_contractive(self, rng):
        for _ in range(5):
            nb = hinf_certified(random_contractive(rng, 3, 2, 2))
            assert nb.upper <= 1 + 1e-6

    def test_unstable(self):
        with pytest.raises(UnstableSystem, match='spectral radius 2'):
            hinf_certified(UNSTABLE)

    def test_witness_reverified(self, rng):
        for _ in range(10):
            sys = random_stable(rng, 3, 2, 2, complex_=True)
            nb = hinf_certified(sys, tol=1e-6)
            assert nb.lower <= nb.upper
            scaled = scale_io(sys, 1 / nb.upper)
            assert min_eig(kyp_slack(scaled, nb.witness)) >= -1e-9

    def test_tightening_shrinks_interval(self, rng):
        sys = random_stable(rng, 4, 2, 2, complex_=True)
        widths = [(lambda nb: nb.upper - nb.lower)(hinf_certified(sys, tol=t))
                  for t in (1e-2, 1e-4, 1e-6)]
        assert widths[0] >= widths[1] >= widths[2]

    def test_large_norm_needs_doubling(self):
        # norm 200 is far above the initial upper guess 2||M|| + 1
        sys = SystemRealization([[0.99]], [[1.0]], [[2.0]], [[0.0]])
        nb = hinf_certified(sys, tol=1e-6)
        assert nb.lower <= 200 <= nb.upper + 1e-9
        assert nb.upper - nb.lower <= 1e-6 * (1 + nb.lower)

    def test_infeasible_gamma(self):
        assert gamma_feasible(HALF, 1.9) is None
        assert gamma_feasible(HALF, 2.1) is not None


class TestClassify:
    def test_unitary_D_is_boundary(self):
        assert classify_schur(SWAP) == SchurClass.BOUNDARY

    def test_unstable(self):
        assert classify_schur(UNSTABLE) == SchurClass.UNSTABLE

    def test_outside(self):
        assert classify_schur(HALF) == SchurClass.OUTSIDE

    def test_strict(self, rng):
        sys = with_sampled_norm(random_stable(rng, 3, 2, 2), 0.7)
        assert classify_schur(sys) == SchurClass.STRICT

    def test_enum_values(self):
        assert SchurClass('strict') is SchurClass.STRICT
        assert SchurClass.OUTSIDE == 'outside'


def test_strict_class_agrees_with_strict_solve(rng):
    for target in np.linspace(0.3, 1.3, 15):
        sys = with_sampled_norm(random_stable(rng, 3, 2, 2, complex_=True), target)
        strict = classify_schur(sys) == SchurClass.STRICT
        try:
            strict_solve(sys)
            solved = True
        except BrlkitError:
            solved = False
        assert strict == solved
