"""Random generators for property tests and demos."""
import numpy as np

from ._sampling import sample_norm
from .operators import classify_minimality
from .sysmat import SystemRealization, scale_io


def _gauss(rng, *shape, complex_=False):
    X = rng.standard_normal(shape)
    if complex_:
        X = X + 1j * rng.standard_normal(shape)
    return X


def random_dims(rng, max_state=6, max_io=3):
    return (int(rng.integers(1, max_state + 1)), int(rng.integers(1, max_io + 1)),
            int(rng.integers(1, max_io + 1)))


def random_stable(rng, n, m, p, rho=None, complex_=False):
    """Random system with spectral radius `rho` (drawn from [0.2, 0.9] if omitted)."""
    if rho is None:
        rho = rng.uniform(0.2, 0.9)
    A = _gauss(rng, n, n, complex_=complex_)
    r = np.abs(np.linalg.eigvals(A)).max()
    A = A * (rho / r) if r > 0 else A
    B = _gauss(rng, n, m, complex_=complex_) / np.sqrt(n)
    C = _gauss(rng, p, n, complex_=complex_) / np.sqrt(n)
    D = 0.3 * _gauss(rng, p, m, complex_=complex_)
    return SystemRealization(A, B, C, D)


def random_minimal(rng, n, m, p, gramian_floor=0.0, **kw):
    """Random stable system passing the rank tests, redrawn until it does.

    With ``gramian_floor > 0`` both Gramians must also have smallest
    eigenvalue at least that large, which rules out nearly non-minimal draws.
    """
    while True:
        sys = random_stable(rng, n, m, p, **kw)
        rep = classify_minimality(sys)
        if rep.minimal and min(rep.gramian_min_eigs) >= gramian_floor:
            return sys


def random_contractive(rng, n, m, p, norm=None, complex_=True):
    """System whose block matrix has spectral norm `norm` (uniform in [0.5, 1] if omitted)."""
    if norm is None:
        norm = rng.uniform(0.5, 1.0)
    M = _gauss(rng, n + p, n + m, complex_=complex_)
    M *= norm / np.linalg.norm(M, 2)
    return SystemRealization(M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:],
                             n_state=n, n_in=m, n_out=p)


def with_sampled_norm(sys, target, n_samples=4096):
    """Rescale inputs so that the sampled circle norm equals `target`."""
    return scale_io(sys, target / sample_norm(sys, n_samples))


def random_transform(rng, n, max_cond=100.0, complex_=True):
    """Random invertible matrix with 2-norm condition number at most `max_cond`."""
    def unitary():
        Q, R = np.linalg.qr(_gauss(rng, n, n, complex_=complex_))
        return Q * np.sign(np.diag(R))
    cond = rng.uniform(1.0, max_cond)
    s = np.geomspace(1.0, cond, n) if n > 1 else np.ones(1)
    return unitary() @ np.diag(s * rng.uniform(0.5, 2.0)) @ unitary().conj().T


def random_trajectory_inputs(rng, length, m, complex_=True):
    return _gauss(rng, length, m, complex_=complex_)
