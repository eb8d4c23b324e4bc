import numpy as np

from .config import DEFAULTS
from .exceptions import DimensionMismatch
from .sysmat import transfer_on_points

_CHUNK = 4096


def circle_points(n_points, radius=1.0):
    k = np.arange(int(n_points))
    return radius * np.exp(2j * np.pi * k / n_points)


def sigma_max_stack(F):
    """Largest singular value of each matrix in a ``(k, p, m)`` stack."""
    if F.shape[1] == 0 or F.shape[2] == 0:
        return np.zeros(F.shape[0])
    return np.linalg.svd(F, compute_uv=False)[:, 0]


def sample_norm(sys, n_points=DEFAULTS.n_samples, radius=1.0):
    """Max of ``sigma_max(F(z))`` over `n_points` equispaced points of ``|z| = radius``.

    The grid always contains ``z = radius``. Raises ``SingularResolvent`` if a
    grid point hits a pole.
    """
    if int(n_points) != n_points or n_points < 1:
        raise DimensionMismatch(f'n_points must be a positive integer, got {n_points}')
    zs = circle_points(n_points, radius)
    best = 0.0
    for start in range(0, zs.size, _CHUNK):
        F = transfer_on_points(sys, zs[start:start + _CHUNK])
        best = max(best, float(sigma_max_stack(F).max()))
    return best
