"""Schur-class tests: sampled circle norms and Riccati-certified upper bounds."""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ._sampling import sample_norm
from .config import DEFAULTS
from .exceptions import InfeasibleScaling, NoConvergence, UnstableSystem
from .kyp import kyp_slack, min_eig, riccati_solve
from .sysmat import scale_io, spectral_radius

__all__ = ['NormBound', 'SchurClass', 'spectral_radius', 'sample_norm',
           'gamma_feasible', 'hinf_certified', 'classify_schur']


@dataclass(frozen=True)
class NormBound:
    """Interval for the supremum norm on the disk.

    ``lower`` is the largest sampled singular value; ``upper`` is the smallest
    ``gamma`` for which the Riccati iteration produced a KYP solution of the
    system scaled by ``1/gamma``. ``witness`` is that solution.
    """
    lower: float
    upper: float
    samples: int
    certified: bool
    witness: Optional[np.ndarray] = None


class SchurClass(str, Enum):
    STRICT = 'strict'
    BOUNDARY = 'boundary'
    OUTSIDE = 'outside'
    UNSTABLE = 'unstable'


def _require_stable(sys):
    rho = spectral_radius(sys.A)
    if rho >= 1:
        raise UnstableSystem(f'spectral radius {rho:.6g} ≥ 1')
    return rho


def gamma_feasible(sys, gamma, sampled=None, n_samples=DEFAULTS.n_samples,
                   slack_tol=DEFAULTS.rel, max_iter=200):
    """KYP witness ``H`` for ``scale_io(sys, 1/gamma)``, or ``None`` if none was found.

    `sampled` is the sampled norm of `sys`; when it is at least `gamma` no
    Riccati run is attempted. Failed iterations count as infeasible, which can
    only make the resulting upper bound conservative.
    """
    if sampled is None:
        sampled = sample_norm(sys, n_samples)
    if sampled >= gamma:
        return None
    scaled = scale_io(sys, 1.0 / gamma)
    try:
        cert = riccati_solve(scaled, DEFAULTS.riccati, max_iter, method='doubling',
                             check_norm=False)
    except (InfeasibleScaling, NoConvergence, np.linalg.LinAlgError):
        return None
    if min_eig(kyp_slack(scaled, cert.H)) < -slack_tol:
        return None
    return cert.H


def hinf_certified(sys, tol=1e-6, n_samples=DEFAULTS.n_samples, max_doublings=60):
    """Bisection for the smallest certified ``gamma`` with ``||F||_inf <= gamma``.

    Stops once the bracket is narrower than ``tol * (1 + lower)``. The initial
    upper end ``2 ||M|| + 1`` is doubled until feasible.
    """
    _require_stable(sys)
    lower = sample_norm(sys, n_samples)
    lo = lower
    hi = 2 * float(np.linalg.norm(sys.M, 2)) + 1
    witness = gamma_feasible(sys, hi, lower, n_samples)
    for _ in range(max_doublings):
        if witness is not None:
            break
        lo, hi = hi, 2 * hi
        witness = gamma_feasible(sys, hi, lower, n_samples)
    else:
        raise NoConvergence('no feasible upper bound found')
    while hi - lo > tol * (1 + lower):
        mid = (lo + hi) / 2
        H = gamma_feasible(sys, mid, lower, n_samples)
        if H is None:
            lo = mid
        else:
            hi, witness = mid, H
    return NormBound(lower, hi, int(n_samples), True, witness)


def classify_schur(sys, tol=1e-6, n_samples=DEFAULTS.n_samples):
    """Place the transfer function relative to the (strict) Schur class.

    ``unstable`` describes the realization (spectral radius of ``A`` at least
    one), not the function. ``strict`` means a KYP witness exists for the
    norm bound ``1 - tol``; ``outside`` means a sampled value exceeds
    ``1 + tol``; anything else is ``boundary``.
    """
    if spectral_radius(sys.A) >= 1:
        return SchurClass.UNSTABLE
    s = sample_norm(sys, n_samples)
    if s > 1 + tol:
        return SchurClass.OUTSIDE
    if gamma_feasible(sys, 1 - tol, s, n_samples) is not None:
        return SchurClass.STRICT
    return SchurClass.BOUNDARY
