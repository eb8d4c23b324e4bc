"""State-space similarity between two realizations of one transfer function.

For minimal realizations with equal Markov coefficients the Hankel matrix
factors both as ``Wo Wc`` and ``Wo' Wc'``; the similarity is then

    Gamma = Wc' pinv(Wc)      with left inverse      Gamma_left = pinv(Wo) Wo'

and satisfies ``Gamma A = A' Gamma``, ``Gamma B = B'``, ``C = C' Gamma``.
"""
from dataclasses import dataclass, asdict

import numpy as np

from .config import DEFAULTS
from .exceptions import (DimensionMismatch, IllConditioned, MomentMismatch,
                         NotMinimal)
from .operators import classify_minimality, truncate_operators
from .sysmat import markov_coefficients

__all__ = ['Residuals', 'SimilarityMap', 'moment_match', 'compute_similarity',
           'verify_similarity']


@dataclass(frozen=True)
class Residuals:
    r_AX: float
    r_B: float
    r_C: float
    r_D: float
    r_inv: float

    def max(self):
        return max(asdict(self).values())


@dataclass(frozen=True)
class SimilarityMap:
    gamma: np.ndarray
    gamma_left: np.ndarray
    residuals: Residuals
    valid: bool
    tol: float


def _check_io(sysA, sysB):
    if (sysA.n_in, sysA.n_out) != (sysB.n_in, sysB.n_out):
        raise DimensionMismatch(
            f'input/output dimensions differ: {(sysA.n_in, sysA.n_out)} vs '
            f'{(sysB.n_in, sysB.n_out)}')


def _opnorm(X):
    return float(np.linalg.norm(X, 2)) if X.size else 0.0


def moment_match(sysA, sysB, count=None, tol=DEFAULTS.rel):
    """True iff the first `count` Markov coefficients agree.

    A coefficient pair ``(F_k, F'_k)`` agrees when ``||F_k - F'_k|| <= tol *
    (1 + max(||F_k||, ||F'_k||))``. The default ``count = n + n' + 1`` covers
    ``D`` and enough moments to decide equality at finite dimension.
    """
    _check_io(sysA, sysB)
    if count is None:
        count = sysA.n_state + sysB.n_state + 1
    for Fa, Fb in zip(markov_coefficients(sysA, count), markov_coefficients(sysB, count)):
        scale = 1.0 + max(_opnorm(Fa), _opnorm(Fb))
        if _opnorm(Fa - Fb) > tol * scale:
            return False
    return True


def verify_similarity(sysA, sysB, gamma, gamma_left=None):
    """Recompute the five intertwining residuals of `gamma` from scratch.

    `gamma` may also be a :class:`SimilarityMap`, in which case its stored
    left inverse is used.
    """
    if isinstance(gamma, SimilarityMap):
        gamma, gamma_left = gamma.gamma, gamma.gamma_left
    G = np.asarray(gamma, dtype=complex)
    _check_io(sysA, sysB)
    if G.shape != (sysB.n_state, sysA.n_state):
        raise DimensionMismatch(f'gamma must be {sysB.n_state}x{sysA.n_state}, got {G.shape}')
    if gamma_left is None:
        gamma_left = np.linalg.pinv(G)
    L = np.asarray(gamma_left, dtype=complex)
    if L.shape != (sysA.n_state, sysB.n_state):
        raise DimensionMismatch(f'gamma_left must be {sysA.n_state}x{sysB.n_state}')
    return Residuals(
        r_AX=_opnorm(G @ sysA.A - sysB.A @ G),
        r_B=_opnorm(G @ sysA.B - sysB.B),
        r_C=_opnorm(sysA.C - sysB.C @ G),
        r_D=_opnorm(sysA.D - sysB.D),
        r_inv=_opnorm(L @ G - np.eye(sysA.n_state)),
    )


def compute_similarity(sysA, sysB, tol=1e-8, horizon=None, rank_tol=DEFAULTS.rank,
                       cond_cap=DEFAULTS.cond_cap):
    """Similarity ``Gamma`` mapping the state space of `sysA` onto that of `sysB`.

    Parameters
    ----------
    sysA, sysB : SystemRealization
        Minimal realizations with the same transfer function.
    tol : float
        Validity threshold on every residual (also used for the moment test).
    horizon : int, optional
        Truncation horizon; defaults to ``max(n, n')``. Larger values change
        nothing in exact arithmetic.

    Raises
    ------
    NotMinimal, MomentMismatch, IllConditioned
    """
    _check_io(sysA, sysB)
    for label, s in (('first', sysA), ('second', sysB)):
        rep = classify_minimality(s, rank_tol)
        if not rep.minimal:
            raise NotMinimal(
                f'{label} system is not minimal (reach rank {rep.reach_rank}, '
                f'obs rank {rep.obs_rank}, n_state {s.n_state})')
    if not moment_match(sysA, sysB, tol=tol):
        raise MomentMismatch('Markov coefficients differ: transfer functions are not equal')
    if sysA.n_state != sysB.n_state:
        raise MomentMismatch('minimal realizations of one transfer function have equal '
                             f'state dimension, got {sysA.n_state} and {sysB.n_state}')
    N = horizon or max(sysA.n_state, sysB.n_state, 1)
    ta, tb = truncate_operators(sysA, N), truncate_operators(sysB, N)
    gamma = tb.Wc @ np.linalg.pinv(ta.Wc, rcond=rank_tol)
    gamma_left = np.linalg.pinv(ta.Wo, rcond=rank_tol) @ tb.Wo
    if gamma.size:
        cond = np.linalg.cond(gamma)
        if not np.isfinite(cond) or cond > cond_cap:
            raise IllConditioned(f'similarity has condition number {cond:.3g}')
    res = verify_similarity(sysA, sysB, gamma, gamma_left)
    return SimilarityMap(gamma, gamma_left, res, res.max() <= tol, tol)
