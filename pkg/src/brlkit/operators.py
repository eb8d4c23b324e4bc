"""Finite-horizon controllability/observability operators, Gramians and minimality.

Block ordering
--------------
``Wc`` at horizon ``N`` is stored as ``[A^{N-1}B, ..., AB, B]`` (the most
recent input sits in the last block column). ``Wo`` is ``col(C, CA, ...,
CA^{N-1})`` and the Hankel block ``(i, j)`` is ``C A^{i+j} B``. Consequently
``hankel == Wo @ reverse_blocks(Wc, n_in)``.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import DEFAULTS
from .exceptions import DimensionMismatch, UnstableSystem
from .sysmat import SystemRealization, adjoint_system, spectral_radius

__all__ = ['OperatorTruncation', 'MinimalityReport', 'reverse_blocks',
           'truncate_operators', 'stein_solve', 'controllability_gramian',
           'observability_gramian', 'numerical_rank', 'classify_minimality',
           'kalman_minimal', 'shift_probe', 'divergence_probe']


@dataclass(frozen=True)
class OperatorTruncation:
    horizon: int
    Wc: np.ndarray
    Wo: np.ndarray
    hankel: np.ndarray


@dataclass(frozen=True)
class MinimalityReport:
    controllable: bool
    observable: bool
    minimal: bool
    reach_rank: int
    obs_rank: int
    gramian_min_eigs: Optional[Tuple[float, float]] = None


def reverse_blocks(Wc, block_cols):
    """Reverse the order of the column blocks of width `block_cols`."""
    Wc = np.asarray(Wc)
    if block_cols == 0:
        return Wc
    N = Wc.shape[1] // block_cols
    blocks = Wc.reshape(Wc.shape[0], N, block_cols)[:, ::-1, :]
    return blocks.reshape(Wc.shape[0], N * block_cols)


def _check_horizon(N):
    if int(N) != N or N < 1:
        raise DimensionMismatch(f'horizon must be a positive integer, got {N}')
    return int(N)


def _krylov(A, B, N):
    # [B, AB, ..., A^{N-1}B]
    blocks = [B]
    for _ in range(N - 1):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)


def truncate_operators(sys, N):
    """Build ``Wc``, ``Wo`` and the ``N x N`` block Hankel matrix by iterated products.

    The Hankel blocks come from the Markov coefficients directly, so
    ``hankel = Wo @ reverse_blocks(Wc)`` is a genuine check rather than an identity.
    """
    N = _check_horizon(N)
    A, B, C = sys.A, sys.B, sys.C
    forward = _krylov(A, B, N)
    Wc = reverse_blocks(forward, sys.n_in)
    obs = [C]
    for _ in range(N - 1):
        obs.append(obs[-1] @ A)
    Wo = np.vstack(obs)
    # blocks C A^(i+j) B assembled from Markov coefficients, independent of Wo and Wc
    m = sys.n_in
    tail = _krylov(A, forward[:, (N - 1) * m:], N)[:, m:]
    markov = C @ np.hstack([forward, tail])
    p = sys.n_out
    hankel = np.empty((N * p, N * m), dtype=complex)
    for i in range(N):
        hankel[i * p:(i + 1) * p] = markov[:, i * m:(i + N) * m]
    return OperatorTruncation(N, Wc, Wo, hankel)


def stein_solve(A, Q, tol=DEFAULTS.stein, max_steps=100):
    """Solve ``X = A X A^* + Q`` by squaring: ``X <- X + A_k X A_k^*``, ``A_k <- A_k^2``.

    Convergence requires the spectral radius of `A` to be below one.
    """
    A = np.asarray(A, dtype=complex)
    X = np.array(Q, dtype=complex)
    Ak = A.copy()
    for _ in range(max_steps):
        update = Ak @ X @ Ak.conj().T
        X = X + update
        Ak = Ak @ Ak
        if np.linalg.norm(update) <= tol * np.linalg.norm(X):
            break
    else:
        raise UnstableSystem('Stein doubling did not converge')
    return (X + X.conj().T) / 2


def controllability_gramian(sys, tol=DEFAULTS.rel):
    """Gramian ``P = sum_k A^k B B^* A^{*k}``, the solution of ``P = A P A^* + B B^*``."""
    rho = spectral_radius(sys.A)
    if rho >= 1 - tol:
        raise UnstableSystem(f'spectral radius {rho:.6g} >= 1')
    if sys.n_state == 0:
        return np.zeros((0, 0), dtype=complex)
    return stein_solve(sys.A, sys.B @ sys.B.conj().T)


def observability_gramian(sys, tol=DEFAULTS.rel):
    """Gramian ``Q = sum_k A^{*k} C^* C A^k``; the controllability Gramian of the adjoint."""
    return controllability_gramian(adjoint_system(sys), tol)


def numerical_rank(M, tol=DEFAULTS.rank):
    """Number of singular values above ``tol * sigma_max``."""
    M = np.asarray(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def classify_minimality(sys, tol=DEFAULTS.rank):
    """Rank tests for controllability and observability at horizon ``n_state``.

    For stable systems the smallest eigenvalues of both Gramians are included
    as a measure of how close the realization is to losing minimality.
    """
    n = sys.n_state
    if n == 0:
        return MinimalityReport(True, True, True, 0, 0, None)
    tr = truncate_operators(sys, n)
    rr = numerical_rank(tr.Wc, tol)
    ro = numerical_rank(tr.Wo, tol)
    eigs = None
    if spectral_radius(sys.A) < 1:
        P = controllability_gramian(sys, 0.0)
        Q = observability_gramian(sys, 0.0)
        eigs = (float(np.linalg.eigvalsh(P)[0]), float(np.linalg.eigvalsh(Q)[0]))
    return MinimalityReport(rr == n, ro == n, rr == n and ro == n, rr, ro, eigs)


def _range_basis(M, tol):
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    r = 0 if s.size == 0 or s[0] == 0 else int(np.count_nonzero(s > tol * s[0]))
    return U[:, :r]


def _compress(sys, V):
    Vh = V.conj().T
    return SystemRealization(Vh @ sys.A @ V, Vh @ sys.B, sys.C @ V, sys.D,
                             n_state=V.shape[1], n_in=sys.n_in, n_out=sys.n_out)


def kalman_minimal(sys, tol=DEFAULTS.rank):
    """Compress to the reachable subspace and then to the observable one.

    Both steps use orthonormal bases from an SVD, so the transfer function is
    preserved exactly in exact arithmetic. A zero-dimensional result means the
    transfer function is the constant ``D``.
    """
    n = sys.n_state
    if n == 0:
        return sys
    Wc = _krylov(sys.A, sys.B, n)
    reach = _compress(sys, _range_basis(Wc, tol))
    r = reach.n_state
    if r == 0:
        return reach
    Wo = truncate_operators(reach, r).Wo
    # observable subspace = range of Wo^*
    return _compress(reach, _range_basis(Wo.conj().T, tol))


def shift_probe(N):
    """Truncation to ``C^N`` of the forward shift with ``B = e_1`` and ``C = 0``.

    The horizon-``N`` controllability matrix is the exchange matrix, so after
    :func:`reverse_blocks` it is exactly the identity.
    """
    N = _check_horizon(N)
    A = np.eye(N, k=-1)
    B = np.zeros((N, 1))
    B[0, 0] = 1.0
    return SystemRealization(A, B, np.zeros((1, N)), np.zeros((1, 1)))


def divergence_probe(N):
    """Norm of the horizon-``N`` observability matrix of ``A = [2], B = C = [1]``.

    The value is ``sqrt((4^N - 1) / 3)`` and grows like ``2^{N-1}``; no bounded
    observability operator exists in the limit.
    """
    N = _check_horizon(N)
    sys = SystemRealization([[2.0]], [[1.0]], [[1.0]], [[0.0]])
    return float(np.linalg.norm(truncate_operators(sys, N).Wo, 2))
