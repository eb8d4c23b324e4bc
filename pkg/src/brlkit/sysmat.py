"""Discrete-time realizations ``x(n+1) = A x(n) + B u(n)``, ``y(n) = C x(n) + D u(n)``.

All matrices are stored as read-only complex arrays. Transfer functions use
the convention ``F(z) = D + z C (I - zA)^{-1} B`` so that the Taylor
coefficients at the origin are ``D, CB, CAB, CA^2B, ...``.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .config import DEFAULTS
from .exceptions import (DimensionMismatch, NonPositiveScale,
                         SingularResolvent, SingularTransform,
                         InconsistentTrajectory)

__all__ = ['SystemRealization', 'Trajectory', 'TransferSample',
           'ContractionResult', 'eval_transfer', 'transfer_on_points',
           'markov_coefficients', 'adjoint_system', 'transform_system',
           'scale_io', 'simulate', 'contraction_check', 'spectral_radius']


def _as_matrix(value, name, shape=None):
    arr = np.array(value, dtype=complex)
    if shape is not None and arr.size == 0:
        arr = arr.reshape(shape)
    if arr.ndim != 2:
        raise DimensionMismatch(f'{name} must be a 2-D matrix, got ndim={arr.ndim}')
    if shape is not None and arr.shape != tuple(shape):
        raise DimensionMismatch(f'{name} has shape {arr.shape}, expected {tuple(shape)}')
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch(f'{name} has non-finite entries')
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SystemRealization:
    """The quadruple ``(A, B, C, D)`` of a discrete-time linear system.

    Dimensions are inferred from ``A``, ``B`` and ``C``; pass ``n_state`` etc.
    explicitly when some matrices are empty so that their shapes are known.
    """
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __init__(self, A, B, C, D, n_state=None, n_in=None, n_out=None):
        A0, B0, C0, D0 = (np.asarray(x, dtype=complex) for x in (A, B, C, D))
        n = n_state if n_state is not None else (A0.shape[0] if A0.ndim == 2 else 0)
        m = n_in if n_in is not None else (
            B0.shape[1] if B0.ndim == 2 and B0.size else D0.shape[1] if D0.ndim == 2 else 0)
        p = n_out if n_out is not None else (
            C0.shape[0] if C0.ndim == 2 and C0.size else D0.shape[0] if D0.ndim == 2 else 0)
        object.__setattr__(self, 'A', _as_matrix(A0, 'A', (n, n)))
        object.__setattr__(self, 'B', _as_matrix(B0, 'B', (n, m)))
        object.__setattr__(self, 'C', _as_matrix(C0, 'C', (p, n)))
        object.__setattr__(self, 'D', _as_matrix(D0, 'D', (p, m)))

    @property
    def n_state(self):
        return self.A.shape[0]

    @property
    def n_in(self):
        return self.D.shape[1]

    @property
    def n_out(self):
        return self.D.shape[0]

    @property
    def M(self):
        """Block system matrix ``[[A, B], [C, D]]``."""
        return np.block([[self.A, self.B], [self.C, self.D]])

    @property
    def matrices(self):
        return self.A, self.B, self.C, self.D

    def __repr__(self):
        return (f'SystemRealization(n_state={self.n_state}, n_in={self.n_in}, '
                f'n_out={self.n_out})')


class TransferSample(NamedTuple):
    z: complex
    value: np.ndarray
    condition: float


class ContractionResult(NamedTuple):
    is_contraction: bool
    sigma_max: float


@dataclass(frozen=True)
class Trajectory:
    """Finite input/state/output record; ``states`` has one more row than ``inputs``."""
    inputs: np.ndarray
    states: np.ndarray
    outputs: np.ndarray

    def __post_init__(self):
        for name in ('inputs', 'states', 'outputs'):
            arr = np.array(getattr(self, name), dtype=complex)
            if arr.ndim != 2:
                raise DimensionMismatch(f'{name} must be a 2-D array of row vectors')
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        N = self.inputs.shape[0]
        if self.states.shape[0] != N + 1 or self.outputs.shape[0] != N:
            raise DimensionMismatch(
                f'need len(states) = len(inputs)+1 = len(outputs)+1, got '
                f'{self.states.shape[0]}, {N}, {self.outputs.shape[0]}')

    def __len__(self):
        return self.inputs.shape[0]

    def recursion_residual(self, sys):
        """Largest violation of the state/output recursion, relative to the data scale."""
        x, u, y = self.states, self.inputs, self.outputs
        if (x.shape[1] != sys.n_state or u.shape[1] != sys.n_in
                or y.shape[1] != sys.n_out):
            raise InconsistentTrajectory('trajectory dimensions do not match the system')
        if len(self) == 0:
            return 0.0
        rx = x[1:] - x[:-1] @ sys.A.T - u @ sys.B.T
        ry = y - x[:-1] @ sys.C.T - u @ sys.D.T
        err = max(np.abs(rx).max(initial=0.0), np.abs(ry).max(initial=0.0))
        scale = 1.0 + max(np.abs(x).max(initial=0.0), np.abs(u).max(initial=0.0))
        return float(err / (scale * (1.0 + np.linalg.norm(sys.M, 2))))


def spectral_radius(A):
    """Largest eigenvalue modulus of a square matrix (0 for the empty matrix)."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f'spectral radius needs a square matrix, got {A.shape}')
    if A.size == 0:
        return 0.0
    return float(np.abs(np.linalg.eigvals(A)).max())


def eval_transfer(sys, z, cond_cap=DEFAULTS.cond_cap):
    """Evaluate ``F(z) = D + z C (I - zA)^{-1} B`` with one LU solve.

    Raises
    ------
    SingularResolvent
        If the 2-norm condition number of ``I - zA`` exceeds `cond_cap`.
    """
    z = complex(z)
    n = sys.n_state
    if n == 0:
        return TransferSample(z, sys.D.copy(), 1.0)
    R = np.eye(n) - z * sys.A
    cond = float(np.linalg.cond(R))
    if not np.isfinite(cond) or cond > cond_cap:
        raise SingularResolvent(f'I - zA is singular at z={z} (condition {cond:.3g})')
    X = lu_solve(lu_factor(R), sys.B)
    return TransferSample(z, sys.D + z * (sys.C @ X), cond)


def transfer_on_points(sys, zs, cond_cap=DEFAULTS.cond_cap):
    """Vectorised :func:`eval_transfer`; returns an array of shape ``(len(zs), n_out, n_in)``."""
    zs = np.asarray(zs, dtype=complex).ravel()
    n = sys.n_state
    if n == 0:
        return np.broadcast_to(sys.D, (zs.size,) + sys.D.shape).copy()
    R = np.eye(n)[None] - zs[:, None, None] * sys.A[None]
    conds = np.linalg.cond(R)
    bad = ~np.isfinite(conds) | (conds > cond_cap)
    if np.any(bad):
        raise SingularResolvent(
            f'I - zA is singular at z={zs[bad][0]} (condition {conds[bad][0]:.3g})')
    X = np.linalg.solve(R, np.broadcast_to(sys.B, (zs.size,) + sys.B.shape))
    return sys.D[None] + zs[:, None, None] * (sys.C[None] @ X)


def markov_coefficients(sys, count):
    """Return ``[D, CB, CAB, ..., CA^{count-2}B]``."""
    if int(count) != count or count < 1:
        raise DimensionMismatch(f'count must be a positive integer, got {count}')
    out = [sys.D.copy()]
    AkB = sys.B
    for _ in range(int(count) - 1):
        out.append(sys.C @ AkB)
        AkB = sys.A @ AkB
    return out


def adjoint_system(sys):
    """The adjoint realization ``(A*, C*, B*, D*)``; inputs and outputs swap roles."""
    return SystemRealization(sys.A.conj().T, sys.C.conj().T, sys.B.conj().T,
                             sys.D.conj().T, n_state=sys.n_state,
                             n_in=sys.n_out, n_out=sys.n_in)


def transform_system(sys, T, cond_cap=DEFAULTS.cond_cap):
    """State-space change of coordinates ``(T A T^{-1}, T B, C T^{-1}, D)``."""
    T = np.asarray(T, dtype=complex)
    n = sys.n_state
    if T.shape != (n, n):
        raise DimensionMismatch(f'T must be {n}x{n}, got {T.shape}')
    if n == 0:
        return sys
    cond = np.linalg.cond(T)
    if not np.isfinite(cond) or cond > cond_cap:
        raise SingularTransform(f'transform is numerically singular (condition {cond:.3g})')
    lu = lu_factor(T)
    # X T^{-1} = (T^{-T} X^T)^T
    A_new = lu_solve(lu, (T @ sys.A).T, trans=1).T
    C_new = lu_solve(lu, sys.C.T, trans=1).T
    return SystemRealization(A_new, T @ sys.B, C_new, sys.D,
                             n_state=n, n_in=sys.n_in, n_out=sys.n_out)


def scale_io(sys, gamma):
    """Return ``(A, gamma B, C, gamma D)``, whose transfer function is ``gamma F``."""
    gamma = float(gamma)
    if not gamma > 0:
        raise NonPositiveScale(f'gamma must be positive, got {gamma}')
    return SystemRealization(sys.A, gamma * sys.B, sys.C, gamma * sys.D,
                             n_state=sys.n_state, n_in=sys.n_in, n_out=sys.n_out)


def simulate(sys, x0, inputs):
    """Run the state recursion from `x0` driven by the rows of `inputs`."""
    x = np.asarray(x0, dtype=complex).reshape(-1)
    if x.size != sys.n_state:
        raise DimensionMismatch(f'x0 has length {x.size}, expected {sys.n_state}')
    U = np.asarray(inputs, dtype=complex)
    if U.size == 0:
        U = U.reshape(0, sys.n_in)
    if U.ndim == 1 and sys.n_in == 1:
        U = U[:, None]
    if U.ndim != 2 or U.shape[1] != sys.n_in:
        raise DimensionMismatch(f'inputs must have rows of length {sys.n_in}')
    N = U.shape[0]
    X = np.empty((N + 1, sys.n_state), dtype=complex)
    Y = np.empty((N, sys.n_out), dtype=complex)
    X[0] = x
    for k in range(N):
        Y[k] = sys.C @ X[k] + sys.D @ U[k]
        X[k + 1] = sys.A @ X[k] + sys.B @ U[k]
    return Trajectory(U, X, Y)


def contraction_check(M, tol=0.0):
    """Largest singular value of `M` and whether it is at most ``1 + tol``."""
    M = np.asarray(M, dtype=complex)
    smax = float(np.linalg.norm(M, 2)) if M.size else 0.0
    return ContractionResult(smax <= 1.0 + tol, smax)
