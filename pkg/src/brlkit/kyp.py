"""KYP inequality: residual forms, Riccati solvers, strict solutions and storage checks.

The KYP slack of a Hermitian ``H`` is

    S(H) = diag(H, I) - M^* diag(H, I) M,      M = [[A, B], [C, D]],

and ``H`` solves the (strict) inequality when ``S(H)`` is positive
semidefinite (definite). Solutions are produced in three ways:

* ``riccati_solve``: the fixed-point iteration of the Riccati form from
  ``H = 0``, which converges to the smallest solution when the norm of the
  transfer function is below one;
* ``certificate_from_similarity``: ``H = Gamma^* Gamma`` for a similarity
  onto a realization with contractive system matrix;
* ``strict_solve``: a Riccati solution of the epsilon-augmented system, whose
  slack restricted to the original variables dominates ``epsilon^2 I``.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import block_diag

from ._sampling import sample_norm
from .config import DEFAULTS
from .exceptions import (DimensionMismatch, InconsistentTrajectory,
                         InfeasibleScaling, InvalidSimilarity, NoConvergence,
                         NoEpsilonFound, NonPositiveEpsilon, NotContractiveTarget,
                         NotHermitian, NotPositiveDefinite, NotStrictSchur,
                         SingularMiddleTerm, UnstableSystem)
from .similarity import SimilarityMap, verify_similarity
from .sysmat import SystemRealization, contraction_check, spectral_radius

__all__ = ['KypCertificate', 'kyp_slack', 'min_eig', 'spatial_kyp_check',
           'riccati_residual', 'riccati_iterates', 'riccati_solve',
           'certificate_from_similarity', 'hermitian_sqrt', 'contractive_similar',
           'augment', 'choose_epsilon', 'strict_solve', 'dissipation_check']

MODES = ('standard', 'strict')
METHODS = ('riccati_fixed_point', 'from_similarity', 'augmentation')


@dataclass(frozen=True)
class KypCertificate:
    """A solution ``H`` of the KYP inequality together with how it was obtained.

    ``margin`` is the smallest eigenvalue of the KYP slack; a strict
    certificate has positive margin.
    """
    H: np.ndarray
    mode: str
    margin: float
    method: str
    iterations: int = 0
    epsilon: Optional[float] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f'mode must be one of {MODES}, got {self.mode!r}')
        if self.method not in METHODS:
            raise ValueError(f'method must be one of {METHODS}, got {self.method!r}')

    @property
    def min_eig_H(self):
        return min_eig(self.H)


def min_eig(S):
    S = np.asarray(S)
    if S.size == 0:
        return np.inf
    return float(np.linalg.eigvalsh(S)[0])


def _hermitian(H, n, name='H'):
    H = np.asarray(H, dtype=complex)
    if H.shape != (n, n):
        raise DimensionMismatch(f'{name} must be {n}x{n}, got {H.shape}')
    if H.size and np.abs(H - H.conj().T).max() > 1e-10 * (1 + np.abs(H).max()):
        raise NotHermitian(f'{name} is not Hermitian')
    return (H + H.conj().T) / 2


def _herm(X):
    return (X + X.conj().T) / 2


def kyp_slack(sys, H):
    """``diag(H, I_U) - M^* diag(H, I_Y) M`` as a Hermitian matrix."""
    H = _hermitian(H, sys.n_state)
    M = sys.M
    W = block_diag(H, np.eye(sys.n_out))
    return _herm(block_diag(H, np.eye(sys.n_in)) - M.conj().T @ W @ M)


def spatial_kyp_check(sys, H_sqrt, samples):
    """Worst value of ``||(H_sqrt x, u)||^2 - ||(H_sqrt x', y)||^2`` over `samples`.

    Each sample is a pair ``(x, u)`` and ``(x', y) = M (x, u)``. All values are
    nonnegative for every sample exactly when ``H_sqrt^* H_sqrt`` solves the
    KYP inequality.
    """
    R = np.asarray(H_sqrt, dtype=complex)
    n = sys.n_state
    if R.shape != (n, n):
        raise DimensionMismatch(f'H_sqrt must be {n}x{n}, got {R.shape}')
    worst = np.inf
    for x, u in samples:
        x = np.asarray(x, dtype=complex).reshape(-1)
        u = np.asarray(u, dtype=complex).reshape(-1)
        if x.size != n or u.size != sys.n_in:
            raise DimensionMismatch('sample does not match the state/input dimensions')
        x_next = sys.A @ x + sys.B @ u
        y = sys.C @ x + sys.D @ u
        before = np.linalg.norm(R @ x) ** 2 + np.linalg.norm(u) ** 2
        after = np.linalg.norm(R @ x_next) ** 2 + np.linalg.norm(y) ** 2
        worst = min(worst, before - after)
    if worst == np.inf:
        raise DimensionMismatch('no samples given')
    return float(worst)


def _middle(sys, H):
    return _herm(np.eye(sys.n_in) - sys.B.conj().T @ H @ sys.B - sys.D.conj().T @ sys.D)


def _norm2(X):
    return float(np.linalg.norm(X, 2)) if X.size else 0.0


def _middle_floor(H):
    return 1e-12 * (1 + _norm2(H))


def _riccati_map(sys, H):
    """One application of the Riccati operator; raises if the middle term is not positive."""
    mid = _middle(sys, H)
    if sys.n_in and min_eig(mid) <= _middle_floor(H):
        raise SingularMiddleTerm('I - B*HB - D*D is not positive definite')
    Ah = sys.A.conj().T
    L = Ah @ H @ sys.B + sys.C.conj().T @ sys.D
    out = Ah @ H @ sys.A + sys.C.conj().T @ sys.C
    if sys.n_in:
        out = out + L @ np.linalg.solve(mid, L.conj().T)
    return _herm(out)


def riccati_residual(sys, H):
    """``H - A*HA - C*C - (A*HB + C*D)(I - B*HB - D*D)^{-1}(B*HA + D*C)``.

    By a Schur complement this is positive semidefinite exactly when
    :func:`kyp_slack` is, provided the middle term is positive definite.
    """
    H = _hermitian(H, sys.n_state)
    return _herm(H - _riccati_map(sys, H))


def riccati_iterates(sys):
    """Yield ``H_0 = 0, H_1, H_2, ...`` of ``H_{k+1} = Ric(H_k)``.

    Raises ``InfeasibleScaling`` as soon as the middle term loses positivity,
    which certifies that the norm of the transfer function is at least one.
    """
    H = np.zeros((sys.n_state, sys.n_state), dtype=complex)
    while True:
        yield H
        try:
            H = _riccati_map(sys, H)
        except SingularMiddleTerm as exc:
            raise InfeasibleScaling(str(exc)) from None


def _fixed_point(sys, tol, max_iter):
    it = riccati_iterates(sys)
    H = next(it)
    for k in range(1, max_iter + 1):
        H_next = next(it)
        if np.linalg.norm(H_next - H, 2) < tol * (1 + np.linalg.norm(H, 2)):
            return H_next, k
        H = H_next
    raise NoConvergence(f'Riccati iteration did not converge in {max_iter} steps')


def _doubling(sys, tol, max_iter):
    # Each step maps the iterate H_{2^k} of the fixed-point scheme to H_{2^{k+1}}.
    n, m = sys.n_state, sys.n_in
    A, B, C, D = sys.matrices
    R0 = _herm(np.eye(m) - D.conj().T @ D)
    if m and min_eig(R0) <= 1e-12:
        raise InfeasibleScaling('||D|| >= 1')
    I = np.eye(n)
    DC = D.conj().T @ C
    E = A + B @ np.linalg.solve(R0, DC) if m else A.copy()
    G = -B @ np.linalg.solve(R0, B.conj().T) if m else np.zeros((n, n))
    H = _herm(C.conj().T @ C + (DC.conj().T @ np.linalg.solve(R0, DC) if m else 0))
    for k in range(1, max_iter + 1):
        if m and min_eig(_middle(sys, H)) <= _middle_floor(H):
            raise InfeasibleScaling('I - B*HB - D*D lost positivity')
        W = I + G @ H
        Y = np.linalg.solve(W, E)
        H_next = _herm(H + E.conj().T @ H @ Y)
        G = _herm(G + E @ np.linalg.solve(W, G) @ E.conj().T)
        E = E @ Y
        step = np.linalg.norm(H_next - H, 2)
        scale = 1 + np.linalg.norm(H, 2)
        if min_eig(H_next - H) < -1e-10 * scale or not np.isfinite(step):
            raise InfeasibleScaling('Riccati iterates stopped increasing')
        if step < tol * scale:
            return H_next, k
        H = H_next
    raise NoConvergence(f'Riccati doubling did not converge in {max_iter} steps')


def riccati_solve(sys, tol=DEFAULTS.riccati, max_iter=DEFAULTS.max_iter, *,
                  method='fixed_point', n_samples=DEFAULTS.n_samples, check_norm=True):
    """Smallest solution of the KYP inequality via the Riccati fixed point from ``H = 0``.

    Parameters
    ----------
    sys : SystemRealization
        Needs a stable ``A`` and a transfer function of norm below one.
    tol : float
        Stop when ``||H_{k+1} - H_k|| < tol (1 + ||H_k||)``.
    max_iter : int
        Iteration cap (counts doubling steps for ``method='doubling'``).
    method : {'fixed_point', 'doubling'}
        ``'doubling'`` jumps from ``H_k`` to ``H_{2k}`` of the same sequence,
        which keeps the cost logarithmic near the boundary of feasibility.
    check_norm : bool
        Gate on the sampled norm (``n_samples`` circle points) before iterating.

    Raises
    ------
    UnstableSystem, InfeasibleScaling, NoConvergence
    """
    rho = spectral_radius(sys.A)
    if rho >= 1:
        raise UnstableSystem(f'spectral radius {rho:.6g} >= 1')
    if check_norm:
        s = sample_norm(sys, n_samples)
        if s >= 1:
            raise InfeasibleScaling(f'sampled norm {s:.6g} >= 1')
    if sys.n_state == 0:
        H, iters = np.zeros((0, 0), dtype=complex), 0
    elif method == 'fixed_point':
        H, iters = _fixed_point(sys, tol, max_iter)
    elif method == 'doubling':
        H, iters = _doubling(sys, tol, max_iter)
    else:
        raise ValueError(f'unknown method {method!r}')
    margin = min_eig(kyp_slack(sys, H))
    if margin < -1e-6 * (1 + _norm2(H)):
        raise InfeasibleScaling(f'limit violates the KYP inequality (margin {margin:.3g})')
    return KypCertificate(H, 'standard', margin, 'riccati_fixed_point', iters)


def certificate_from_similarity(sys, sim, sys_contractive, tol=1e-8):
    """``H = Gamma^* Gamma`` for a similarity from `sys` onto a contractive realization."""
    if not isinstance(sim, SimilarityMap):
        raise TypeError('sim must be a SimilarityMap')
    res = verify_similarity(sys, sys_contractive, sim)
    if res.max() > tol:
        raise InvalidSimilarity(f'similarity residual {res.max():.3g} exceeds {tol:.3g}')
    ok, smax = contraction_check(sys_contractive.M, tol)
    if not ok:
        raise NotContractiveTarget(f'target system matrix has norm {smax:.12g} > 1')
    G = np.asarray(sim.gamma, dtype=complex)
    H = _herm(G.conj().T @ G)
    return KypCertificate(H, 'standard', min_eig(kyp_slack(sys, H)), 'from_similarity')


def hermitian_sqrt(H, inverse=False):
    """Hermitian square root (or inverse square root) of a positive-definite matrix."""
    H = _herm(np.asarray(H, dtype=complex))
    w, V = np.linalg.eigh(H)
    if w.size and w[0] <= 0:
        raise NotPositiveDefinite(f'H has smallest eigenvalue {w[0]:.3g} <= 0')
    d = w ** (-0.5 if inverse else 0.5)
    return _herm((V * d) @ V.conj().T)


def contractive_similar(sys, cert):
    """``(H^{1/2} A H^{-1/2}, H^{1/2} B, C H^{-1/2}, D)`` for a certificate (or matrix) ``H``."""
    H = cert.H if isinstance(cert, KypCertificate) else cert
    H = _hermitian(H, sys.n_state)
    R = hermitian_sqrt(H)
    Ri = hermitian_sqrt(H, inverse=True)
    return SystemRealization(R @ sys.A @ Ri, R @ sys.B, sys.C @ Ri, sys.D,
                             n_state=sys.n_state, n_in=sys.n_in, n_out=sys.n_out)


def augment(sys, epsilon):
    """Epsilon-augmented realization with the same state space.

    Input space ``U + X``, output space ``Y + X + U``::

        A_e = A,   B_e = [B, eps I],   C_e = [C; eps I; 0],
        D_e = [[D, 0], [0, 0], [eps I, 0]]

    ``B_e`` is onto and ``C_e`` is injective, so the result is minimal.
    """
    eps = float(epsilon)
    if not eps > 0:
        raise NonPositiveEpsilon(f'epsilon must be positive, got {epsilon}')
    n, m, p = sys.n_state, sys.n_in, sys.n_out
    A, B, C, D = sys.matrices
    Be = np.hstack([B, eps * np.eye(n)])
    Ce = np.vstack([C, eps * np.eye(n), np.zeros((m, n))])
    De = np.block([[D, np.zeros((p, n))],
                   [np.zeros((n, m)), np.zeros((n, n))],
                   [eps * np.eye(m), np.zeros((m, n))]])
    return SystemRealization(A, Be, Ce, De, n_state=n, n_in=m + n, n_out=p + n + m)


def choose_epsilon(sys, n_samples=DEFAULTS.n_samples, tol=DEFAULTS.rel, max_halvings=60):
    """Largest ``eps = (1 - s)/4 / 2^k`` keeping the augmented sampled norm below ``(1 + s)/2``.

    ``s`` is the sampled norm of `sys` itself.
    """
    rho = spectral_radius(sys.A)
    if rho >= 1:
        raise UnstableSystem(f'spectral radius {rho:.6g} >= 1')
    s = sample_norm(sys, n_samples)
    if s >= 1 - tol:
        raise NotStrictSchur(f'sampled norm {s:.12g} is not below 1')
    cap = (1 + s) / 2
    eps = (1 - s) / 4
    for _ in range(max_halvings + 1):
        if sample_norm(augment(sys, eps), n_samples) <= cap:
            return eps
        eps /= 2
    raise NoEpsilonFound(f'no epsilon found after {max_halvings} halvings')


def strict_solve(sys, tol=DEFAULTS.rel, *, riccati_tol=DEFAULTS.riccati,
                 max_iter=DEFAULTS.max_iter, method='fixed_point',
                 n_samples=DEFAULTS.n_samples):
    """Strict KYP solution from the smallest Riccati solution of the augmented system.

    The slack of the augmented system restricted to the original state and
    input variables equals ``S(H) - eps^2 I``, so the returned margin is at
    least ``eps^2`` up to the Riccati convergence error.
    """
    eps = choose_epsilon(sys, n_samples, tol)
    aug = riccati_solve(augment(sys, eps), riccati_tol, max_iter,
                        method=method, n_samples=n_samples)
    margin = min_eig(kyp_slack(sys, aug.H))
    if not margin > 0:
        raise InfeasibleScaling(f'strict margin {margin:.3g} is not positive')
    return KypCertificate(aug.H, 'strict', margin, 'augmentation', aug.iterations, eps)


def dissipation_check(sys, H, traj, consistency_tol=1e-9):
    """Worst step of ``S(x(n+1)) - S(x(n)) - ||u(n)||^2 + ||y(n)||^2`` with ``S(x) = <Hx, x>``.

    Nonpositive values on every step mean ``S`` is a storage function along
    `traj`. Returns ``-inf`` for an empty trajectory.
    """
    H = _hermitian(H, sys.n_state)
    if traj.recursion_residual(sys) > consistency_tol:
        raise InconsistentTrajectory('trajectory does not satisfy the system recursion')
    if len(traj) == 0:
        return -np.inf
    X = traj.states
    S = np.einsum('ki,ij,kj->k', X.conj(), H, X).real
    u2 = np.sum(np.abs(traj.inputs) ** 2, axis=1)
    y2 = np.sum(np.abs(traj.outputs) ** 2, axis=1)
    return float(np.max(S[1:] - S[:-1] - u2 + y2))
