"""
KYP certificates and contractive realizations
=============================================

For a stable system whose transfer function has norm below one, the Riccati
iteration from zero produces a solution H of the KYP inequality. Changing
coordinates with the square root of H gives a realization whose system
matrix is a contraction. The epsilon-augmented system yields a strict
solution.
"""
import numpy as np

from brlkit import (contraction_check, contractive_similar, kyp_slack, riccati_solve,
                    strict_solve)
from brlkit.kyp import min_eig
from brlkit.testing import random_minimal, with_sampled_norm

rng = np.random.default_rng(1)
sys = with_sampled_norm(random_minimal(rng, 4, 2, 2, gramian_floor=1e-6), 0.8)
print('system matrix norm before:', np.linalg.norm(sys.M, 2))

cert = riccati_solve(sys)
print(f'Riccati solution after {cert.iterations} steps, '
      f'smallest slack eigenvalue {cert.margin:.3e}')
print('eigenvalues of H:', np.linalg.eigvalsh(cert.H).round(4))

contractive = contractive_similar(sys, cert)
print('system matrix norm after the change of coordinates:',
      contraction_check(contractive.M).sigma_max)

strict = strict_solve(sys)
print(f'strict solution: epsilon = {strict.epsilon:.4g}, margin = {strict.margin:.4g}, '
      f'epsilon^2 = {strict.epsilon ** 2:.4g}')

# an arbitrary positive H is not a certificate
print('slack of H = 10 I:', min_eig(kyp_slack(sys, 10 * np.eye(sys.n_state))))
