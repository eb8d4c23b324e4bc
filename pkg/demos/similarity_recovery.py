"""
Recovering a state-space similarity
===================================

Two minimal realizations of one transfer function differ by an invertible
change of state coordinates. Build one from the other and recover the map
from the reachability operators alone.
"""
import numpy as np

from brlkit import compute_similarity, kalman_minimal, moment_match, transform_system
from brlkit.testing import random_minimal, random_transform

rng = np.random.default_rng(0)
sys = random_minimal(rng, 4, 2, 2, complex_=True)
T = random_transform(rng, 4, max_cond=50)
moved = transform_system(sys, T)

print('same Markov coefficients:', moment_match(sys, moved))
sim = compute_similarity(sys, moved)
print('relative error in the recovered map:',
      np.linalg.norm(sim.gamma - T, 2) / np.linalg.norm(T, 2))
print('intertwining residuals:', sim.residuals)

# a padded realization is not minimal; reduce it first
A = np.block([[sys.A, np.zeros((4, 1))], [np.zeros((1, 4)), 0.3 * np.eye(1)]])
B = np.vstack([sys.B, np.zeros((1, 2))])
C = np.hstack([sys.C, np.ones((2, 1))])
padded = type(sys)(A, B, C, sys.D)
reduced = kalman_minimal(padded)
print('padded state dimension', padded.n_state, '-> reduced', reduced.n_state)
print('reduced realization is similar to the original:',
      compute_similarity(reduced, sys).valid)
