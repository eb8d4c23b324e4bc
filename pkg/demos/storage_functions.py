"""
Storage functions along trajectories
====================================

A KYP solution H defines the storage S(x) = <Hx, x>. Along any trajectory,
the storage can grow by at most the supplied input energy minus the output
energy.
"""
import numpy as np

from brlkit import dissipation_check, simulate, strict_solve
from brlkit.testing import random_minimal, random_trajectory_inputs, with_sampled_norm

rng = np.random.default_rng(2)
sys = with_sampled_norm(random_minimal(rng, 3, 1, 2, gramian_floor=1e-6), 0.7)
H = strict_solve(sys).H

worst = -np.inf
for _ in range(200):
    x0 = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    traj = simulate(sys, x0, random_trajectory_inputs(rng, 50, 1))
    worst = max(worst, dissipation_check(sys, H, traj))
print('largest storage increase minus supply over 200 trajectories:', worst)

# a multiple of the identity is not a storage for this system: too small and the
# output energy is not paid for, too large and the state energy can grow
for scale in (0.01, 10.0):
    worst = max(dissipation_check(sys, scale * np.eye(3),
                                  simulate(sys, rng.standard_normal(3),
                                           random_trajectory_inputs(rng, 50, 1)))
                for _ in range(20))
    print(f'H = {scale:g} I: largest storage increase minus supply {worst:.3g}')
