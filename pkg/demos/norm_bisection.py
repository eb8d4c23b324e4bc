"""
Certified bounds on the supremum norm
=====================================

Sampling the unit circle gives a lower bound on the supremum of the
transfer function over the disk. Bisection on the scaling factor, with a KYP
solution as witness for each feasible scale, gives a certified upper bound.
"""
import numpy as np

from brlkit import SystemRealization, classify_schur, hinf_certified, sample_norm

# |z / (1 - z/2)| is largest at z = 1, where it equals 2
sys = SystemRealization([[0.5]], [[1.0]], [[1.0]], [[0.0]])
for n in (16, 256, 4096):
    print(f'{n:5d} samples: {sample_norm(sys, n):.12f}')

for tol in (1e-2, 1e-4, 1e-7):
    nb = hinf_certified(sys, tol=tol)
    print(f'tol {tol:g}: [{nb.lower:.10f}, {nb.upper:.10f}]')

# classification of a few scalar examples
cases = {
    'norm 2': sys,
    'norm 2/3': SystemRealization([[0.5]], [[1.0]], [[1 / 3]], [[0.0]]),
    'unitary D': SystemRealization([[0.5]], np.zeros((1, 2)), np.zeros((2, 1)),
                                   [[0, 1], [1, 0]]),
    'unstable': SystemRealization([[2.0]], [[1.0]], [[1.0]], [[0.0]]),
}
for name, s in cases.items():
    print(f'{name:10s} -> {classify_schur(s).value}')
