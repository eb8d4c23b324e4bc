"""
Transfer functions, Markov coefficients and Hankel blocks
=========================================================

Evaluate a small realization on the disk, compare with its power series and
check the factorization of the truncated Hankel block.
"""
import numpy as np

from brlkit import (SystemRealization, divergence_probe, eval_transfer, markov_coefficients,
                    reverse_blocks, shift_probe, truncate_operators)

# a scalar system whose transfer function is z / (1 - z/2)
sys = SystemRealization([[0.5]], [[1.0]], [[1.0]], [[0.0]])
z = 0.3 + 0.4j
print('F(z)          ', eval_transfer(sys, z).value[0, 0])
print('closed form   ', z / (1 - z / 2))

# the series D + CB z + CAB z^2 + ... converges on the disk
coeffs = markov_coefficients(sys, 40)
print('partial sum   ', sum(F[0, 0] * z ** k for k, F in enumerate(coeffs)))

# Hankel blocks come from the Markov coefficients and factor through the state space
tr = truncate_operators(sys, 5)
print('hankel\n', tr.hankel.real)
fact = tr.Wo @ reverse_blocks(tr.Wc, sys.n_in)
print('factorization residual', np.linalg.norm(tr.hankel - fact))

# the nilpotent shift: the reachability block is the identity at every horizon
N = 6
print('shift Wc block is identity:',
      np.array_equal(reverse_blocks(truncate_operators(shift_probe(N), N).Wc, 1), np.eye(N)))

# A = [2] has an observability operator growing like 2^(N-1)
for N in (5, 10, 20, 40):
    print(f'N = {N:2d}  ||Wo|| = {divergence_probe(N):.6g}  '
          f'ratio = {divergence_probe(N) / divergence_probe(N - 1):.9f}')
