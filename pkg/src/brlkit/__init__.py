"""Bounded real lemma toolkit for discrete-time linear systems."""
from .config import DEFAULTS, Tolerances
from .exceptions import *  # noqa: F401,F403
from .sysmat import (SystemRealization, Trajectory, TransferSample, eval_transfer,
                     transfer_on_points, markov_coefficients, adjoint_system,
                     transform_system, scale_io, simulate, contraction_check,
                     spectral_radius)
from .operators import (OperatorTruncation, MinimalityReport, reverse_blocks,
                        truncate_operators, controllability_gramian,
                        observability_gramian, classify_minimality, kalman_minimal,
                        shift_probe, divergence_probe)
from .similarity import (Residuals, SimilarityMap, moment_match, compute_similarity,
                         verify_similarity)
from .kyp import (KypCertificate, kyp_slack, spatial_kyp_check, riccati_residual,
                  riccati_iterates, riccati_solve, certificate_from_similarity,
                  contractive_similar, augment, choose_epsilon, strict_solve,
                  dissipation_check)
from .hinf import NormBound, SchurClass, sample_norm, hinf_certified, classify_schur

__version__ = '0.1.0'
