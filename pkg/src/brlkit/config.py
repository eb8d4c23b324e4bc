"""Central tolerance defaults."""
from dataclasses import dataclass, replace
import os

__all__ = ['Tolerances', 'DEFAULTS', 'from_env']


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-9             # generic relative check tolerance
    rank: float = 1e-9            # singular values below rank*sigma_max are zero
    cond_cap: float = 1e12        # resolvents / transforms beyond this are singular
    riccati: float = 1e-14        # Riccati convergence: |dH| < riccati*(1+|H|)
    n_samples: int = 4096         # circle points for sampled norms
    max_iter: int = 10000         # Riccati iteration cap
    stein: float = 1e-14          # Stein doubling stopping threshold


DEFAULTS = Tolerances()


def from_env(env=None):
    """Defaults with ``BRLKIT_TOL`` (if set) overriding the generic tolerance."""
    env = os.environ if env is None else env
    raw = env.get('BRLKIT_TOL')
    if not raw:
        return DEFAULTS
    value = float(raw)
    if not value >= 0:
        raise ValueError(f'BRLKIT_TOL must be nonnegative, got {raw!r}')
    return replace(DEFAULTS, rel=value)
