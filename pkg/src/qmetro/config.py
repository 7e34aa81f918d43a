"""Central numerical tolerance settings.

All modules read their thresholds from one record so that property tests
have a single knob to turn.  The defaults are absolute tolerances on
matrices normalised to O(1) entries (density matrices, spin operators
divided by N/2, ...).
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # Hermiticity acceptance, relative to the largest matrix entry.
    hermiticity: float = 1e-12
    # Eigendecomposition reconstruction residual, relative to max|M|.
    reconstruction: float = 1e-10
    # Orthonormality / unitarity defect.
    unitarity: float = 1e-10
    # Most negative eigenvalue still accepted as PSD (clamped to zero).
    psd_floor: float = -1e-10
    # State norm / trace deviation from 1.
    state_norm: float = 1e-10
    # Eigenvalue-pair floor in the Fisher-information sums: terms with
    # lambda_k + lambda_l below this are dropped (zero-support pairs).
    qfi_pair_floor: float = 1e-12
    # Probability floor for classical Fisher information outcomes.
    prob_floor: float = 1e-12
    # Witness verdicts: |value - threshold| below this reports "boundary".
    verdict: float = 1e-9
    # Unit-vector norm check for direction operators.
    direction_norm: float = 1e-9


DEFAULT_TOLS = Tolerances()

# hbar = 1 everywhere; single spins are spin-1/2, j_l = sigma_l / 2.
SPIN = 0.5
