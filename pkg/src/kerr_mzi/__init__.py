"""Kerr-nonlinear Mach-Zehnder phase estimation with parity detection.

Closed-form parity signals and Fisher information for twin Fock, two-mode
squeezed vacuum, NOON and entangled coherent inputs, an independent
truncated Fock-space simulator that checks them, and table generators for
the signal, sensitivity and gain figures.
"""

__version__ = "0.1.0"

from .states import NOON, TMSV, EntangledCoherent, TwinFock, make_state, state_for_mean_photons  # noqa: E402
from .special import TruncationPolicy, truncation_cutoff  # noqa: E402
from .signals import (  # noqa: E402
    CosineSeriesSignal,
    ec_parity_series,
    evaluate_signal,
    noon_parity_series,
    signal_derivative,
    tf_parity_series,
    tmsv_parity_series,
)
from .estimation import (  # noqa: E402
    error_propagation_sensitivity,
    qcr_bound,
    qfi_tf,
    qfi_tmsv_closed,
    sensitivity_report,
    zero_phase_sensitivity_limit,
)
