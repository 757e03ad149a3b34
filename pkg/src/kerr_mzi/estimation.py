"""Phase-uncertainty calculus for Kerr phase estimation.

Error propagation for parity signals, quantum Fisher information (closed
forms and the series they come from), the fixed-number scaling limit 1/N^k,
the fluctuating-number limit 1/sqrt(nu <N^4>), and the dB gain over 1/Nbar^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signals import (
    CosineSeriesSignal,
    ec_parity_series,
    ec_sector_weights,
    evaluate_signal,
    noon_parity_series,
    signal_derivative,
    tf_parity_series,
    tmsv_parity_series,
)
from .special import TruncationPolicy, geometric_moment, geometric_weights_array, truncation_cutoff
from .states import NOON, TMSV, EntangledCoherent, InputStateSpec, TwinFock

__all__ = [
    "SensitivityReport",
    "BoundSet",
    "error_propagation_sensitivity",
    "zero_phase_sensitivity_limit",
    "qfi_tf",
    "qfi_tmsv_closed",
    "qfi_tmsv_series",
    "qfi_noon",
    "qfi_ec_series",
    "qfi_ec_asymptotic",
    "qfi_ec_joo",
    "qfi_for_state",
    "parity_signal_for_state",
    "qcr_bound",
    "bgsl",
    "fourth_moment_total_photon",
    "generalized_limit",
    "bound_set",
    "sensitivity_gain",
    "gain_asymptote_tmsv",
    "one_axis_twisting_limit",
    "coherent_kerr_scaling",
    "tmsv_fourth_moment_from_pairs",
    "sensitivity_report",
]

BOUND_ATOL = 1e-12
DERIVATIVE_ATOL = 1e-14


def _check_nu(nu):
    if int(nu) != nu or nu < 1:
        raise ValueError(f"repetition count nu must be a positive integer, got {nu!r}")


# -- error propagation -----------------------------------------------------


def error_propagation_sensitivity(s: CosineSeriesSignal, phi: float, nu: int = 1) -> float:
    """sqrt(1 - S^2) / (sqrt(nu) |S'|), using parity^2 = identity.

    Raises ``ValueError`` where the slope vanishes (phi = 0 in particular);
    use :func:`zero_phase_sensitivity_limit` there.
    """
    _check_nu(nu)
    value = evaluate_signal(s, phi)
    slope = signal_derivative(s, phi)
    if abs(slope) <= DERIVATIVE_ATOL:
        raise ValueError(
            f"signal slope vanishes at phi={phi!r}; use zero_phase_sensitivity_limit for phi -> 0"
        )
    # half-angle forms avoid cancellation when S is near +1 or -1:
    # 1 - S = (1 - peak) + 2 sum W sin^2(w phi / 2), 1 + S = (1 + offset - sum W) + 2 sum W cos^2(w phi / 2)
    half = 0.5 * float(phi) * s.frequencies
    w_sum = float(np.sum(s.weights))
    one_minus = (1.0 - s.offset - w_sum) + 2.0 * float(np.dot(s.weights, np.sin(half) ** 2))
    one_plus = (1.0 + s.offset - w_sum) + 2.0 * float(np.dot(s.weights, np.cos(half) ** 2))
    variance = max(one_minus * one_plus, 0.0)
    return math.sqrt(variance) / (math.sqrt(nu) * abs(slope))


def zero_phase_sensitivity_limit(s: CosineSeriesSignal, nu: int = 1) -> float:
    """Limit of the error-propagation formula as phi -> 0+.

    For a unit-peak even signal S = 1 - M phi^2 / 2 + ..., with
    M = sum_j W_j w_j^2, the ratio tends to 1 / sqrt(nu M).
    """
    _check_nu(nu)
    tol = 10.0 * s.tail_epsilon + 1e-12
    if abs(s.peak - 1.0) > tol:
        raise ValueError(f"signal peak S(0)={s.peak!r} is not 1 within {tol:g}")
    m = s.curvature_moment()
    if m <= 0:
        raise ValueError("signal has no curvature at phi = 0")
    return 1.0 / math.sqrt(nu * m)


# -- quantum Fisher information --------------------------------------------


def qfi_tf(n: int) -> float:
    """QFI of |n, n> for the Kerr phase: 17/2 n^4 + 9 n^3 - n^2/2 - n."""
    n = float(n)
    return 8.5 * n**4 + 9.0 * n**3 - 0.5 * n**2 - n


def qfi_tmsv_closed(nbar: float) -> float:
    x = float(nbar)
    return 12.75 * x**4 + 45.0 * x**3 + 43.0 * x**2 + 8.0 * x


def qfi_tmsv_series(nbar: float, policy: TruncationPolicy | None = None) -> float:
    """sum_{n <= n_max} p_n F_TF(n), the phase-averaged TMSV QFI summed directly."""
    if policy is None:
        policy = truncation_cutoff(TMSV(nbar), 1e-12)
    p = geometric_weights_array(nbar, policy.n_max)
    n = np.arange(policy.n_max + 1, dtype=float)
    f = 8.5 * n**4 + 9.0 * n**3 - 0.5 * n**2 - n
    # small terms first
    return float(np.sum((p * f)[::-1]))


def qfi_noon(N: int) -> float:
    return float(N) ** 4


def qfi_ec_series(alpha: float, policy: TruncationPolicy | None = None) -> float:
    """2 N_alpha^2 sum_{n>=1} |c_n|^2 n^4 for the phase-averaged EC state."""
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha!r}")
    if policy is None:
        policy = truncation_cutoff(EntangledCoherent(alpha), 1e-12)
    w = ec_sector_weights(alpha, policy)
    n = np.arange(policy.n_max + 1, dtype=float)
    return float(np.sum(w[1:] * n[1:] ** 4))


def qfi_ec_asymptotic(nbar: float) -> float:
    x = float(nbar)
    return x**4 + 6.0 * x**3 + 7.0 * x**2 + x


def qfi_ec_joo(nbar: float) -> float:
    """Reference-beam EC value, kept for comparison curves only."""
    x = float(nbar)
    return x**4 + 10.0 * x**3 + 13.0 * x**2 + 2.0 * x


def qfi_for_state(spec: InputStateSpec, tail_epsilon: float = 1e-12) -> float:
    if isinstance(spec, TwinFock):
        return qfi_tf(spec.n)
    if isinstance(spec, TMSV):
        return qfi_tmsv_closed(spec.nbar)
    if isinstance(spec, NOON):
        return qfi_noon(spec.n)
    if isinstance(spec, EntangledCoherent):
        return qfi_ec_series(spec.alpha, truncation_cutoff(spec, tail_epsilon))
    raise TypeError(f"unsupported state {spec!r}")


def parity_signal_for_state(spec: InputStateSpec, tail_epsilon: float = 1e-12) -> CosineSeriesSignal:
    if isinstance(spec, TwinFock):
        return tf_parity_series(spec.n)
    if isinstance(spec, TMSV):
        return tmsv_parity_series(spec.nbar, truncation_cutoff(spec, tail_epsilon))
    if isinstance(spec, NOON):
        return noon_parity_series(spec.n)
    if isinstance(spec, EntangledCoherent):
        return ec_parity_series(spec.alpha, truncation_cutoff(spec, tail_epsilon))
    raise TypeError(f"unsupported state {spec!r}")


# -- bounds ----------------------------------------------------------------


def qcr_bound(F: float, nu: int = 1) -> float:
    _check_nu(nu)
    if not F > 0:
        raise ValueError(f"Fisher information must be > 0, got {F!r}")
    return 1.0 / math.sqrt(nu * F)


def bgsl(N: float, k: int = 2, nu: int = 1) -> float:
    """Fixed-particle-number scaling limit 1/(sqrt(nu) N^k) for a k-body generator."""
    _check_nu(nu)
    if not N > 0:
        raise ValueError(f"N must be > 0, got {N!r}")
    return 1.0 / (math.sqrt(nu) * float(N) ** k)


def fourth_moment_total_photon(spec: InputStateSpec, policy: TruncationPolicy | None = None) -> float:
    """<N^4> of the total photon number (beam splitters conserve N, so input = probe)."""
    if isinstance(spec, TwinFock):
        return (2.0 * spec.n) ** 4
    if isinstance(spec, NOON):
        return float(spec.n) ** 4
    if isinstance(spec, TMSV):
        x = spec.nbar
        return 24.0 * x**4 + 72.0 * x**3 + 56.0 * x**2 + 8.0 * x
    if isinstance(spec, EntangledCoherent):
        if policy is None:
            policy = truncation_cutoff(spec, 1e-12)
        w = ec_sector_weights(spec.alpha, policy)
        n = np.arange(policy.n_max + 1, dtype=float)
        return float(np.sum(w * n**4))
    raise TypeError(f"unsupported state {spec!r}")


def tmsv_fourth_moment_from_pairs(nbar: float) -> float:
    """16 <n^4> over the pair distribution, since <n,n|N^4|n,n> = 16 n^4."""
    return 16.0 * geometric_moment(nbar, 4)


def generalized_limit(fourth_moment: float, nu: int = 1) -> float:
    _check_nu(nu)
    if not fourth_moment > 0:
        raise ValueError(f"fourth moment must be > 0, got {fourth_moment!r}")
    return 1.0 / math.sqrt(nu * fourth_moment)


@dataclass(frozen=True)
class BoundSet:
    bgsl_value: float
    generalized_value: float
    fourth_moment: float


def bound_set(spec: InputStateSpec, nu: int = 1, tail_epsilon: float = 1e-12) -> BoundSet:
    policy = truncation_cutoff(spec, tail_epsilon) if isinstance(spec, (TMSV, EntangledCoherent)) else None
    m4 = fourth_moment_total_photon(spec, policy)
    return BoundSet(bgsl(spec.mean_photons, 2, nu), generalized_limit(m4, nu), m4)


def sensitivity_gain(F: float, nbar: float) -> float:
    """Gain in dB over 1/nbar^2: -10 log10(nbar^2 / sqrt(F))."""
    if not F > 0 or not nbar > 0:
        raise ValueError(f"F and nbar must be > 0, got F={F!r}, nbar={nbar!r}")
    return -10.0 * math.log10(nbar**2 / math.sqrt(F))


def gain_asymptote_tmsv() -> float:
    """Large-nbar limit 5 log10(51/4) of the TMSV gain."""
    return 5.0 * math.log10(51.0 / 4.0)


def one_axis_twisting_limit(N: int, nu: int = 1) -> float:
    """4/(sqrt(nu) N^2): the bound for a J_z^2 generator on N particles."""
    _check_nu(nu)
    if not N > 0:
        raise ValueError(f"N must be > 0, got {N!r}")
    return 4.0 / (math.sqrt(nu) * float(N) ** 2)


def coherent_kerr_scaling(nbar: float, nu: int = 1) -> float:
    """1/(sqrt(nu) nbar^(3/2)), the coherent-state Kerr scaling that bounds the shaded band of the sensitivity plot."""
    _check_nu(nu)
    if not nbar > 0:
        raise ValueError(f"nbar must be > 0, got {nbar!r}")
    return 1.0 / (math.sqrt(nu) * float(nbar) ** 1.5)


# -- reports ---------------------------------------------------------------


@dataclass(frozen=True)
class SensitivityReport:
    state: InputStateSpec
    nbar: float
    nu: int
    delta_phi_parity: float
    qcr_bound: float
    bgsl: float
    generalized_limit: float
    gain_db: float

    def __post_init__(self):
        if self.delta_phi_parity < self.qcr_bound - BOUND_ATOL:
            raise ArithmeticError(
                f"parity sensitivity {self.delta_phi_parity} beats the QCR bound {self.qcr_bound}"
            )
        if self.qcr_bound < self.generalized_limit - BOUND_ATOL:
            raise ArithmeticError(
                f"QCR bound {self.qcr_bound} beats the generalized limit {self.generalized_limit}"
            )

    def as_row(self) -> dict:
        return {
            "nbar": self.nbar,
            "nu": self.nu,
            "delta_phi_parity": self.delta_phi_parity,
            "qcr_bound": self.qcr_bound,
            "bgsl": self.bgsl,
            "generalized_limit": self.generalized_limit,
            "gain_db": self.gain_db,
        }


def sensitivity_report(
    spec: InputStateSpec, nu: int = 1, tail_epsilon: float = 1e-12, phi: float | None = None
) -> SensitivityReport:
    """Parity sensitivity (phi -> 0+ unless ``phi`` is given) next to every bound."""
    nbar = spec.mean_photons
    if not nbar > 0:
        raise ValueError("sensitivity reports need a state with nbar > 0")
    signal = parity_signal_for_state(spec, tail_epsilon)
    if phi is None:
        dphi = zero_phase_sensitivity_limit(signal, nu)
    else:
        dphi = error_propagation_sensitivity(signal, phi, nu)
    F = qfi_for_state(spec, tail_epsilon)
    bounds = bound_set(spec, nu, tail_epsilon)
    return SensitivityReport(
        state=spec,
        nbar=nbar,
        nu=int(nu),
        delta_phi_parity=dphi,
        qcr_bound=qcr_bound(F, nu),
        bgsl=bounds.bgsl_value,
        generalized_limit=bounds.generalized_value,
        gain_db=sensitivity_gain(F, nbar),
    )
