"""Closed-form parity signals at output port b, stored as exact cosine series.

A signal is S(phi) = offset + sum_j W_j cos(w_j phi).  Keeping the series
rather than samples gives exact derivatives and an exact phi -> 0 expansion.
All frequencies that occur here (4n(n-2k) for twin Fock, n^2 for NOON) are
integers, so equal frequencies are merged exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import (
    TruncationPolicy,
    geometric_weights_array,
    log_factorial_table,
    poisson_weights_array,
    truncation_cutoff,
)
from .states import EntangledCoherent, TMSV, ec_norm_sq

__all__ = [
    "CosineSeriesSignal",
    "GeometricWeights",
    "BeamSplitterCoefficients",
    "tmsv_weight",
    "geometric_weights",
    "beam_splitter_coefficient",
    "beam_splitter_coefficients",
    "ec_sector_weights",
    "tf_parity_series",
    "tmsv_parity_series",
    "noon_parity_series",
    "ec_parity_series",
    "evaluate_signal",
    "signal_derivative",
    "central_peak_width",
]


@dataclass(frozen=True)
class CosineSeriesSignal:
    """offset + sum_j weights[j] * cos(frequencies[j] * phi).

    Frequencies are nonnegative, distinct and nonzero; zero-frequency weight
    lives in ``offset``.  ``tail_epsilon`` records how much probability mass
    the series dropped when it was truncated (0 for exact series).
    """

    weights: np.ndarray
    frequencies: np.ndarray
    offset: float = 0.0
    tail_epsilon: float = 0.0

    @classmethod
    def from_terms(cls, weights, frequencies, offset=0.0, tail_epsilon=0.0) -> "CosineSeriesSignal":
        """Fold +-w together, move w = 0 into the offset and merge equal frequencies."""
        w = np.asarray(weights, dtype=float).ravel()
        f = np.abs(np.asarray(frequencies, dtype=float).ravel())
        if w.shape != f.shape:
            raise ValueError("weights and frequencies must have the same length")
        zero = f == 0
        offset = float(offset) + float(w[zero].sum())
        w, f = w[~zero], f[~zero]
        if f.size:
            freqs, inverse = np.unique(f, return_inverse=True)
            merged = np.bincount(inverse, weights=w, minlength=freqs.size)
        else:
            freqs, merged = f, w
        freqs = np.ascontiguousarray(freqs)
        merged = np.ascontiguousarray(merged)
        freqs.setflags(write=False)
        merged.setflags(write=False)
        return cls(merged, freqs, offset, float(tail_epsilon))

    @classmethod
    def constant(cls, value: float) -> "CosineSeriesSignal":
        return cls.from_terms([], [], offset=value)

    @property
    def terms(self) -> list[tuple[float, float]]:
        return list(zip(self.weights.tolist(), self.frequencies.tolist()))

    def __call__(self, phi):
        return evaluate_signal(self, phi)

    def derivative(self, phi):
        return signal_derivative(self, phi)

    @property
    def peak(self) -> float:
        """S(0)."""
        return self.offset + float(np.sum(self.weights))

    def curvature_moment(self) -> float:
        """sum_j W_j w_j^2, i.e. -S''(0)."""
        return float(np.dot(self.weights, self.frequencies**2))


def evaluate_signal(s: CosineSeriesSignal, phi):
    phi_arr = np.asarray(phi, dtype=float)
    vals = s.offset + np.cos(np.multiply.outer(phi_arr, s.frequencies)) @ s.weights
    return float(vals) if vals.ndim == 0 else vals


def signal_derivative(s: CosineSeriesSignal, phi):
    phi_arr = np.asarray(phi, dtype=float)
    vals = -(np.sin(np.multiply.outer(phi_arr, s.frequencies)) @ (s.weights * s.frequencies))
    return float(vals) if vals.ndim == 0 else vals


# -- weights ---------------------------------------------------------------


def tmsv_weight(n: int, nbar: float) -> float:
    """p_n = (1 - r) r^n, r = nbar/(nbar + 2): probability of the pair |n, n>."""
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar!r}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n!r}")
    if nbar == 0:
        return 1.0 if n == 0 else 0.0
    r = nbar / (nbar + 2.0)
    return (1.0 - r) * r**n


@dataclass(frozen=True)
class GeometricWeights:
    nbar: float
    weights: np.ndarray

    @property
    def retained_mass(self) -> float:
        return float(self.weights.sum())


def geometric_weights(nbar: float, policy: TruncationPolicy) -> GeometricWeights:
    return GeometricWeights(float(nbar), geometric_weights_array(nbar, policy.n_max))


@dataclass(frozen=True)
class BeamSplitterCoefficients:
    """Amplitudes c[k] of |2k, 2n-2k> in B1|n, n>."""

    n: int
    c: np.ndarray


def beam_splitter_coefficients(n: int) -> BeamSplitterCoefficients:
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n!r}")
    k = np.arange(n + 1)
    log_mag = -n * math.log(2.0) + 0.5 * (
        _log_central_binomial(k) + _log_central_binomial(n - k)
    )
    sign = np.where((n - k) % 2 == 0, 1.0, -1.0)
    return BeamSplitterCoefficients(int(n), sign * np.exp(log_mag))


def _log_central_binomial(m: np.ndarray) -> np.ndarray:
    """log C(2m, m) elementwise."""
    m = np.asarray(m, dtype=np.int64)
    top = int(2 * m.max()) if m.size else 0
    t = log_factorial_table(top).values
    return t[2 * m] - 2.0 * t[m]


def beam_splitter_coefficient(n: int, k: int) -> float:
    """(-1)^(n-k) 2^(-n) sqrt(C(2k, k) C(2n-2k, n-k))."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n!r}")
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in 0..{n}, got {k!r}")
    return float(beam_splitter_coefficients(n).c[k])


def ec_sector_weights(alpha: float, policy: TruncationPolicy) -> np.ndarray:
    """Probability of each NOON sector n = 0..n_max in the phase-averaged EC state.

    Sector n >= 1 carries 2 N_alpha^2 |c_n|^2; the n = 0 component |0::0> is
    the doubled vacuum, whose squared norm 2 makes its weight 4 N_alpha^2 |c_0|^2.
    """
    two_norm_sq = 2.0 * ec_norm_sq(alpha)
    w = two_norm_sq * poisson_weights_array(alpha * alpha, policy.n_max)
    w[0] *= 2.0
    return w


# -- parity signals --------------------------------------------------------


def _tf_terms(n: int) -> tuple[np.ndarray, np.ndarray]:
    c = beam_splitter_coefficients(n).c
    k = np.arange(n + 1)
    return c * c, 4.0 * n * (n - 2.0 * k)


def tf_parity_series(n: int) -> CosineSeriesSignal:
    """Parity signal of |n, n>: sum_k C_nk^2 cos(4n(n - 2k) phi)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n!r}")
    w, f = _tf_terms(n)
    return CosineSeriesSignal.from_terms(w, f)


def tmsv_parity_series(nbar: float, policy: TruncationPolicy | None = None) -> CosineSeriesSignal:
    """p_n-weighted mixture of twin-Fock signals, truncated at ``policy.n_max`` pairs."""
    if policy is None:
        policy = truncation_cutoff(TMSV(nbar), 1e-12)
    p = geometric_weights_array(nbar, policy.n_max)
    ws, fs = [], []
    for n in range(policy.n_max + 1):
        if p[n] == 0.0:
            continue
        w, f = _tf_terms(n)
        ws.append(p[n] * w)
        fs.append(f)
    return CosineSeriesSignal.from_terms(
        np.concatenate(ws) if ws else [], np.concatenate(fs) if fs else [], 0.0, policy.tail_epsilon
    )


def noon_parity_series(n: int) -> CosineSeriesSignal:
    """cos(n^2 phi) for n >= 1; the n = 0 component |0::0> gives the constant 2."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n!r}")
    if n == 0:
        return CosineSeriesSignal.constant(2.0)
    return CosineSeriesSignal.from_terms([1.0], [float(n * n)])


def ec_parity_series(alpha: float, policy: TruncationPolicy | None = None) -> CosineSeriesSignal:
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha!r}")
    if policy is None:
        policy = truncation_cutoff(EntangledCoherent(alpha), 1e-12)
    w = ec_sector_weights(alpha, policy)
    n = np.arange(policy.n_max + 1, dtype=float)
    # sector 0 has signal value 2 per unit of |0::0> norm, already folded into w[0]
    offset = w[0] if policy.n_max >= 0 else 0.0
    return CosineSeriesSignal.from_terms(w[1:], n[1:] ** 2, offset, policy.tail_epsilon)


def central_peak_width(s: CosineSeriesSignal, level: float = 0.5, phi_max: float = math.pi / 2) -> float:
    """Full width of the peak at phi = 0, measured where S first drops to ``level``."""
    from scipy.optimize import brentq

    if s.peak <= level:
        raise ValueError("signal peak does not exceed the requested level")
    top = max(float(np.max(s.frequencies)) if s.frequencies.size else 1.0, 1.0)
    grid = np.linspace(0.0, phi_max, int(min(2e5, max(2001, 40 * top))))
    vals = evaluate_signal(s, grid) - level
    below = np.nonzero(vals <= 0)[0]
    if below.size == 0:
        raise ValueError("signal never reaches the requested level")
    i = below[0]
    root = brentq(lambda x: evaluate_signal(s, x) - level, grid[i - 1], grid[i], xtol=1e-15)
    return 2.0 * root
