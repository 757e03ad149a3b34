"""Combinatorial kernels, photon-number distributions and truncation rules.

Everything that feeds an infinite photon-number sum goes through a
:class:`TruncationPolicy`; binomials are taken in the log domain so that
central coefficients C(2n, n) stay finite for n well beyond 500.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .states import EntangledCoherent, InputStateSpec, TMSV

__all__ = [
    "LogFactorialTable",
    "TruncationPolicy",
    "log_factorial_table",
    "log_factorial",
    "log_binomial",
    "log_binomial_array",
    "geometric_moment",
    "geometric_weights_array",
    "poisson_weights_array",
    "truncation_cutoff",
]


@dataclass(frozen=True)
class LogFactorialTable:
    """``values[k] = log(k!)`` for ``k = 0..k_max`` (read-only array)."""

    values: np.ndarray

    @classmethod
    def build(cls, k_max: int) -> "LogFactorialTable":
        if k_max < 0:
            raise ValueError("k_max must be >= 0")
        vals = np.array([math.lgamma(k + 1.0) for k in range(k_max + 1)])
        vals[:2] = 0.0
        vals.setflags(write=False)
        return cls(vals)

    @property
    def k_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]


@lru_cache(maxsize=None)
def _table_of_size(k_max: int) -> LogFactorialTable:
    return LogFactorialTable.build(k_max)


def log_factorial_table(k_max: int) -> LogFactorialTable:
    """Shared table covering at least ``0..k_max``; sizes are rounded up to powers of two."""
    size = 64
    while size - 1 < k_max:
        size *= 2
    return _table_of_size(size - 1)


def log_factorial(k):
    """log(k!) for a nonnegative integer or integer array."""
    k_arr = np.asarray(k)
    table = log_factorial_table(int(k_arr.max()) if k_arr.size else 0)
    out = table.values[k_arr]
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class TruncationPolicy:
    """Cutoff ``n_max`` for a photon-number sum and the tail mass it may drop."""

    n_max: int
    tail_epsilon: float

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise ValueError(f"n_max must be a nonnegative integer, got {self.n_max!r}")
        _check_epsilon(self.tail_epsilon)
        object.__setattr__(self, "n_max", int(self.n_max))


def _check_epsilon(eps):
    if not (0.0 < eps < 1.0):
        raise ValueError(f"tail_epsilon must lie in (0, 1), got {eps!r}")


def log_binomial(n: int, k: int) -> float:
    """log C(n, k), or ``-inf`` when k is outside 0..n."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if k < 0 or k > n:
        return -math.inf
    t = log_factorial_table(n).values
    return float(t[n] - t[k] - t[n - k])


def log_binomial_array(n: int, k: np.ndarray) -> np.ndarray:
    """Vectorised :func:`log_binomial` over ``k`` (all entries must lie in 0..n)."""
    t = log_factorial_table(n).values
    k = np.asarray(k, dtype=np.int64)
    return t[n] - t[k] - t[n - k]


_GEOMETRIC_MOMENTS = {
    1: lambda x: x / 2.0,
    2: lambda x: (x**2 + x) / 2.0,
    3: lambda x: (3 * x**3 + 6 * x**2 + 2 * x) / 4.0,
    4: lambda x: (3 * x**4 + 9 * x**3 + 7 * x**2 + x) / 2.0,
}


def geometric_moment(nbar: float, order: int) -> float:
    """Raw moment sum_n p_n n^order of the twin-pair distribution of a TMSV state.

    ``p_n = (1 - r) r^n`` with ``r = nbar / (nbar + 2)``; ``n`` counts photon
    pairs, so the first moment is nbar / 2.
    """
    if order not in _GEOMETRIC_MOMENTS:
        raise ValueError(f"order must be in 1..4, got {order!r}")
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar!r}")
    return float(_GEOMETRIC_MOMENTS[order](float(nbar)))


def geometric_weights_array(nbar: float, n_max: int) -> np.ndarray:
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar!r}")
    n = np.arange(n_max + 1)
    if nbar == 0:
        return (n == 0).astype(float)
    r = nbar / (nbar + 2.0)
    return (1.0 - r) * np.exp(n * math.log(r))


def poisson_weights_array(lam: float, n_max: int) -> np.ndarray:
    """Poisson(lam) pmf on 0..n_max, evaluated in the log domain."""
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam!r}")
    n = np.arange(n_max + 1)
    if lam == 0:
        return (n == 0).astype(float)
    return np.exp(-lam + n * math.log(lam) - log_factorial(n))


def _poisson_cutoff(lam: float, eps: float) -> int:
    if lam == 0:
        return 0
    # pmf beyond lam + 40 sqrt(lam) + 60 is far below any double-precision epsilon
    top = int(math.ceil(lam + 40.0 * math.sqrt(lam) + 60.0))
    pmf = poisson_weights_array(lam, top)
    # tail[n] = sum_{m > n} pmf[m], accumulated from the small end for accuracy
    tail = np.concatenate([np.cumsum(pmf[::-1])[::-1][1:], [0.0]])
    return int(np.argmax(tail <= eps))


def truncation_cutoff(spec: InputStateSpec, tail_epsilon: float) -> TruncationPolicy:
    """Smallest cutoff whose discarded photon-number mass is at most ``tail_epsilon``.

    For TMSV the cutoff counts photon pairs (|n, n> with n <= n_max) and the
    tail r^(n_max+1) is inverted in closed form.  For EC it counts photons per
    NOON component and the Poisson(alpha^2) tail is summed directly.
    """
    _check_epsilon(tail_epsilon)
    if isinstance(spec, TMSV):
        if spec.nbar == 0:
            return TruncationPolicy(0, tail_epsilon)
        log_r = math.log(spec.ratio)
        n_max = max(0, math.ceil(math.log(tail_epsilon) / log_r) - 1)
        # closed form can land one off under rounding; settle on the exact smallest
        while n_max > 0 and (n_max) * log_r <= math.log(tail_epsilon):
            n_max -= 1
        while (n_max + 1) * log_r > math.log(tail_epsilon):
            n_max += 1
        return TruncationPolicy(n_max, tail_epsilon)
    if isinstance(spec, EntangledCoherent):
        return TruncationPolicy(_poisson_cutoff(spec.alpha**2, tail_epsilon), tail_epsilon)
    raise ValueError(
        f"truncation applies only to fluctuating-number states (tmsv, ec), got {spec.kind!r}"
    )
