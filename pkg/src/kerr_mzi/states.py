"""Input-state families: twin Fock, two-mode squeezed vacuum, NOON, entangled coherent."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

__all__ = [
    "TwinFock",
    "TMSV",
    "NOON",
    "EntangledCoherent",
    "InputStateSpec",
    "STATE_TAGS",
    "make_state",
    "state_for_mean_photons",
    "ec_norm_sq",
    "ec_mean_photons",
    "ec_intensity_for_nbar",
]


@dataclass(frozen=True)
class TwinFock:
    """|n, n>, total photon number 2n."""

    n: int
    kind = "tf"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"TF photon number n must be a nonnegative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def mean_photons(self) -> float:
        return 2.0 * self.n

    @property
    def label(self) -> str:
        return f"tf(n={self.n})"


@dataclass(frozen=True)
class TMSV:
    """Two-mode squeezed vacuum of total mean photon number ``nbar``."""

    nbar: float
    kind = "tmsv"

    def __post_init__(self):
        if not math.isfinite(self.nbar) or self.nbar < 0:
            raise ValueError(f"TMSV mean photon number must be >= 0, got {self.nbar!r}")
        object.__setattr__(self, "nbar", float(self.nbar))

    @property
    def mean_photons(self) -> float:
        return self.nbar

    @property
    def ratio(self) -> float:
        """Geometric ratio nbar / (nbar + 2) of the twin-pair distribution."""
        return self.nbar / (self.nbar + 2.0)

    @property
    def label(self) -> str:
        return f"tmsv(nbar={self.nbar:g})"


@dataclass(frozen=True)
class NOON:
    """(|N,0> + e^{i phase}|0,N>)/sqrt(2) as the probe state inside the interferometer.

    ``relative_phase=None`` selects N*pi/2, the phase for which the parity
    signal peaks at zero Kerr phase with the beam-splitter conventions used
    throughout (the signal is then cos(N^2 phi)).
    """

    n: int
    relative_phase: float | None = None
    kind = "noon"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"NOON photon number must be a nonnegative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def phase(self) -> float:
        if self.relative_phase is None:
            return 0.5 * math.pi * self.n
        return float(self.relative_phase)

    @property
    def mean_photons(self) -> float:
        return float(self.n)

    @property
    def label(self) -> str:
        return f"noon(N={self.n})"


@dataclass(frozen=True)
class EntangledCoherent:
    """Entangled coherent state with real amplitude ``alpha`` (only alpha^2 matters)."""

    alpha: float
    kind = "ec"

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha <= 0:
            raise ValueError(f"EC amplitude alpha must be > 0, got {self.alpha!r}")
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def mean_photons(self) -> float:
        return ec_mean_photons(self.alpha)

    @property
    def label(self) -> str:
        return f"ec(alpha={self.alpha:g})"


InputStateSpec = Union[TwinFock, TMSV, NOON, EntangledCoherent]

STATE_TAGS = ("tf", "tmsv", "noon", "ec")


def make_state(tag: str, *, n=None, nbar=None, alpha=None) -> InputStateSpec:
    """Build a state from its tag and the one parameter that family needs."""
    tag = str(tag).lower()
    if tag not in STATE_TAGS:
        raise ValueError(f"unknown state tag {tag!r}; expected one of {', '.join(STATE_TAGS)}")
    if tag in ("tf", "noon"):
        if n is None:
            raise ValueError(f"state {tag!r} requires n")
        return TwinFock(n) if tag == "tf" else NOON(n)
    if tag == "tmsv":
        if nbar is None:
            raise ValueError("state 'tmsv' requires nbar")
        return TMSV(nbar)
    if alpha is None:
        raise ValueError("state 'ec' requires alpha")
    return EntangledCoherent(alpha)


def state_for_mean_photons(tag: str, nbar: float) -> InputStateSpec:
    """Member of family ``tag`` whose mean total photon number is ``nbar``.

    TF needs nbar = 2n with n integer, NOON needs integer nbar.
    """
    tag = str(tag).lower()
    if tag == "tmsv":
        return TMSV(nbar)
    if tag == "ec":
        return EntangledCoherent(math.sqrt(ec_intensity_for_nbar(nbar)))
    if tag == "tf":
        half = nbar / 2.0
        if half != round(half):
            raise ValueError(f"TF states need an even total photon number, got nbar={nbar!r}")
        return TwinFock(int(round(half)))
    if tag == "noon":
        if nbar != round(nbar):
            raise ValueError(f"NOON states need an integer photon number, got nbar={nbar!r}")
        return NOON(int(round(nbar)))
    raise ValueError(f"unknown state tag {tag!r}; expected one of {', '.join(STATE_TAGS)}")


def ec_norm_sq(alpha: float) -> float:
    """Squared normalisation N_alpha^2 = 1 / (2 (1 + exp(-alpha^2)))."""
    return 0.5 / (1.0 + math.exp(-alpha * alpha))


def ec_mean_photons(alpha: float) -> float:
    lam = alpha * alpha
    return lam / (1.0 + math.exp(-lam))


def ec_intensity_for_nbar(nbar: float) -> float:
    """Solve lam / (1 + exp(-lam)) = nbar for lam = alpha^2.

    The map is increasing and lam/2 <= f(lam) <= lam, so the root sits in [nbar, 2 nbar].
    """
    from scipy.optimize import brentq

    if nbar <= 0:
        raise ValueError(f"EC mean photon number must be > 0, got {nbar!r}")
    f = lambda lam: lam / (1.0 + math.exp(-lam)) - nbar  # noqa: E731
    lo, hi = nbar, 2.0 * nbar
    if f(lo) >= 0:
        return lo
    return brentq(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
