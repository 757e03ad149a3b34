"""Brute-force two-mode Fock-space simulator used as an independent oracle.

Every closed form in :mod:`kerr_mzi.signals` and :mod:`kerr_mzi.estimation`
is re-derived here from ladder operators: beam splitters are exponentiated
from their generators, the Kerr phase is applied as a diagonal unitary, and
parity and QFI are read off the evolved amplitudes.

The interferometer conserves total photon number N, so all pipeline
operators are stored per N-sector.  Sector N has basis |n_a, N - n_a>,
n_a = 0..N, and every block is exact (no truncation leakage).  Dense
product-space operators are available for small cutoffs; there the top
levels are corrupted by truncation and residual checks skip a guard band.

Beam splitter conventions::

    B1 = exp[pi (a^dag b - a b^dag) / 4]
    B2 = exp[-i pi (a^dag b + a b^dag) / 4]
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from .special import TruncationPolicy, geometric_weights_array, poisson_weights_array, truncation_cutoff
from .states import NOON, TMSV, EntangledCoherent, InputStateSpec, TwinFock, ec_norm_sq

__all__ = [
    "ModeOperators",
    "OperatorMatrix",
    "TwoModeState",
    "SpectrumRecord",
    "build_mode_operators",
    "sector_operators",
    "beam_splitter_unitary",
    "kerr_unitary",
    "parity_operator",
    "prepare_input_state",
    "parity_expectation_output",
    "generator_moments",
    "qfi_fixed_sector",
    "qfi_phase_averaged",
    "heff_sector_spectrum",
    "schwinger_identity_residual",
    "schwinger_sector_residual",
    "DEFAULT_GUARD",
]

DEFAULT_GUARD = 4

Splitter = Literal["B1", "B2"]
Hamiltonian = Literal["kerr_full", "j_z_squared", "n_j_z"]


# -- full product-space operators -----------------------------------------


@dataclass(frozen=True)
class ModeOperators:
    """Dense operators on the truncated grid 0 <= n_a, n_b <= n_max.

    Basis index of |n_a, n_b> is ``n_a * (n_max + 1) + n_b``.
    """

    n_max: int
    a: np.ndarray
    adag: np.ndarray
    b: np.ndarray
    bdag: np.ndarray
    n_total: np.ndarray
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    @property
    def dim(self) -> int:
        return (self.n_max + 1) ** 2

    def interior(self, guard: int = DEFAULT_GUARD) -> np.ndarray:
        """Indices of basis states with n_a + n_b <= n_max - guard."""
        na, nb = np.divmod(np.arange(self.dim), self.n_max + 1)
        return np.nonzero(na + nb <= self.n_max - guard)[0]


def _destroy(d: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1)


def build_mode_operators(n_max: int) -> ModeOperators:
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max!r}")
    d = n_max + 1
    eye = np.eye(d)
    a = np.kron(_destroy(d), eye).astype(complex)
    b = np.kron(eye, _destroy(d)).astype(complex)
    adag, bdag = a.conj().T, b.conj().T
    n_total = adag @ a + bdag @ b
    jx = (adag @ b + a @ bdag) / 2
    jy = (adag @ b - a @ bdag) / 2j
    jz = (adag @ a - bdag @ b) / 2
    return ModeOperators(n_max, a, adag, b, bdag, n_total, jx, jy, jz)


# -- per-sector operators -------------------------------------------------


@lru_cache(maxsize=None)
def sector_operators(N: int) -> dict[str, np.ndarray]:
    """Number-conserving bilinears restricted to the N-photon sector.

    Keys: ``na`` (a^dag a), ``nb`` (b^dag b), ``adag_b``, ``a_bdag``, ``jx``,
    ``jy``, ``jz``, ``n_total``.  Built from the ladder actions
    a^dag b |n_a, n_b> = sqrt((n_a + 1) n_b) |n_a + 1, n_b - 1>.
    """
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N!r}")
    na = np.arange(N + 1, dtype=float)
    nb = N - na
    adag_b = np.zeros((N + 1, N + 1), dtype=complex)
    idx = np.arange(N)
    adag_b[idx + 1, idx] = np.sqrt((na[:-1] + 1) * nb[:-1])
    a_bdag = adag_b.conj().T
    ops = {
        "na": np.diag(na).astype(complex),
        "nb": np.diag(nb).astype(complex),
        "adag_b": adag_b,
        "a_bdag": a_bdag,
        "jx": (adag_b + a_bdag) / 2,
        "jy": (adag_b - a_bdag) / 2j,
        "jz": np.diag((na - nb) / 2).astype(complex),
        "n_total": N * np.eye(N + 1, dtype=complex),
    }
    for m in ops.values():
        m.setflags(write=False)
    return ops


def _expm_hermitian(h: np.ndarray, scale: complex) -> np.ndarray:
    """exp(scale * h) for Hermitian h via its eigendecomposition."""
    vals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(scale * vals)) @ vecs.conj().T


@lru_cache(maxsize=None)
def _sector_splitter(which: Splitter, N: int) -> np.ndarray:
    ops = sector_operators(N)
    if which == "B1":
        # pi/4 (a^dag b - a b^dag) = -i pi/4 * H with H = i (a^dag b - a b^dag)
        gen = 1j * (ops["adag_b"] - ops["a_bdag"])
        u = _expm_hermitian(gen, -1j * math.pi / 4)
    elif which == "B2":
        gen = ops["adag_b"] + ops["a_bdag"]
        u = _expm_hermitian(gen, -1j * math.pi / 4)
    else:
        raise ValueError(f"unknown beam splitter {which!r}; expected 'B1' or 'B2'")
    u.setflags(write=False)
    return u


@dataclass(frozen=True)
class OperatorMatrix:
    """Block-diagonal operator: ``blocks[N]`` acts on the N-photon sector, N = 0..n_max."""

    blocks: tuple
    hermitian: bool = False

    @property
    def n_max(self) -> int:
        return len(self.blocks) - 1

    def block(self, N: int) -> np.ndarray:
        return self.blocks[N]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(tuple(m.conj().T for m in self.blocks), self.hermitian)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.n_max != other.n_max:
            raise ValueError("operators cover different sector ranges")
        return OperatorMatrix(tuple(x @ y for x, y in zip(self.blocks, other.blocks)))

    def unitarity_residual(self) -> float:
        return max(float(np.max(np.abs(m.conj().T @ m - np.eye(len(m))))) for m in self.blocks)

    def dense(self, grid_n_max: int | None = None) -> np.ndarray:
        """Embed into the product basis of a grid 0..grid_n_max per mode.

        Only sectors that fit entirely in the grid (N <= grid_n_max) are
        placed; the rest of the matrix is zero.
        """
        g = self.n_max if grid_n_max is None else grid_n_max
        d = g + 1
        out = np.zeros((d * d, d * d), dtype=complex)
        for N in range(min(g, self.n_max) + 1):
            na = np.arange(N + 1)
            idx = na * d + (N - na)
            out[np.ix_(idx, idx)] = self.blocks[N]
        return out


def beam_splitter_unitary(which: Splitter, n_max: int) -> OperatorMatrix:
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max!r}")
    return OperatorMatrix(tuple(_sector_splitter(which, N) for N in range(n_max + 1)))


def _kerr_phases(N: int, phi, k: int) -> np.ndarray:
    na = np.arange(N + 1, dtype=float)
    return np.exp(-1j * np.multiply.outer(np.asarray(phi, dtype=float), na**k))


def kerr_unitary(phi: float, k: int = 2, n_max: int = 1) -> OperatorMatrix:
    """exp(-i phi (a^dag a)^k) on the lower mode a."""
    if k < 1:
        raise ValueError(f"nonlinearity order k must be >= 1, got {k!r}")
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max!r}")
    return OperatorMatrix(tuple(np.diag(_kerr_phases(N, phi, k)) for N in range(n_max + 1)))


def parity_operator(n_max: int) -> OperatorMatrix:
    """(-1)^(b^dag b) on output mode b."""
    return OperatorMatrix(
        tuple(np.diag((-1.0) ** (N - np.arange(N + 1))).astype(complex) for N in range(n_max + 1)),
        hermitian=True,
    )


# -- states ----------------------------------------------------------------


@dataclass
class TwoModeState:
    """Amplitude grid ``amplitudes[n_a, n_b]``, 0 <= n_a, n_b <= n_max.

    ``probe_stage`` marks states that already sit between the beam
    splitters (NOON and EC probes); the pipeline then skips B1 and the QFI
    generator is (a^dag a)^2 itself rather than B1^dag (a^dag a)^2 B1.
    """

    amplitudes: np.ndarray
    probe_stage: bool = False
    label: str = field(default="", compare=False)

    @property
    def n_max(self) -> int:
        return self.amplitudes.shape[0] - 1

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def sector(self, N: int) -> np.ndarray:
        """Amplitudes on |n_a, N - n_a>, n_a = 0..N (zero where off the grid)."""
        out = np.zeros(N + 1, dtype=complex)
        lo, hi = max(0, N - self.n_max), min(N, self.n_max)
        na = np.arange(lo, hi + 1)
        out[na] = self.amplitudes[na, N - na]
        return out

    def sectors(self) -> list[tuple[int, np.ndarray]]:
        """Nonempty sectors as (N, unnormalised amplitude vector)."""
        out = []
        for N in range(2 * self.n_max + 1):
            v = self.sector(N)
            if np.any(v != 0):
                out.append((N, v))
        return out

    @classmethod
    def from_sector(cls, N: int, vec, probe_stage: bool = False, label: str = "") -> "TwoModeState":
        vec = np.asarray(vec, dtype=complex)
        if vec.shape != (N + 1,):
            raise ValueError(f"sector-{N} vector must have length {N + 1}")
        amps = np.zeros((N + 1, N + 1), dtype=complex)
        na = np.arange(N + 1)
        amps[na, N - na] = vec
        return cls(amps, probe_stage, label)


def _noon_amplitudes(N: int, phase: float, scale: complex = 1 / math.sqrt(2)) -> np.ndarray:
    amps = np.zeros((N + 1, N + 1), dtype=complex)
    amps[N, 0] += scale
    amps[0, N] += scale * np.exp(1j * phase)
    return amps


def prepare_input_state(spec: InputStateSpec, policy: TruncationPolicy | None = None) -> TwoModeState:
    """Amplitude grid for ``spec``.

    TF and TMSV are interferometer inputs; NOON and EC are probe states
    (NOON components with relative phase i^n, which puts the parity peak at
    phi = 0).  NOON(0) is the literal doubled vacuum |0::0> of squared norm 2.
    TMSV and EC need a ``policy`` (a 1e-12 tail cutoff is used if omitted)
    and the retained mass is checked against it.
    """
    if isinstance(spec, TwinFock):
        n = spec.n
        amps = np.zeros((2 * n + 1, 2 * n + 1), dtype=complex)
        amps[n, n] = 1.0
        return TwoModeState(amps, False, spec.label)
    if isinstance(spec, NOON):
        return TwoModeState(_noon_amplitudes(spec.n, spec.phase), True, spec.label)
    if isinstance(spec, TMSV):
        policy = policy or truncation_cutoff(spec, 1e-12)
        p = geometric_weights_array(spec.nbar, policy.n_max)
        _check_retained(p.sum(), policy, spec)
        g = max(2 * policy.n_max, 1)
        amps = np.zeros((g + 1, g + 1), dtype=complex)
        n = np.arange(policy.n_max + 1)
        amps[n, n] = np.sqrt(p)
        return TwoModeState(amps, False, spec.label)
    if isinstance(spec, EntangledCoherent):
        policy = policy or truncation_cutoff(spec, 1e-12)
        lam = spec.alpha**2
        pois = poisson_weights_array(lam, policy.n_max)
        _check_retained(pois.sum(), policy, spec)
        norm = math.sqrt(ec_norm_sq(spec.alpha))
        g = max(policy.n_max, 1)
        amps = np.zeros((g + 1, g + 1), dtype=complex)
        for n in range(policy.n_max + 1):
            c = math.sqrt(pois[n])
            amps[n, 0] += norm * c
            amps[0, n] += norm * c * (1j) ** n
        return TwoModeState(amps, True, spec.label)
    raise TypeError(f"unsupported state {spec!r}")


def _check_retained(mass: float, policy: TruncationPolicy, spec) -> None:
    if mass < 1.0 - policy.tail_epsilon * (1 + 1e-9) - 1e-15:
        raise ValueError(
            f"cutoff n_max={policy.n_max} keeps only {mass!r} of {spec.label}; "
            f"need >= 1 - {policy.tail_epsilon:g}"
        )


# -- parity ----------------------------------------------------------------


def _sector_parity(N: int, vec: np.ndarray, phi, probe_stage: bool, k: int = 2) -> np.ndarray:
    """<vec| B1^dag U^dag B2^dag Pi_b B2 U B1 |vec> for each phi (vec unnormalised)."""
    v = vec if probe_stage else _sector_splitter("B1", N) @ vec
    phases = _kerr_phases(N, np.atleast_1d(phi), k)  # (nphi, N+1)
    out = (phases * v) @ _sector_splitter("B2", N).T  # rows: B2 U B1 |vec>
    parity = (-1.0) ** (N - np.arange(N + 1))
    return (np.abs(out) ** 2) @ parity


def parity_expectation_output(spec: InputStateSpec, phi, policy: TruncationPolicy | None = None):
    """Parity of output mode b, summed sector by sector.

    Parity after the interferometer commutes with total photon number, so a
    superposition over N and its phase-averaged mixture give the same value:
    the weighted sum of fixed-N expectations.
    """
    state = prepare_input_state(spec, policy)
    phi_arr = np.atleast_1d(np.asarray(phi, dtype=float))
    total = np.zeros(phi_arr.shape)
    for N, vec in state.sectors():
        total += _sector_parity(N, vec, phi_arr, state.probe_stage)
    return float(total[0]) if np.ndim(phi) == 0 else total


# -- quantum Fisher information --------------------------------------------


def _single_sector(state: TwoModeState) -> tuple[int, np.ndarray]:
    secs = state.sectors()
    if len(secs) != 1:
        raise ValueError(
            f"state spans {len(secs)} photon-number sectors; fixed-sector QFI needs exactly one"
        )
    N, vec = secs[0]
    return N, vec / np.linalg.norm(vec)


def _kerr_generator(N: int, probe_stage: bool) -> np.ndarray:
    """G = B1^dag (a^dag a)^2 B1 on sector N, or (a^dag a)^2 for probe states."""
    na = sector_operators(N)["na"]
    h = na @ na
    if probe_stage:
        return h
    b1 = _sector_splitter("B1", N)
    return b1.conj().T @ h @ b1


def generator_moments(state: TwoModeState) -> tuple[float, float]:
    """(<G>, <G^2>) for a single-sector state."""
    N, psi = _single_sector(state)
    g = _kerr_generator(N, state.probe_stage)
    g_psi = g @ psi
    return float(np.vdot(psi, g_psi).real), float(np.vdot(g_psi, g_psi).real)


def qfi_fixed_sector(state: TwoModeState) -> float:
    """4 (<G^2> - <G>^2) for a pure state of definite photon number."""
    mean, second = generator_moments(state)
    return 4.0 * (second - mean * mean)


def qfi_phase_averaged(spec: InputStateSpec, policy: TruncationPolicy | None = None) -> float:
    """QFI of the phase-averaged state: sector-weighted sum of fixed-sector QFIs."""
    if not isinstance(spec, (TMSV, EntangledCoherent)):
        raise ValueError(f"phase averaging applies to tmsv and ec states, got {spec.kind!r}")
    state = prepare_input_state(spec, policy)
    total = 0.0
    for N, vec in state.sectors():
        weight = float(np.vdot(vec, vec).real)
        if N == 0:
            continue
        sub = TwoModeState.from_sector(N, vec, state.probe_stage)
        total += weight * qfi_fixed_sector(sub)
    return total


# -- spectral bounds -------------------------------------------------------


@dataclass(frozen=True)
class SpectrumRecord:
    N: int
    hamiltonian: str
    eigenvalues: np.ndarray
    seminorm: float
    max_qfi: float
    extremal_state: np.ndarray
    extremal_support: tuple
    witness_qfi: float

    @property
    def sensitivity_limit(self) -> float:
        return 1.0 / self.seminorm


def _sector_hamiltonian(N: int, hamiltonian: Hamiltonian) -> np.ndarray:
    ops = sector_operators(N)
    jz, nt = ops["jz"], ops["n_total"]
    if hamiltonian == "kerr_full":
        return jz @ jz + nt @ jz
    if hamiltonian == "j_z_squared":
        return jz @ jz
    if hamiltonian == "n_j_z":
        return nt @ jz
    raise ValueError(f"unknown hamiltonian {hamiltonian!r}; expected kerr_full, j_z_squared or n_j_z")


def heff_sector_spectrum(N: int, hamiltonian: Hamiltonian = "kerr_full") -> SpectrumRecord:
    """Spectrum, seminorm and variance-maximising probe of a generator on sector N.

    The witness is the equal superposition of a top and a bottom eigenvector;
    for the diagonal generators here ties are broken towards larger n_a.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N!r}")
    h = _sector_hamiltonian(N, hamiltonian)
    evals = np.linalg.eigvalsh(h)
    seminorm = float(evals[-1] - evals[0])
    off = h - np.diag(np.diag(h))
    if np.all(off == 0):
        d = np.diag(h).real
        top = int(np.flatnonzero(d == d.max())[-1])
        bottom = int(np.flatnonzero(d == d.min())[-1])
        e_top, e_bottom = np.eye(N + 1)[top], np.eye(N + 1)[bottom]
    else:
        _, vecs = np.linalg.eigh(h)
        e_top, e_bottom = vecs[:, -1], vecs[:, 0]
    if seminorm == 0.0:
        # flat spectrum: every state has zero variance
        witness = e_top.astype(complex)
    else:
        witness = (e_top + e_bottom).astype(complex) / math.sqrt(2)
    support = tuple((int(na), N - int(na)) for na in np.flatnonzero(np.abs(witness) > 1e-12))
    hw = h @ witness
    var = float(np.vdot(hw, hw).real - np.vdot(witness, hw).real ** 2)
    return SpectrumRecord(N, hamiltonian, evals, seminorm, seminorm**2, witness, support, 4.0 * var)


# -- operator identities ---------------------------------------------------


def schwinger_identity_residual(n_max: int, guard: int = DEFAULT_GUARD) -> float:
    """max |(a^dag a)^2 - (N^2/4 + J_z^2 + N J_z)| over the interior of the grid."""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max!r}")
    ops = build_mode_operators(n_max)
    num_a = ops.adag @ ops.a
    diff = num_a @ num_a - (ops.n_total @ ops.n_total / 4 + ops.jz @ ops.jz + ops.n_total @ ops.jz)
    idx = ops.interior(min(guard, n_max))
    return float(np.max(np.abs(diff[np.ix_(idx, idx)])))


def schwinger_sector_residual(N: int) -> float:
    ops = sector_operators(N)
    na, nt, jz = ops["na"], ops["n_total"], ops["jz"]
    diff = na @ na - (nt @ nt / 4 + jz @ jz + nt @ jz)
    return float(np.max(np.abs(diff)))
