"""Acceptance criteria, each at its stated tolerance.

The terminal summary (see conftest.py) prints one PASS/FAIL line per
``test_criterion_*`` function.
"""
import json
import math
from fractions import Fraction

import numpy as np
import pytest

from kerr_mzi.cli import main
from kerr_mzi.estimation import (
    bgsl,
    error_propagation_sensitivity,
    fourth_moment_total_photon,
    gain_asymptote_tmsv,
    generalized_limit,
    one_axis_twisting_limit,
    qcr_bound,
    qfi_ec_asymptotic,
    qfi_ec_joo,
    qfi_ec_series,
    qfi_noon,
    qfi_tf,
    qfi_tmsv_closed,
    qfi_tmsv_series,
    sensitivity_gain,
    tmsv_fourth_moment_from_pairs,
    zero_phase_sensitivity_limit,
)
from kerr_mzi.figures import FIGURE_MANIFEST
from kerr_mzi.fock import (
    generator_moments,
    heff_sector_spectrum,
    parity_expectation_output,
    prepare_input_state,
    qfi_fixed_sector,
    sector_operators,
)
from kerr_mzi.signals import (
    ec_parity_series,
    evaluate_signal,
    noon_parity_series,
    tf_parity_series,
    tmsv_parity_series,
)
from kerr_mzi.special import truncation_cutoff
from kerr_mzi.states import NOON, TMSV, EntangledCoherent, TwinFock, ec_mean_photons

PHI = np.linspace(0.0, math.pi / 2, 201)
FIG3_GRID = [float(x) for x in FIGURE_MANIFEST["fig3"]["nbar_list"]]


def test_criterion_01_tf_qfi_closed_form():
    """Twin-Fock QFI and generator moments from the Fock oracle."""
    for n in range(1, 7):
        state = prepare_input_state(TwinFock(n))
        F = qfi_fixed_sector(state)
        poly = 8.5 * n**4 + 9 * n**3 - 0.5 * n**2 - n
        assert abs(F - poly) / poly <= 1e-9
        assert qfi_tf(n) == poly
        mean, second = generator_moments(state)
        assert abs(mean - (3 * n * n + n) / 2) <= 1e-10
        assert abs(second - (35 * n**4 + 30 * n**3 + n * n - 2 * n) / 8) <= 1e-10


def test_criterion_02_tmsv_qfi_closed_form():
    """TMSV QFI series at tail 1e-12 against the closed polynomial."""
    for nbar in (0.5, 1.0, 2.0, 4.0, 8.0):
        series = qfi_tmsv_series(nbar, truncation_cutoff(TMSV(nbar), 1e-12))
        closed = qfi_tmsv_closed(nbar)
        assert abs(series - closed) / closed <= 1e-6
    assert qfi_tmsv_closed(2.0) == 752.0


def test_criterion_03_parity_signal_equivalence():
    """Analytic parity series against the full interferometer simulation."""
    for n in range(0, 7):
        sim = parity_expectation_output(TwinFock(n), PHI)
        assert np.abs(sim - evaluate_signal(tf_parity_series(n), PHI)).max() <= 1e-10
    for nbar in (0.5, 1.0, 2.0, 3.0, 4.0):
        pol = truncation_cutoff(TMSV(nbar), 1e-12)
        sim = parity_expectation_output(TMSV(nbar), PHI, pol)
        assert np.abs(sim - evaluate_signal(tmsv_parity_series(nbar, pol), PHI)).max() <= 1e-8
    for N in range(1, 7):
        sim = parity_expectation_output(NOON(N), PHI)
        assert np.abs(sim - np.cos(N * N * PHI)).max() <= 1e-10


def test_criterion_04_hom_noon_saturation():
    """|1,1> and NOON(2) share QFI 16; NOON(2) parity sensitivity is 1/4."""
    assert qfi_tf(1) == 16.0 == qfi_noon(2)
    assert qfi_fixed_sector(prepare_input_state(TwinFock(1))) == pytest.approx(16.0, rel=1e-12)
    s = noon_parity_series(2)
    rng = np.random.default_rng(20240)
    checked = 0
    while checked < 20:
        phi = rng.uniform(0.0, math.pi / 2)
        if abs(math.sin(4 * phi)) < 1e-3:
            continue
        assert abs(error_propagation_sensitivity(s, phi) - 0.25) / 0.25 <= 1e-12
        checked += 1


def test_criterion_05a_gain_range_at_1000():
    """TMSV gain at nbar = 1000 lies in [5.50, 5.55] dB."""
    g = sensitivity_gain(qfi_tmsv_closed(1000.0), 1000.0)
    assert 5.50 <= g <= 5.55


def test_criterion_05b_gain_monotone_increasing_to_asymptote():
    """TMSV gain increases monotonically toward 5 log10(51/4)."""
    nbar = np.geomspace(1.0, 1000.0, 61)
    gains = np.array([sensitivity_gain(qfi_tmsv_closed(x), x) for x in nbar])
    assert np.all(np.diff(gains) > 0), (
        f"gain runs from {gains[0]:.4f} dB down to {gains[-1]:.4f} dB "
        f"(asymptote {gain_asymptote_tmsv():.5f} dB)"
    )
    assert np.all(gains <= gain_asymptote_tmsv())


def test_criterion_06_fourth_moment_bound():
    """<N^4> closed form equals 16 <n^4>; the QCR bound never beats it."""
    for nbar in FIG3_GRID + [0.1, 0.5, 1.0, 3.0, 50.0]:
        closed = fourth_moment_total_photon(TMSV(nbar))
        assert closed == 24 * nbar**4 + 72 * nbar**3 + 56 * nbar**2 + 8 * nbar
        assert abs(closed - tmsv_fourth_moment_from_pairs(nbar)) / closed <= 1e-10
    for nbar in FIG3_GRID:
        assert qcr_bound(qfi_tmsv_closed(nbar)) >= generalized_limit(fourth_moment_total_photon(TMSV(nbar)))


def test_criterion_07_supersensitivity_ordering():
    """TMSV and asymptotic EC beat 1/nbar^2; TMSV QFI exceeds the reference-beam EC value."""
    grid = sorted(set(FIG3_GRID) | set(np.geomspace(1e-3, 1e3, 61).tolist()))
    for nbar in grid:
        assert 1 / math.sqrt(qfi_tmsv_closed(nbar)) < bgsl(nbar)
        assert 1 / math.sqrt(qfi_ec_asymptotic(nbar)) < bgsl(nbar)
    for nbar in (1.0, 2.0, 4.0, 8.0):
        assert qfi_tmsv_closed(nbar) > qfi_ec_joo(nbar)


def test_criterion_08_ec_series_and_asymptote():
    """EC series vs its polynomial at alpha^2 = 36; parity saturates the EC QCR bound."""
    alpha = 6.0
    F = qfi_ec_series(alpha, truncation_cutoff(EntangledCoherent(alpha), 1e-12))
    asym = qfi_ec_asymptotic(ec_mean_photons(alpha))
    assert abs(F - asym) / asym <= 1e-6
    for a in (0.5, 1.0, 2.0, 6.0):
        pol = truncation_cutoff(EntangledCoherent(a), 1e-12)
        Fa = qfi_ec_series(a, pol)
        lim = zero_phase_sensitivity_limit(ec_parity_series(a, pol))
        target = 1 / math.sqrt(Fa)
        assert abs(lim - target) / target <= 1e-10


def test_criterion_09_spectral_optimality():
    """Seminorm bounds for the Kerr generators and 200 random states per sector."""
    rng = np.random.default_rng(31)
    for N in range(1, 9):
        for ham in ("kerr_full", "n_j_z"):
            rec = heff_sector_spectrum(N, ham)
            assert rec.max_qfi == pytest.approx(N**4, rel=1e-12)
            assert rec.witness_qfi == pytest.approx(N**4, rel=1e-12)
            assert set(rec.extremal_support) == {(N, 0), (0, N)}
        jz2 = heff_sector_spectrum(N, "j_z_squared")
        if N % 2 == 0:
            assert jz2.seminorm == pytest.approx(N * N / 4, rel=1e-12)
            assert jz2.sensitivity_limit == pytest.approx(one_axis_twisting_limit(N), rel=1e-12)
        else:
            # half-integer J_z: the extremes are j^2 and 1/4
            assert jz2.seminorm == pytest.approx((N * N - 1) / 4, rel=1e-12)
        o = sector_operators(N)
        h = o["jz"] @ o["jz"] + o["n_total"] @ o["jz"]
        bound = heff_sector_spectrum(N).max_qfi
        for _ in range(200):
            v = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
            v /= np.linalg.norm(v)
            hv = h @ v
            assert 4 * (np.vdot(hv, hv).real - np.vdot(v, hv).real ** 2) <= bound * (1 + 1e-12)


def _brute_curvature(nbar: int) -> Fraction:
    r = Fraction(nbar, nbar + 2)
    total = Fraction(0)
    for n in range(0, 300):
        inner = sum(
            Fraction(math.comb(2 * k, k) * math.comb(2 * n - 2 * k, n - k), 4**n) * (4 * n * (n - 2 * k)) ** 2
            for k in range(n + 1)
        )
        total += (1 - r) * r**n * inner
    return total


def test_criterion_10_parity_quasi_optimality_gap():
    """Zero-phase parity over QCR for TMSV tends to sqrt(51/48)."""
    for nbar in (1, 2, 4):
        poly = 12 * nbar**4 + 42 * nbar**3 + 40 * nbar**2 + 8 * nbar
        assert float(_brute_curvature(nbar)) == pytest.approx(poly, rel=1e-13)
    limit = math.sqrt(51 / 48)
    gaps = []
    for nbar in (10.0, 100.0):
        pol = truncation_cutoff(TMSV(nbar), 1e-12)
        ratio = zero_phase_sensitivity_limit(tmsv_parity_series(nbar, pol)) / qcr_bound(qfi_tmsv_closed(nbar))
        gaps.append(abs(ratio - limit))
    assert gaps[1] <= 1e-3
    assert gaps[1] < gaps[0]


def test_criterion_11_determinism(tmp_path):
    """figure and sweep output is byte-identical across runs and thread counts."""
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"state": "tmsv", "nbar_list": [0.5, 1, 2, 3, 4], "phi_steps": 101}))
    jobs = {
        "fig2b": ["figure", "fig2b"],
        "fig3": ["figure", "fig3"],
        "fig4": ["figure", "fig4"],
        "sweep": ["sweep", "--config", str(cfg)],
        "sens": ["sensitivity", "--state", "ec", "--nbar", "1", "2", "4", "8"],
    }
    for name, argv in jobs.items():
        blobs = []
        for run, workers in enumerate((1, 1, 4, 3)):
            out = tmp_path / f"{name}-{run}.csv"
            assert main(argv + ["--workers", str(workers), "--out", str(out)]) == 0
            blobs.append(out.read_bytes())
        assert all(b == blobs[0] for b in blobs[1:]), name
