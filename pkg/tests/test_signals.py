import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kerr_mzi.signals import (
    CosineSeriesSignal,
    beam_splitter_coefficient,
    beam_splitter_coefficients,
    central_peak_width,
    ec_parity_series,
    evaluate_signal,
    noon_parity_series,
    signal_derivative,
    tf_parity_series,
    tmsv_parity_series,
    tmsv_weight,
)
from kerr_mzi.special import truncation_cutoff
from kerr_mzi.states import TMSV, EntangledCoherent

PHI = np.linspace(0.0, math.pi / 2, 201)


def exact_c(n, k):
    return (-1) ** (n - k) * math.sqrt(math.comb(2 * k, k) * math.comb(2 * n - 2 * k, n - k)) / 2**n


def unfolded_tf(n, phi):
    return sum(exact_c(n, k) ** 2 * math.cos(4 * n * (n - 2 * k) * phi) for k in range(n + 1))


# -- coefficients ----------------------------------------------------------


def test_coefficient_examples():
    assert beam_splitter_coefficient(0, 0) == 1.0
    assert beam_splitter_coefficient(1, 0) == pytest.approx(-1 / math.sqrt(2), abs=1e-15)
    assert beam_splitter_coefficient(1, 1) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert beam_splitter_coefficient(2, 1) == pytest.approx(-0.5, abs=1e-15)


@pytest.mark.parametrize("n", list(range(0, 13)) + [50, 200])
def test_coefficients_match_exact_and_normalise(n):
    c = beam_splitter_coefficients(n).c
    if n <= 12:
        np.testing.assert_allclose(c, [exact_c(n, k) for k in range(n + 1)], rtol=1e-13, atol=0)
    assert math.fsum(c * c) == pytest.approx(1.0, abs=1e-12)
    # mirror symmetry of the magnitudes
    np.testing.assert_allclose(np.abs(c), np.abs(c[::-1]), rtol=1e-13)


def test_large_n_coefficients_finite():
    c = beam_splitter_coefficients(2000).c
    assert np.all(np.isfinite(c))
    assert math.fsum(c * c) == pytest.approx(1.0, abs=1e-10)


def test_coefficient_rejects():
    with pytest.raises(ValueError):
        beam_splitter_coefficient(2, 3)
    with pytest.raises(ValueError):
        beam_splitter_coefficient(-1, 0)


# -- series container ------------------------------------------------------


@given(
    st.lists(st.tuples(st.floats(-2, 2), st.integers(-30, 30)), min_size=0, max_size=12),
    st.floats(-1, 1),
)
def test_folding_is_sound(terms, offset):
    w = [t[0] for t in terms]
    f = [float(t[1]) for t in terms]
    s = CosineSeriesSignal.from_terms(w, f, offset)
    raw = offset + sum(wi * np.cos(fi * PHI) for wi, fi in zip(w, f))
    np.testing.assert_allclose(evaluate_signal(s, PHI), raw, atol=1e-12)
    assert np.all(s.frequencies > 0)
    assert np.all(np.diff(s.frequencies) > 0)


@settings(max_examples=60)
@given(
    st.lists(st.tuples(st.floats(0, 1), st.integers(1, 40)), min_size=1, max_size=8),
    st.floats(0.05, 1.5),
)
def test_derivative_vs_finite_difference(terms, phi):
    s = CosineSeriesSignal.from_terms([t[0] for t in terms], [float(t[1]) for t in terms])
    h = 1e-5
    fd = (
        -evaluate_signal(s, phi + 2 * h)
        + 8 * evaluate_signal(s, phi + h)
        - 8 * evaluate_signal(s, phi - h)
        + evaluate_signal(s, phi - 2 * h)
    ) / (12 * h)
    scale = 1 + sum(t[0] * t[1] for t in terms)
    assert signal_derivative(s, phi) == pytest.approx(fd, abs=1e-7 * scale)


def test_scalar_and_array_evaluation():
    s = tf_parity_series(2)
    assert isinstance(evaluate_signal(s, 0.3), float)
    assert evaluate_signal(s, PHI).shape == PHI.shape
    assert s(0.3) == evaluate_signal(s, 0.3)


# -- twin Fock -------------------------------------------------------------


def test_tf_examples():
    np.testing.assert_allclose(evaluate_signal(tf_parity_series(1), PHI), np.cos(4 * PHI), atol=1e-15)
    assert evaluate_signal(tf_parity_series(0), PHI) == pytest.approx(np.ones_like(PHI))
    for n in range(0, 9):
        assert tf_parity_series(n).peak == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("n", range(1, 9))
def test_tf_matches_unfolded_sum(n):
    s = tf_parity_series(n)
    np.testing.assert_allclose(evaluate_signal(s, PHI), [unfolded_tf(n, p) for p in PHI], atol=1e-13)


@pytest.mark.parametrize("n", range(1, 11))
def test_tf_ranges(n):
    vals = evaluate_signal(tf_parity_series(n), np.linspace(0, math.pi / 2, 4001))
    if n % 2:
        assert vals.min() >= -1 - 1e-12 and vals.max() <= 1 + 1e-12
    else:
        assert vals.min() >= -0.5 - 1e-12


@pytest.mark.parametrize("n", [1, 2, 5])
def test_tf_signal_is_even_and_periodic(n):
    s = tf_parity_series(n)
    np.testing.assert_allclose(s(-PHI), s(PHI), atol=1e-14)
    # all frequencies are multiples of 8 (4n(n - 2k) with n(n - 2k) even) or 4
    np.testing.assert_allclose(s(PHI + math.pi / 2), s(PHI), atol=1e-12)


# -- TMSV ------------------------------------------------------------------


def test_tmsv_weight_examples():
    assert tmsv_weight(0, 2.0) == 0.5
    assert tmsv_weight(3, 2.0) == 0.0625
    assert tmsv_weight(0, 0.0) == 1.0
    assert tmsv_weight(2, 0.0) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 20.0))
def test_tmsv_weights_sum_and_mean(nbar):
    pol = truncation_cutoff(TMSV(nbar), 1e-14)
    p = np.array([tmsv_weight(n, nbar) for n in range(pol.n_max + 1)])
    assert p.sum() == pytest.approx(1.0, abs=1e-13)
    # mean total photon number is 2 <n>
    assert 2 * np.dot(np.arange(pol.n_max + 1), p) == pytest.approx(nbar, rel=1e-10)


def test_tmsv_zero_is_constant_one():
    s = tmsv_parity_series(0.0, truncation_cutoff(TMSV(0.0), 1e-12))
    np.testing.assert_allclose(evaluate_signal(s, PHI), 1.0)


@pytest.mark.parametrize("nbar", [0.5, 2.0, 4.0])
def test_tmsv_is_mixture_of_tf(nbar):
    pol = truncation_cutoff(TMSV(nbar), 1e-12)
    s = tmsv_parity_series(nbar, pol)
    direct = sum(tmsv_weight(n, nbar) * evaluate_signal(tf_parity_series(n), PHI) for n in range(pol.n_max + 1))
    np.testing.assert_allclose(evaluate_signal(s, PHI), direct, atol=1e-13)
    assert s.peak == pytest.approx(1.0, abs=1e-11)
    np.testing.assert_allclose(s(PHI + math.pi / 2), s(PHI), atol=1e-11)


def test_tmsv_central_peak_narrows():
    widths = [central_peak_width(tmsv_parity_series(x)) for x in (2.0, 3.0, 4.0)]
    assert widths[0] > widths[1] > widths[2]


# -- NOON and EC -----------------------------------------------------------


@pytest.mark.parametrize("N", range(1, 7))
def test_noon_series(N):
    np.testing.assert_allclose(noon_parity_series(N)(PHI), np.cos(N * N * PHI), atol=1e-15)


def test_noon_zero_is_doubled_vacuum():
    assert noon_parity_series(0)(0.7) == 2.0


def test_ec_peak_and_offset():
    for alpha in (0.3, 1.0, 2.5):
        s = ec_parity_series(alpha, truncation_cutoff(EntangledCoherent(alpha), 1e-14))
        assert s.peak == pytest.approx(1.0, abs=1e-12)
        lam = alpha * alpha
        norm_sq = 1 / (2 * (1 + math.exp(-lam)))
        assert s.offset == pytest.approx(4 * norm_sq * math.exp(-lam), rel=1e-13)
    with pytest.raises(ValueError):
        ec_parity_series(0.0)
