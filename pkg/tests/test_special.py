import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kerr_mzi.special import (
    LogFactorialTable,
    TruncationPolicy,
    geometric_moment,
    geometric_weights_array,
    log_binomial,
    log_factorial_table,
    poisson_weights_array,
    truncation_cutoff,
)
from kerr_mzi.states import NOON, TMSV, EntangledCoherent, TwinFock


def brute_geometric_moment(nbar, order, tail=1e-14):
    # direct series over the pair distribution, no closed forms
    r = nbar / (nbar + 2.0)
    terms, n = [], 0
    while True:
        p = (1 - r) * r**n
        terms.append(p * n**order)
        if r ** (n + 1) * (n + 1) ** order < tail * 1e-3 and n > 10:
            break
        n += 1
    return math.fsum(terms)


def test_log_factorial_table():
    t = LogFactorialTable.build(30)
    assert t.values[0] == 0.0
    assert np.all(np.diff(t.values[2:]) > 0)
    for k in range(21):
        assert math.exp(t.values[k]) == pytest.approx(math.factorial(k), rel=1e-13)
    assert not t.values.flags.writeable


def test_shared_table_grows():
    assert log_factorial_table(5000).k_max >= 5000
    assert log_factorial_table(10).values[10] == pytest.approx(math.log(math.factorial(10)), rel=1e-15)


def test_log_binomial_examples():
    assert log_binomial(0, 0) == 0.0
    assert log_binomial(4, 2) == pytest.approx(math.log(math.comb(4, 2)), rel=1e-15)
    assert log_binomial(2, 3) == -math.inf
    assert log_binomial(2, -1) == -math.inf


def test_log_binomial_large_stays_finite():
    # C(2n, n) overflows doubles around n = 510
    v = log_binomial(2000, 1000)
    assert math.isfinite(v)
    assert v == pytest.approx(math.lgamma(2001) - 2 * math.lgamma(1001), rel=1e-13)


def test_pascal_rule_all_n_up_to_60():
    for n in range(1, 61):
        for k in range(0, n + 1):
            lhs = math.exp(log_binomial(n, k))
            rhs = math.exp(log_binomial(n - 1, k - 1)) + math.exp(log_binomial(n - 1, k))
            assert lhs == pytest.approx(rhs, rel=1e-12)


@given(st.integers(0, 60), st.integers(-3, 63))
def test_log_binomial_matches_exact_integers(n, k):
    v = log_binomial(n, k)
    if 0 <= k <= n:
        assert math.exp(v) == pytest.approx(math.comb(n, k), rel=1e-12)
    else:
        assert v == -math.inf


def test_geometric_moment_examples():
    for order in range(1, 5):
        assert geometric_moment(0, order) == 0.0
    assert geometric_moment(2, 4) == 75.0
    assert geometric_moment(1, 1) == 0.5
    assert brute_geometric_moment(2, 4) == pytest.approx(75.0, rel=1e-12)
    assert brute_geometric_moment(1, 1) == pytest.approx(0.5, rel=1e-12)


@pytest.mark.parametrize("nbar", [0.5, 1, 2, 4, 8])
@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_geometric_moment_vs_series(nbar, order):
    assert geometric_moment(nbar, order) == pytest.approx(brute_geometric_moment(nbar, order), rel=1e-10)


def test_geometric_moment_rejects_bad_order():
    with pytest.raises(ValueError):
        geometric_moment(1.0, 5)
    with pytest.raises(ValueError):
        geometric_moment(1.0, 0)


def test_truncation_examples():
    assert truncation_cutoff(TMSV(0), 1e-12).n_max == 0
    assert truncation_cutoff(TMSV(2), 1e-12).n_max == 39
    # scan oracle for the same case
    n = 0
    while 0.5 ** (n + 1) > 1e-12:
        n += 1
    assert n == 39


def test_truncation_rejects():
    with pytest.raises(ValueError):
        truncation_cutoff(TMSV(1), 0.0)
    with pytest.raises(ValueError):
        truncation_cutoff(TMSV(1), 1.0)
    with pytest.raises(ValueError):
        truncation_cutoff(TwinFock(2), 1e-6)
    with pytest.raises(ValueError):
        truncation_cutoff(NOON(2), 1e-6)
    with pytest.raises(ValueError):
        TruncationPolicy(-1, 0.1)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 50.0), st.floats(1e-14, 0.5))
def test_tmsv_retained_mass(nbar, eps):
    pol = truncation_cutoff(TMSV(nbar), eps)
    r = nbar / (nbar + 2)
    # closed-form tail r^(n+1); smallest such n
    assert r ** (pol.n_max + 1) <= eps * (1 + 1e-12)
    if pol.n_max > 0:
        assert r**pol.n_max > eps * (1 - 1e-12)
    assert geometric_weights_array(nbar, pol.n_max).sum() >= 1 - eps - 1e-15


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 40.0), st.floats(1e-14, 0.5))
def test_ec_retained_mass(alpha, eps):
    pol = truncation_cutoff(EntangledCoherent(alpha), eps)
    lam = alpha * alpha
    pmf = poisson_weights_array(lam, pol.n_max + 400)
    tail = math.fsum(pmf[pol.n_max + 1 :])
    assert tail <= eps * (1 + 1e-9)
    if pol.n_max > 0:
        assert math.fsum(pmf[pol.n_max :]) > eps * (1 - 1e-9)


def test_poisson_weights_match_direct():
    lam = 7.3
    direct = [math.exp(-lam) * lam**n / math.factorial(n) for n in range(40)]
    np.testing.assert_allclose(poisson_weights_array(lam, 39), direct, rtol=1e-12)
