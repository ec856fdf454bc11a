import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mgc_residuals.catalog import FAMILY_MU1, PRINTED_TABLES, dist_catalog
from mgc_residuals.cox2 import (Cox2Params, fit_from_moments, moments_from_params,
                                raw_moments, sample_many, sample_service)
from mgc_residuals.errors import InfeasibleFitError, ParameterError


def ph_raw_moment(p, n):
    """E[T^n] = n! alpha (-S)^-n 1 for the phase-type form of the law."""
    alpha, S = p.generator()
    M = np.linalg.matrix_power(np.linalg.inv(-S), n)
    return math.factorial(n) * alpha @ M @ np.ones(2)


@pytest.mark.parametrize("params", [
    Cox2Params(1000, 0.400, 0.399),
    Cox2Params(10 / 9, 0.0625, 0.00625),
    Cox2Params(2.5, 0.074, 0.044),
    Cox2Params(3.0, 3.0, 0.5),  # equal stage rates
    Cox2Params(1.0, 7.0, 1.0),
])
def test_raw_moments_match_phase_type_oracle(params):
    got = raw_moments(params)
    want = [ph_raw_moment(params, n) for n in range(1, 5)]
    np.testing.assert_allclose(got, want, rtol=1e-12)


def test_table1_row_cv2():
    mom = moments_from_params(Cox2Params(1000, 0.400, 0.399))
    assert mom.m == pytest.approx(0.9985, abs=5e-5)
    assert mom.cv == pytest.approx(2.00, abs=0.005)
    assert mom.skewness == pytest.approx(3.07, abs=0.01)
    assert mom.ex_kurtosis == pytest.approx(12.77, abs=0.05)


@pytest.mark.parametrize("rate", [0.1, 1.0, 42.0])
def test_exponential_embedding(rate):
    mom = moments_from_params(Cox2Params.exponential(rate))
    assert mom.m == pytest.approx(1 / rate, rel=1e-15)
    assert mom.cv == pytest.approx(1.0, rel=1e-12)
    assert mom.skewness == pytest.approx(2.0, rel=1e-12)
    assert mom.ex_kurtosis == pytest.approx(6.0, rel=1e-12)


def test_table2_exact_rationals():
    mom = moments_from_params(Cox2Params(10 / 9, 0.0625, 0.00625))
    assert mom.m == pytest.approx(1.0, rel=1e-14)
    assert mom.cv == pytest.approx(2.0, rel=1e-13)
    assert mom.skewness == pytest.approx(19.26, abs=0.005)
    assert mom.ex_kurtosis == pytest.approx(608.91, abs=0.01)


def test_moment_consistency_fields():
    mom = moments_from_params(dist_catalog("III", 6))
    m1, m2, m3, _ = mom.raw
    sigma = math.sqrt(m2 - m1 ** 2)
    assert m1 == mom.m
    assert m2 == pytest.approx(mom.m ** 2 * (1 + mom.cv ** 2), rel=1e-12)
    assert mom.skewness == pytest.approx((m3 - 3 * m1 * m2 + 2 * m1 ** 3) / sigma ** 3, rel=1e-12)
    assert all(r > 0 for r in mom.raw)


def test_fit_table1_cv2():
    p = fit_from_moments(1, 2, 1000)
    assert p.mu2 == pytest.approx(0.3997, abs=1e-4)
    assert p.q1_exit == pytest.approx(0.6007, abs=1e-4)


def test_fit_table2_exact():
    p = fit_from_moments(1, 2, 10 / 9)
    assert p.mu2 == pytest.approx(0.0625, rel=1e-13)
    assert p.q1_exit == pytest.approx(0.99375, rel=1e-13)


def test_fit_degenerate_exponential():
    p = fit_from_moments(1, 1, 1)
    assert p.p_cont == 0
    assert p.mu1 == 1


@pytest.mark.parametrize("m, cv, mu1, fragment", [
    (1, 2, 0.5, "mu1 < 1/m"),
    (1, 0.1, 1.01, "D="),
    (1, 0.3, 1000, "p_cont"),
    (1, 2, 1, "exponential"),
])
def test_fit_infeasible(m, cv, mu1, fragment):
    with pytest.raises(InfeasibleFitError, match=fragment):
        fit_from_moments(m, cv, mu1)


def test_fit_rejects_nonpositive():
    with pytest.raises(ParameterError):
        fit_from_moments(1, 0, 10)


@pytest.mark.parametrize("kwargs", [
    dict(mu1=0, mu2=1, p_cont=0.5),
    dict(mu1=1, mu2=0, p_cont=0.5),
    dict(mu1=1, mu2=1, p_cont=1.5),
    dict(mu1=1, mu2=1, p_cont=-0.1),
])
def test_params_invariants(kwargs):
    with pytest.raises(ParameterError):
        Cox2Params(**kwargs)


@settings(max_examples=200, deadline=None)
@given(m=st.floats(0.01, 100), cv=st.floats(1.0, 20.0), k=st.floats(1.05, 1e4))
def test_fit_round_trip(m, cv, k):
    mu1 = k / m
    p = fit_from_moments(m, cv, mu1)
    mom = moments_from_params(p)
    assert mom.m == pytest.approx(m, rel=1e-9)
    assert mom.cv == pytest.approx(cv, rel=1e-9)
    assert 0 < p.p_cont <= 1


@pytest.mark.parametrize("family", sorted(FAMILY_MU1))
def test_printed_tables(family):
    for cv, (mu2, q1, skew, kurt) in PRINTED_TABLES[family].items():
        p = dist_catalog(family, cv)
        mom = moments_from_params(p)
        assert abs(p.mu2 - mu2) <= 0.002
        assert abs(p.q1_exit - q1) <= 0.002
        assert mom.skewness == pytest.approx(skew, rel=0.01)
        assert mom.ex_kurtosis == pytest.approx(kurt, rel=0.01)


def test_json_record_round_trip(tmp_path):
    p = dist_catalog("I", 4)
    path = tmp_path / "d.json"
    path.write_text('{"mu1": %r, "mu2": %r, "q1_exit": %r}' % (p.mu1, p.mu2, p.q1_exit))
    q = Cox2Params.load(path)
    assert q.p_cont == pytest.approx(p.p_cont, abs=1e-15)
    assert q.to_dict()["q1_exit"] == pytest.approx(p.q1_exit)


def test_sample_exponential_consumes_one_uniform():
    us = iter([0.25, 0.9, 0.9])
    t = sample_service(Cox2Params.exponential(2.0), us)
    assert t == pytest.approx(-math.log(0.25) / 2.0)
    assert next(us) == 0.9


def test_sample_order_stage1_routing_stage2():
    p = Cox2Params(2.0, 0.5, 0.3)
    assert sample_service(p, iter([0.5, 0.2, 0.1])) == pytest.approx(
        -math.log(0.5) / 2.0 - math.log(0.1) / 0.5)
    # routing uniform above p_cont: exit after stage 1
    assert sample_service(p, iter([0.5, 0.9])) == pytest.approx(-math.log(0.5) / 2.0)


def delta_cv_se(mom, n):
    """Standard error of the sample cv from the first four raw moments."""
    m1, m2, m3, m4 = mom.raw
    cov = np.array([[m2 - m1 ** 2, m3 - m1 * m2],
                    [m3 - m1 * m2, m4 - m2 ** 2]]) / n
    var = m2 - m1 ** 2
    grad = np.array([(-m1 / math.sqrt(var)) / m1 - math.sqrt(var) / m1 ** 2,
                     0.5 / math.sqrt(var) / m1])
    return math.sqrt(grad @ cov @ grad)


def test_sample_mean_table1():
    p = fit_from_moments(1, 2, 1000)
    mom = moments_from_params(p)
    x = sample_many(p, np.random.default_rng(2024), 10 ** 6)
    se = math.sqrt(mom.variance / x.size)
    assert abs(x.mean() - mom.m) < 3 * se
    assert (x > 0).all()


def test_sample_cv_table3():
    p = dist_catalog("III", 4)
    mom = moments_from_params(p)
    x = sample_many(p, np.random.default_rng(99), 10 ** 6)
    assert abs(x.std() / x.mean() - mom.cv) < 3 * delta_cv_se(mom, x.size)


def test_scalar_and_vector_samplers_agree_in_law():
    p = dist_catalog("III", 2)
    rng = np.random.default_rng(5)
    xs = np.array([sample_service(p, lambda: 1.0 - rng.random()) for _ in range(200_000)])
    se = math.sqrt(moments_from_params(p).variance / xs.size)
    assert abs(xs.mean() - 1.0) < 3 * se
