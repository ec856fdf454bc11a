import pytest
from hypothesis import given, strategies as st

from mgc_residuals import qbd
from mgc_residuals.approx import (classic_bundle, min_residual_eq2, relative_error,
                                  wait_eq1)
from mgc_residuals.catalog import dist_catalog
from mgc_residuals.cox2 import Cox2Params
from mgc_residuals.errors import ParameterError, UndefinedConditionalError
from mgc_residuals.mmc import erlang_c
from mgc_residuals.model import ModelSpec


def test_eq2_arithmetic():
    assert min_residual_eq2(1, 4, 4) == 2.125
    assert min_residual_eq2(1, 1, 2) == 0.5
    assert min_residual_eq2(1, 2, 1) == 2.5


def test_eq1_values():
    assert wait_eq1(1 / 3, 0.5, 0.5) == pytest.approx(1 / 3)
    assert wait_eq1(0.0, 7.0, 0.5) == 0.0
    assert wait_eq1(0.17391, 0.25, 0.5) == pytest.approx(0.08696, abs=1e-5)


@pytest.mark.parametrize("args", [(0.5, 1.0, 1.0), (0.5, 1.0, 0.0), (1.5, 1.0, 0.5), (0.5, -1, 0.5)])
def test_eq1_domain(args):
    with pytest.raises(ParameterError):
        wait_eq1(*args)


@pytest.mark.parametrize("c", [1, 2, 4, 8])
@pytest.mark.parametrize("rho", [0.1, 0.5, 0.9])
def test_eq1_exact_for_exponential(c, rho):
    m = ModelSpec.from_rho(rho, c, Cox2Params.exponential(1.0))
    r = qbd.solve(m)
    assert wait_eq1(r.pi_wait, 1.0 / c, rho) == pytest.approx(r.ew, abs=1e-10)


@pytest.mark.parametrize("fam", ["I", "II", "III"])
@pytest.mark.parametrize("cv", [2, 6, 10])
def test_eq2_exact_single_server(fam, cv):
    m = ModelSpec.from_rho(0.5, 1, dist_catalog(fam, cv))
    mom = m.moments
    assert min_residual_eq2(mom.m, mom.cv, 1) == pytest.approx(qbd.solve(m).min_tr, rel=1e-9)


def test_bundle_exponential_is_exact():
    m = ModelSpec.from_rho(0.6, 3, Cox2Params.exponential(2.0))
    b, r = classic_bundle(m), qbd.solve(m)
    assert b.pi_wait_mmc == pytest.approx(r.pi_wait, abs=1e-10)
    assert b.min_tr_eq2 == pytest.approx(r.min_tr, abs=1e-12)
    assert b.ew_eq1 == pytest.approx(r.ew, abs=1e-10)
    assert b.eq_approx == pytest.approx(r.eq, abs=1e-10)


def test_bundle_construction():
    m = ModelSpec.from_rho(0.5, 4, dist_catalog("III", 4))
    b = classic_bundle(m)
    assert b.pi_wait_mmc == erlang_c(4, m.lam * m.m)
    assert b.ew_eq1 == pytest.approx(b.pi_wait_mmc * b.min_tr_eq2 / (1 - m.rho))
    assert b.eq_approx == pytest.approx(4 * m.rho + m.lam * b.ew_eq1)


def test_dist1_error_small():
    m = ModelSpec.from_rho(0.5, 4, dist_catalog("I", 4))
    assert classic_bundle(m).min_tr_eq2 == pytest.approx(2.125, rel=1e-6)
    assert abs(relative_error(classic_bundle(m).min_tr_eq2, qbd.solve(m).min_tr)) < 0.02


def test_dist2_cv2_error_near_100_percent():
    errs = []
    for c in (2, 4):
        m = ModelSpec.from_rho(0.5, c, dist_catalog("II", 2))
        errs.append(relative_error(classic_bundle(m).min_tr_eq2, qbd.solve(m).min_tr))
    assert any(abs(e - 1.0) <= 0.25 for e in errs)


def test_relative_error_values():
    assert relative_error(2.125, 2.125) == 0
    assert relative_error(1.25, 0.625) == pytest.approx(1.0)
    with pytest.raises(UndefinedConditionalError):
        relative_error(1.0, 0.0)


def test_worst_case_300_percent():
    m = ModelSpec.from_rho(0.5, 2, dist_catalog("II", 4))
    assert 100 * relative_error(4.25, qbd.solve(m).min_tr) == pytest.approx(300, abs=50)


@given(a=st.floats(-1e6, 1e6), d=st.floats(1e-3, 1e3), e=st.floats(1e-3, 1e6))
def test_relative_error_monotone(a, d, e):
    assert relative_error(a + d, e) > relative_error(a, e)
    assert relative_error(e, e) == 0
