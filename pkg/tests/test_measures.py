import math

import pytest
from hypothesis import assume, given, strategies as st

from dtmrisk import (
    EllipticalDistribution,
    Laplace,
    Logistic,
    Normal,
    PearsonVII,
    StudentT,
    central_moment,
    dte,
    dtk,
    dtm,
    dts,
    dtv,
    lterms,
    make_window,
    raw_truncated_moment,
    risk_report,
    tce,
    tcm,
)
from dtmrisk.errors import DegenerateWindowError, DomainError, UnsupportedError
from dtmrisk.measures import (
    conditioning_warnings,
    dte_standardized,
    dtk_expanded,
    dtm_expanded,
    dts_expanded,
    dtv_expanded,
    standardized_raw_moments,
)
from dtmrisk.oracle import oracle_truncated_moment, relative_error
from dtmrisk.report import RiskReport

from conftest import FAMILIES

# Reference values from 40-digit mpmath quadrature of hand-written densities
# (tests/oracles/compute_frozen.py); the package is not involved.
LAPLACE_DTE_10_80 = -0.17473479304488711
STUDENT5_DTE_20_90 = 0.16705497418918459
NORMAL_1_2_RAW3_10_90 = 6.2526951388436676
STUDENT8_DTM4_05_95 = 1.2210807123019998
STUDENT8_DTV_05_95 = 0.72736274242521887
STUDENT8_DTK_05_95 = -0.69196564833764852
LAPLACE_DTV_25_75 = 0.13325262496190796
NORMAL_DTS_05_70 = -0.33227432199590885
NORMAL_TCE_95 = 2.062712807507426
TOL = 1e-9


def dist(family, mu=0.0, sigma=1.0):
    return EllipticalDistribution(mu, sigma, family)


def window(d, p, q):
    return make_window(d, p, q)


@pytest.mark.parametrize(
    "value, expected",
    [
        (lambda: dte(dist(Laplace()), window(dist(Laplace()), 0.1, 0.8)), LAPLACE_DTE_10_80),
        (lambda: dte_standardized(StudentT(5.0), window(dist(StudentT(5.0)), 0.2, 0.9)), STUDENT5_DTE_20_90),
        (lambda: raw_truncated_moment(dist(Normal(), 1.0, 2.0), window(dist(Normal(), 1.0, 2.0), 0.1, 0.9), 3),
         NORMAL_1_2_RAW3_10_90),
        (lambda: dtm(dist(StudentT(8.0)), window(dist(StudentT(8.0)), 0.05, 0.95), 4), STUDENT8_DTM4_05_95),
        (lambda: dtv(dist(StudentT(8.0)), window(dist(StudentT(8.0)), 0.05, 0.95)), STUDENT8_DTV_05_95),
        (lambda: dtk(dist(StudentT(8.0)), window(dist(StudentT(8.0)), 0.05, 0.95)), STUDENT8_DTK_05_95),
        (lambda: dtv(dist(Laplace()), window(dist(Laplace()), 0.25, 0.75)), LAPLACE_DTV_25_75),
        (lambda: dts(dist(Normal()), window(dist(Normal()), 0.05, 0.70)), NORMAL_DTS_05_70),
        (lambda: tce(dist(Normal()), 0.95), NORMAL_TCE_95),
        (lambda: tcm(dist(Laplace()), 0.9, 3), 2.0),
    ],
    ids=["laplace-dte", "t5-dte", "normal-raw3", "t8-dtm4", "t8-dtv", "t8-dtk", "laplace-dtv",
         "normal-dts", "normal-tce", "laplace-tcm3"],
)
def test_frozen_values(value, expected):
    assert value() == pytest.approx(expected, rel=TOL)


def test_trivial_values():
    n01 = dist(Normal())
    full = window(n01, 0.0, 1.0)
    assert dte(n01, full) == 0.0
    assert raw_truncated_moment(n01, full, 2) == pytest.approx(1.0, rel=1e-14)
    assert dtv(n01, full) == pytest.approx(1.0, rel=1e-14)
    assert dtm(n01, full, 3) == 0.0
    assert dts(n01, full) == 0.0
    assert dtk(n01, full) == pytest.approx(0.0, abs=1e-14)
    assert dtk(dist(StudentT(10.0)), window(dist(StudentT(10.0)), 0.0, 1.0)) == pytest.approx(1.0, rel=1e-12)
    assert dtk(dist(Laplace()), window(dist(Laplace()), 0.0, 1.0)) == pytest.approx(3.0, rel=1e-14)
    assert central_moment(dist(Normal(), 0.0, 2.0), 4) == pytest.approx(48.0, rel=1e-14)
    assert central_moment(dist(StudentT(5.0)), 2) == pytest.approx(5.0 / 3.0, rel=1e-14)
    for family in FAMILIES:
        assert central_moment(dist(family), 3) == 0.0


def test_raw_moment_order_one_is_dte():
    d = dist(Logistic(), 0.7, 1.9)
    w = window(d, 0.15, 0.6)
    assert raw_truncated_moment(d, w, 1) == pytest.approx(dte(d, w), rel=1e-15)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
def test_tcm_is_the_q_equals_one_window(family):
    d = dist(family, 0.4, 1.1)
    w = window(d, 0.8, 1.0)
    assert tcm(d, 0.8, 1) == dte(d, w)
    assert tcm(d, 0.8, 2) == pytest.approx(dtv(d, w), rel=1e-12)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
def test_lterms_symmetric_window(family):
    d = dist(family)
    lt = lterms(family, window(d, 0.2, 0.8))
    assert lt.dte == 0.0
    assert lt.L1_star == 0.0
    assert lt.L2_star == 0.0
    assert lt.L2 > 0.0


def test_lterm_coefficients():
    # the F_{Y(2)}/F_Y coefficient inside L2** is c1/c*2: 8 for Laplace, m^2/((m-2)(m-4)) for t
    for family, coef in ((Laplace(), 8.0), (StudentT(6.0), 4.5)):
        d = dist(family)
        w = window(d, 0.25, 0.75)
        lt = lterms(family, w)
        c1, a, b = family.normalizer("c1"), w.xi_p, w.xi_q
        edge = c1 * (a * family.gbar(2, a * a / 2) - b * family.gbar(2, b * b / 2)) / lt.mass
        fy2 = family.derived_cdf_interval(2, a, b) / lt.mass
        assert (lt.L2_dstar - edge) / fy2 == pytest.approx(coef, rel=1e-13)


def test_lterms_identify_the_missing_term():
    with pytest.raises(UnsupportedError, match="m > 4"):
        lterms(StudentT(4.0), window(dist(StudentT(4.0)), 0.1, 0.9), 4)


windows = st.tuples(st.floats(0.0, 0.85), st.floats(0.1, 1.0)).map(
    lambda t: (t[0], min(1.0, t[0] + t[1]))
)
locs = st.floats(-50.0, 50.0)
scales = st.floats(0.01, 20.0)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
@given(pq=windows, mu=locs, sigma=scales)
def test_location_scale_laws(family, pq, mu, sigma):
    assume(pq[0] < pq[1])
    std, d = dist(family), dist(family, mu, sigma)
    ws, wd = window(std, *pq), window(d, *pq)
    assert dte(d, wd) == pytest.approx(mu + sigma * dte_standardized(family, ws), abs=1e-12 * (abs(mu) + sigma))
    assert dtv(d, wd) == pytest.approx(sigma ** 2 * dtv(std, ws), rel=1e-12)
    assert dts(d, wd) == pytest.approx(dts(std, ws), abs=1e-10)
    assert dtk(d, wd) == pytest.approx(dtk(std, ws), abs=1e-10)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
@given(p=st.floats(0.0, 0.49), mu=locs, sigma=scales)
def test_symmetric_window_identities(family, p, mu, sigma):
    d = dist(family, mu, sigma)
    w = window(d, p, 1.0 - p)
    assert abs(dte(d, w) - mu) <= TOL * sigma
    assert abs(dts(d, w)) <= TOL


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
@given(pq=windows, mu=locs, sigma=scales)
def test_dtv_positive_and_matches_dtm2(family, pq, mu, sigma):
    assume(pq[0] < pq[1])
    d = dist(family, mu, sigma)
    w = window(d, *pq)
    v = dtv(d, w)
    assert v > 0.0
    assert dtm(d, w, 2) == pytest.approx(v, rel=1e-9)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
def test_symmetric_dtv_shrinks_with_window(family):
    d = dist(family)
    vals = [dtv(d, window(d, p, 1 - p)) for p in (0.05, 0.10, 0.15, 0.20, 0.25, 0.30)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
@pytest.mark.parametrize("pq", [(0.1, 0.8), (0.0, 0.35), (0.6, 1.0), (0.3, 0.45)])
def test_expanded_forms_agree(family, pq):
    d = dist(family, 0.8, 1.3)
    w = window(d, *pq)
    scale = dtv(d, w)
    assert dtv_expanded(d, w) == pytest.approx(scale, rel=1e-9)
    assert dts_expanded(d, w) == pytest.approx(dts(d, w), abs=1e-9)
    assert dtk_expanded(d, w) == pytest.approx(dtk(d, w), abs=1e-9)
    for n in (2, 3, 4):
        assert relative_error(dtm_expanded(d, w, n), dtm(d, w, n), scale ** (n / 2)) < 1e-9


def test_recombination_beats_expanded_form_far_from_origin():
    # identical algebra; the standardized path avoids cancellation when |mu| >> sigma
    d = dist(Normal(), 1e4, 1e-2)
    w = window(d, 0.1, 0.6)
    ref = dtm(dist(Normal()), window(dist(Normal()), 0.1, 0.6), 4) * 1e-8
    assert dtm(d, w, 4) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
@pytest.mark.parametrize("n", [5, 6])
def test_higher_orders_against_oracle(family, n):
    d = dist(family, -0.5, 2.0)
    w = window(d, 0.1, 0.85)
    ref = oracle_truncated_moment(d, w, n, central=True)
    assert relative_error(dtm(d, w, n), ref, dtv(d, w) ** (n / 2)) < 1e-8
    raw = oracle_truncated_moment(d, w, n)
    assert raw_truncated_moment(d, w, n) == pytest.approx(raw, rel=1e-8)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
def test_limits_converge_as_window_opens(family):
    d = dist(family)
    gaps = []
    for eps in (1e-4, 1e-6, 1e-8):
        gaps.append(abs(dtm(d, window(d, eps, 1 - eps), 2) / central_moment(d, 2) - 1))
    assert gaps[0] > gaps[1] > gaps[2]
    tail = [abs(dtm(d, window(d, 0.9, 1 - eps), 2) / tcm(d, 0.9, 2) - 1) for eps in (1e-4, 1e-6, 1e-8)]
    assert tail[0] > tail[1] > tail[2]


def test_normal_limits_at_tiny_eps():
    d = dist(Normal())
    eps = 1e-13
    assert dtm(d, window(d, eps, 1 - eps), 4) == pytest.approx(3.0, rel=1e-6)
    assert dtm(d, window(d, 0.9, 1 - eps), 3) == pytest.approx(tcm(d, 0.9, 3), rel=1e-4)


@pytest.mark.parametrize(
    "call, message",
    [
        (lambda: dtk(dist(StudentT(4.0)), window(dist(StudentT(4.0)), 0.1, 0.9)), "m > 4"),
        (lambda: dts(dist(StudentT(3.0)), window(dist(StudentT(3.0)), 0.1, 0.9)), "m > 3"),
        (lambda: dtv(dist(StudentT(2.0)), window(dist(StudentT(2.0)), 0.1, 0.9)), "m > 2"),
        (lambda: dtk(dist(PearsonVII(2.5)), window(dist(PearsonVII(2.5)), 0.1, 0.9)), "t > 5/2"),
        (lambda: dts(dist(PearsonVII(2.0)), window(dist(PearsonVII(2.0)), 0.1, 0.9)), "t > 2"),
        (lambda: dtm(dist(StudentT(5.5)), window(dist(StudentT(5.5)), 0.1, 0.9), 6), "m > 6"),
        (lambda: central_moment(dist(StudentT(4.0)), 4), "m > 4"),
    ],
)
def test_validity_is_enforced(call, message):
    with pytest.raises(UnsupportedError, match=message):
        call()


def test_domain_errors():
    d = dist(Normal())
    with pytest.raises(DomainError):
        dtm(d, window(d, 0.1, 0.9), 1)
    with pytest.raises(DomainError):
        raw_truncated_moment(d, window(d, 0.1, 0.9), 0)
    with pytest.raises(DomainError):
        tcm(d, 1.0, 2)
    with pytest.raises(DegenerateWindowError):
        dte(d, window(d, 0.3, 0.3 + 1e-13))


def test_standardized_raw_moment_zero_order():
    d = dist(Normal())
    assert standardized_raw_moments(Normal(), window(d, 0.2, 0.4), 0) == [1.0]


def test_report_and_warnings():
    d = dist(StudentT(4.01), 1.0, 2.0)
    rep = risk_report(d, window(d, 0.05, 0.95), extra_orders=(2,))
    assert rep.dtm[2] == pytest.approx(rep.dtv, rel=1e-12)
    assert rep.warnings and "ill-conditioned" in rep.warnings[0]
    assert conditioning_warnings(StudentT(6.0), 4) == ()
    assert conditioning_warnings(Normal(), 4) == ()
    rep3 = risk_report(dist(StudentT(3.5)), window(dist(StudentT(3.5)), 0.1, 0.9), order=3)
    assert rep3.dtk is None and rep3.dts == 0.0
    with pytest.raises(DomainError):
        risk_report(d, window(d, 0.1, 0.9), order=5)


def test_report_invariants():
    with pytest.raises(DomainError):
        RiskReport(dte=0.0, dtv=-1.0, dts=0.0, dtk=0.0, p=0.1, q=0.9, x_p=-1.0, x_q=1.0)
    with pytest.raises(DomainError):
        RiskReport(dte=0.0, dtv=1.0, dts=0.0, dtk=0.0, p=0.1, q=0.9, x_p=-1.0, x_q=1.0, dtm={2: 2.0})
