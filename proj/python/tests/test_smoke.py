import math

import pytest

import shockcop as sc


def test_efgm_value():
    c = sc.Copula.efgm(1.0)
    assert c(0.5, 0.5) == pytest.approx(0.1875, abs=1e-15)


def test_parse_and_survival():
    c = sc.Copula.parse("survival(efgm:a=1)")
    assert c(0.5, 0.5) == pytest.approx(0.1875, abs=1e-15)
    assert sc.Copula.parse("frechet-m")(0.3, 0.4) == pytest.approx(0.3)


def test_generator_validation():
    assert sc.validate(sc.Generator.parse("power:alpha=0.5", sc.GeneratorClass.RmmF)).passed
    rep = sc.validate(sc.Generator.two_param(0.5, 0.3))
    assert not rep.passed
    assert any(v.condition == "G.twoparam-domain" for v in rep.violations)


def test_efgm_generator_from_shocks():
    a = 0.95
    hat = sc.generator_from_shocks(sc.Distribution.uniform(), sc.Distribution.efgm_margin(a))
    for t in (0.1, 0.5, 0.9):
        assert hat(t) == pytest.approx((a + 1) * t - a * t * t, abs=1e-9)


def test_margins_and_joint():
    u = sc.Distribution.uniform()
    m = sc.ShockModel.rmm(u, u, u, u)
    fu, _ = sc.margins(m)
    assert fu.cdf(0.5) == pytest.approx(0.25)
    assert sc.joint_cdf(m, 0.5, 0.5) == 0.0


def test_sampling_is_deterministic():
    m = sc.ShockModel.parse("exp-rmm:l1=1,l2=1,m1=1,m2=1")
    a = sc.sample_model(m, 500, 7)
    b = sc.sample_model(m, 500, 7, workers=1)
    assert a.to_csv() == b.to_csv()
    assert len(a) == 500


def test_axioms_and_reconstruction():
    assert sc.check_copula_axioms(sc.Copula.efgm(1.0), rectangles=2000).passed
    u = sc.Distribution.uniform()
    assert sc.check_reconstruction(sc.Copula.efgm(1.0), u, u).passed


def test_errors_are_python_exceptions():
    with pytest.raises(sc.ParseError):
        sc.Copula.parse("nonsense:x=1")
    with pytest.raises(sc.DomainError):
        sc.Copula.efgm(0.0)
    assert math.isinf(sc.Distribution.uniform().quantile(0.0))
