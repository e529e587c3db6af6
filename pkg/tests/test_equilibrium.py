from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexmodel.equilibrium import (
    AllPointsCoincide,
    DomainError,
    EquilibriumPoint,
    LinearFn,
    LinearLawModel,
    NoEquilibrium,
    OutsideDomain,
    evaluate,
    model_from_tax_params,
    solve_equilibrium,
)
from lexmodel.money import Money, Rate, parse_money, parse_rate


@pytest.fixture
def reference_model():
    return model_from_tax_params(parse_money("442000000"), parse_rate("0.18"), parse_rate("0.25"))


def simple_model():
    return model_from_tax_params(parse_money("100"), parse_rate("0.5"), parse_rate("1.0"))


def test_reference_duties_line(reference_model):
    assert reference_model.duties.intercept == parse_money("552500000")
    assert reference_model.duties.slope == Fraction("-0.045")
    assert reference_model.rights.slope == Fraction("0.18")
    assert reference_model.rights.intercept == Money(0)


def test_duties_match_unsimplified_form(reference_model):
    # (1+p)(E - tI) + tI, evaluated directly
    for income in (0, 10**9, Fraction(22_100_000_000, 9), 5 * 10**9):
        unsimplified = Fraction(125, 100) * (442_000_000 - Fraction(18, 100) * income) + Fraction(18, 100) * income
        assert reference_model.duties(Fraction(income)) == unsimplified


def test_simple_model_lines():
    model = simple_model()
    assert model.duties.intercept == parse_money("200")
    assert model.duties.slope == Fraction(-1, 2)
    assert evaluate(model, parse_money("100")) == (50, 150)


def test_no_evasion_model():
    model = model_from_tax_params(Money(0), parse_rate("0.3"), parse_rate("0.7"))
    assert model.duties.intercept == Money(0)
    assert solve_equilibrium(model) == EquilibriumPoint(Fraction(0), Fraction(0))


def test_reference_equilibrium(reference_model):
    eq = solve_equilibrium(reference_model)
    assert isinstance(eq, EquilibriumPoint)
    assert eq.income == Fraction(22_100_000_000, 9)
    assert eq.responsibility == 442_000_000
    assert eq.income_text == "2455555555.56"
    assert eq.responsibility_text == "442000000.00"


def test_evaluate_reference(reference_model):
    assert evaluate(reference_model, Money(0)) == (0, 552_500_000)
    assert evaluate(reference_model, Fraction(22_100_000_000, 9)) == (442_000_000, 442_000_000)


def test_strict_domain(reference_model):
    limit = Fraction(442_000_000) / Fraction("0.18")
    evaluate(reference_model, limit, strict_domain=True)
    with pytest.raises(DomainError):
        evaluate(reference_model, limit + 1, strict_domain=True)
    # extrapolation is the default
    assert evaluate(reference_model, parse_money("5000000000"))[1] == 552_500_000 - 225_000_000


def test_negative_income_rejected(reference_model):
    with pytest.raises(DomainError):
        evaluate(reference_model, parse_money("-1"))


@pytest.mark.parametrize(
    "evasion, tax, penalty, parameter",
    [("-1", "0.18", "0.25", "evasion_total"), ("1", "0", "0.25", "tax_rate"),
     ("1", "1", "0.25", "tax_rate"), ("1", "0.18", "-0.1", "penalty_rate")],
)
def test_parameter_validation(evasion, tax, penalty, parameter):
    with pytest.raises(DomainError) as info:
        model_from_tax_params(parse_money(evasion), parse_rate(tax), parse_rate(penalty))
    assert info.value.parameter == parameter


def test_degenerate_outcomes():
    rights = LinearFn(Fraction("0.18"), Money(0))
    assert solve_equilibrium(LinearLawModel(rights, rights)) == AllPointsCoincide()
    shifted = LinearFn(Fraction("0.18"), Money(1_000_000))
    assert solve_equilibrium(LinearLawModel(rights, shifted)) == NoEquilibrium()
    behind = LinearFn(Fraction("0.5"), Money(10_000_000))
    outcome = solve_equilibrium(LinearLawModel(rights, behind))
    assert isinstance(outcome, OutsideDomain)
    assert outcome.point.income < 0


def test_rights_slope_must_be_non_negative():
    with pytest.raises(DomainError):
        LinearLawModel(LinearFn(Fraction(-1), Money(0)), LinearFn(Fraction(0), Money(0)))


def test_describe(reference_model):
    assert reference_model.rights.describe() == "0.18 * I"
    assert reference_model.duties.describe() == "552500000 - 0.045 * I"


cents = st.integers(min_value=100, max_value=10**12).map(lambda c: Money(c * 10_000))
tax_rates = st.integers(min_value=100, max_value=9_900).map(Rate)
penalty_rates = st.integers(min_value=1, max_value=20_000).map(Rate)


@settings(max_examples=1000)
@given(cents, tax_rates, penalty_rates)
def test_equilibrium_identity(evasion, tax, penalty):
    eq = solve_equilibrium(model_from_tax_params(evasion, tax, penalty))
    assert eq.income == evasion.to_fraction() / tax.to_fraction()
    assert eq.responsibility == evasion.to_fraction()


@given(cents, tax_rates, penalty_rates)
def test_zero_gap_at_equilibrium(evasion, tax, penalty):
    model = model_from_tax_params(evasion, tax, penalty)
    eq = solve_equilibrium(model)
    r, d = evaluate(model, eq.income)
    assert r - d == 0


@given(st.integers(min_value=0, max_value=10**15), st.integers(min_value=0, max_value=10**15))
def test_evaluate_is_affine(a, b):
    model = model_from_tax_params(parse_money("442000000"), parse_rate("0.18"), parse_rate("0.25"))
    base = evaluate(model, Money(0))
    ra, da = evaluate(model, Money(a))
    rab, dab = evaluate(model, Money(a + b))
    rb, db = evaluate(model, Money(b))
    assert (rab - ra, dab - da) == (rb - base[0], db - base[1])
