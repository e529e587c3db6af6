"""Rule-based adjudication of tax penalty appeals.

A taxpayer asks the court to nullify a penalty decision.  The court
recomputes the outstanding corporate tax and picks one of three outcomes:

* nothing is owed, so the decision is nullified (:class:`FullyPaid`);
* the authority's debt and penalty both match the law within tolerance,
  so the claim fails (:class:`DecisionUpheld`);
* otherwise the decision is nullified and the correct figures are stated
  (:class:`DecisionNullifiedRecalculated`).

:func:`render_judgment` turns the outcome into the full motivated judgment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .money import Money, Rate, approx_eq, format_money_2dp, mul_rate, parse_money, parse_rate

DEFAULT_TAX_RATE = parse_rate("0.18")
DEFAULT_LATE_PENALTY_RATE = parse_rate("0.20")
DEFAULT_TOLERANCE = parse_money("0.01")

_CENT_MICROS = 10_000


class CaseValidationError(ValueError):
    """A case or rule parameter fails validation; ``field`` names the culprit."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class ConsistencyError(ValueError):
    """A verdict handed to :func:`render_judgment` does not follow from its case."""


@dataclass(frozen=True)
class TaxCase:
    plaintiff: str
    income: Money
    tax_paid: Money
    assessed_debt: Money
    assessed_penalty: Money

    def __post_init__(self) -> None:
        if not self.plaintiff or not self.plaintiff.strip():
            raise CaseValidationError("plaintiff", "must be non-empty")
        for name in ("income", "tax_paid", "assessed_debt", "assessed_penalty"):
            value = getattr(self, name)
            if value.micros < 0:
                raise CaseValidationError(name, "must be non-negative")
            if value.micros % _CENT_MICROS:
                raise CaseValidationError(name, "must have at most 2 fractional digits")

    @classmethod
    def from_strings(cls, plaintiff: str, income: str, tax_paid: str, assessed_debt: str, assessed_penalty: str) -> TaxCase:
        return cls(plaintiff, parse_money(income), parse_money(tax_paid),
                   parse_money(assessed_debt), parse_money(assessed_penalty))


@dataclass(frozen=True)
class RuleParams:
    tax_rate: Rate = DEFAULT_TAX_RATE
    late_penalty_rate: Rate = DEFAULT_LATE_PENALTY_RATE
    tolerance: Money = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        if not 0 < self.tax_rate.units < Rate.one().units:
            raise CaseValidationError("tax_rate", "must lie strictly between 0 and 1")
        if self.late_penalty_rate.units < 0:
            raise CaseValidationError("late_penalty_rate", "must be non-negative")
        if self.tolerance.micros <= 0:
            raise CaseValidationError("tolerance", "must be positive")


@dataclass(frozen=True)
class FullyPaid:
    pass


@dataclass(frozen=True)
class DecisionUpheld:
    pass


@dataclass(frozen=True)
class DecisionNullifiedRecalculated:
    correct_debt: Money
    allowed_penalty: Money


Verdict = FullyPaid | DecisionUpheld | DecisionNullifiedRecalculated


def assess_obligation(case: TaxCase, params: RuleParams = RuleParams()) -> Money:
    """Outstanding tax, ``tax_rate * income - tax_paid``; negative on overpayment."""
    return mul_rate(case.income, params.tax_rate) - case.tax_paid


def adjudicate(case: TaxCase, params: RuleParams = RuleParams()) -> Verdict:
    obligation = assess_obligation(case, params)
    if obligation.micros <= 0:
        return FullyPaid()
    penalty = mul_rate(obligation, params.late_penalty_rate)
    if approx_eq(case.assessed_debt, obligation, params.tolerance) and approx_eq(
        case.assessed_penalty, penalty, params.tolerance
    ):
        return DecisionUpheld()
    return DecisionNullifiedRecalculated(correct_debt=obligation, allowed_penalty=penalty)


def _process(case: TaxCase) -> str:
    return (
        f"In the case of {case.plaintiff} v. District Tax Office plaintiff asks the Court to nullify "
        "tax penalty decision, issued by defendant. "
    )


def _facts(case: TaxCase) -> str:
    total = case.assessed_debt + case.assessed_penalty
    return (
        f"Court found that relevant tax base is {format_money_2dp(case.income)} UAH. "
        f"Plaintiff calculated, declared and paid corporate tax in sum of {format_money_2dp(case.tax_paid)} UAH. "
        "Defendant more than month later conducted tax audit with result of tax recalculation and tax penalty "
        "decision according to Articles 54.3.2, 116.1 of the Tax Code of Ukraine (TCU), increased tax obligation "
        f"to {format_money_2dp(total)} UAH in total, including additional amount of corporate tax "
        f"{format_money_2dp(case.assessed_debt)} UAH and penalty {format_money_2dp(case.assessed_penalty)} UAH. "
    )


def _law(params: RuleParams) -> str:
    return (
        f"Art. 167.1 of TCU setting corporate tax rate {_percent(params.tax_rate)} of income. "
        "Delaying tax payment more than 30 days is punishable by a penalty "
        f"{_percent(params.late_penalty_rate)} of repaid amount of the tax debt according to Art. 126.1 of TCU, "
        "that does not relieve the taxpayer from the obligation to pay full amount of the tax according to "
        "Art. 113.2 of TCU. "
    )


def _percent(rate: Rate) -> str:
    # 0.18 -> "18%", 0.125 -> "12.5%"
    whole, frac = divmod(rate.units, 100)
    return f"{whole}%" if frac == 0 else f"{whole}.{frac:02d}".rstrip("0") + "%"


_FOR_PLAINTIFF = "For these reasons, the Court rules in favor of plaintiff to nullify tax penalty decision of defendant."
_FOR_DEFENDANT = "For these reasons, the Court rules in favor of defendant, that plaintiff recover nothing in this case."


def render_judgment(case: TaxCase, verdict: Verdict, params: RuleParams = RuleParams()) -> str:
    """Process, facts, law, opinion and ruling as one paragraph."""
    if adjudicate(case, params) != verdict:
        raise ConsistencyError(f"verdict {verdict!r} does not follow from the case of {case.plaintiff}")
    if isinstance(verdict, FullyPaid):
        opinion = ("So, plaintiff paid in due time full amount of corporate tax and no legal penalties can be "
                   "imposed in such circumstances. ")
        ruling = _FOR_PLAINTIFF
    elif isinstance(verdict, DecisionUpheld):
        opinion = "So, defendant issued appropriate tax penalty decision, based on law and correct calculations. "
        ruling = _FOR_DEFENDANT
    else:
        opinion = (
            f"Considering that plaintiff's tax debt {format_money_2dp(verdict.correct_debt)} UAH allows to impose "
            f"penalty in amount of {format_money_2dp(verdict.allowed_penalty)} UAH, defendant's tax penalty "
            "decision does not meet requirements of the law and must be nullified, despite defendant can issue "
            "appropriate tax penalty decision later. "
        )
        ruling = _FOR_PLAINTIFF
    return _process(case) + _facts(case) + _law(params) + opinion + ruling


@dataclass(frozen=True)
class Ruling:
    case: TaxCase
    verdict: Verdict
    judgment: str = field(repr=False)


def adjudicate_all(cases, params: RuleParams = RuleParams()) -> list[Ruling]:
    """Adjudicate a batch, keeping input order."""
    out = []
    for case in cases:
        verdict = adjudicate(case, params)
        out.append(Ruling(case, verdict, render_judgment(case, verdict, params)))
    return out
