"""Linear rights/duties model of taxpayer autonomy and its legal equilibrium.

The rights line maps declared income to self-assessed tax; the duties line
maps it to what the state imposes once an evasion total has been uncovered
(tax plus penalty).  Their intersection is the legal equilibrium.  All
evaluation is exact rational arithmetic; nothing rounds until display.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .money import Money, Rate, format_fraction_2dp, mul_rate

DEFAULT_AXIS_LABELS = (
    "Freedom (declared income in UAH millions)",
    "Responsibility (tax & penalty in UAH millions)",
)
DEFAULT_TITLE = "Taxpayer autonomy model"


class DomainError(ValueError):
    """A model parameter is outside its admissible range."""

    def __init__(self, parameter: str, message: str) -> None:
        super().__init__(f"{parameter}: {message}")
        self.parameter = parameter


@dataclass(frozen=True)
class LinearFn:
    """``y = slope * x + intercept`` over money amounts."""

    slope: Fraction
    intercept: Money

    def __post_init__(self) -> None:
        object.__setattr__(self, "slope", Fraction(self.slope))

    def __call__(self, x: Fraction | Money) -> Fraction:
        if isinstance(x, Money):
            x = x.to_fraction()
        return self.slope * x + self.intercept.to_fraction()

    def describe(self, variable: str = "I") -> str:
        slope = _fraction_text(self.slope)
        intercept = _fraction_text(self.intercept.to_fraction())
        if self.intercept.is_zero:
            return f"{slope} * {variable}"
        if self.slope == 0:
            return intercept
        sign = "-" if self.slope < 0 else "+"
        return f"{intercept} {sign} {_fraction_text(abs(self.slope))} * {variable}"


def _fraction_text(value: Fraction) -> str:
    # terminating decimals print in full, others as p/q
    d = value.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d != 1:
        return f"{value.numerator}/{value.denominator}"
    places = 0
    while (value * 10**places).denominator != 1:
        places += 1
    scaled = int(value * 10**places)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    if places == 0:
        return f"{sign}{digits}"
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


@dataclass(frozen=True)
class LinearLawModel:
    rights: LinearFn
    duties: LinearFn
    axis_labels: tuple[str, str] = DEFAULT_AXIS_LABELS
    unit_scale: int = 1_000_000
    title: str = DEFAULT_TITLE
    # income beyond which the duties line is an extrapolation (tax debt < 0)
    duties_domain_max: Fraction | None = None

    def __post_init__(self) -> None:
        if self.rights.slope < 0:
            raise DomainError("rights.slope", "must be non-negative")
        if self.unit_scale < 1:
            raise DomainError("unit_scale", "must be a positive integer")


@dataclass(frozen=True)
class EquilibriumPoint:
    income: Fraction
    responsibility: Fraction

    @property
    def income_text(self) -> str:
        return format_fraction_2dp(self.income)

    @property
    def responsibility_text(self) -> str:
        return format_fraction_2dp(self.responsibility)


@dataclass(frozen=True)
class AllPointsCoincide:
    """Rights and duties are the same line."""


@dataclass(frozen=True)
class NoEquilibrium:
    """Parallel, distinct lines."""


@dataclass(frozen=True)
class OutsideDomain:
    """The lines cross at negative income."""

    point: EquilibriumPoint


EquilibriumOutcome = EquilibriumPoint | AllPointsCoincide | NoEquilibrium | OutsideDomain


def model_from_tax_params(evasion_total: Money, tax_rate: Rate, penalty_rate: Rate) -> LinearLawModel:
    """Build the model for an uncovered evasion total.

    Rights are the self-assessed tax ``t*I``.  Duties are the tax plus a
    penalty on the unpaid remainder: ``(1+p)(E - t*I) + t*I``, which
    simplifies to ``(1+p)E - p*t*I``.
    """
    if evasion_total.micros < 0:
        raise DomainError("evasion_total", "must be non-negative")
    if not 0 < tax_rate.units < Rate.one().units:
        raise DomainError("tax_rate", "must lie strictly between 0 and 1")
    if penalty_rate.units < 0:
        raise DomainError("penalty_rate", "must be non-negative")
    t = tax_rate.to_fraction()
    p = penalty_rate.to_fraction()
    rights = LinearFn(slope=t, intercept=Money(0))
    duties = LinearFn(slope=-p * t, intercept=mul_rate(evasion_total, Rate.one() + penalty_rate))
    return LinearLawModel(
        rights=rights,
        duties=duties,
        duties_domain_max=evasion_total.to_fraction() / t,
    )


def evaluate(model: LinearLawModel, income: Money | Fraction, strict_domain: bool = False) -> tuple[Fraction, Fraction]:
    """Return ``(rights(I), duties(I))`` exactly.

    The duties line is extrapolated past the point where the underlying tax
    debt turns negative unless ``strict_domain`` is set.
    """
    x = income.to_fraction() if isinstance(income, Money) else Fraction(income)
    if x < 0:
        raise DomainError("income", "must be non-negative")
    if strict_domain and model.duties_domain_max is not None and x > model.duties_domain_max:
        raise DomainError("income", "beyond the duties line's domain (negative tax debt)")
    return model.rights(x), model.duties(x)


def solve_equilibrium(model: LinearLawModel) -> EquilibriumOutcome:
    r, d = model.rights, model.duties
    dslope = r.slope - d.slope
    dint = d.intercept.to_fraction() - r.intercept.to_fraction()
    if dslope == 0:
        return AllPointsCoincide() if dint == 0 else NoEquilibrium()
    income = dint / dslope
    point = EquilibriumPoint(income=income, responsibility=r(income))
    if income < 0:
        return OutsideDomain(point)
    return point


__all__ = [
    "AllPointsCoincide",
    "DomainError",
    "EquilibriumOutcome",
    "EquilibriumPoint",
    "LinearFn",
    "LinearLawModel",
    "NoEquilibrium",
    "OutsideDomain",
    "evaluate",
    "model_from_tax_params",
    "solve_equilibrium",
]
