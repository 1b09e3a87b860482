"""Named series of the arcsine expansions and their series-level consistency suite.

Every constructor evaluates its own closed-form coefficient formula; no
series here is derived from another one, so the consistency checks compare
independently built sides.
"""
from fractions import Fraction
from typing import Callable
import logging
import time

from .exactnum import (
    central_binomial,
    double_factorial,
    factorial,
    odd_square_partial_sum,
)
from .models.reports import FailureRecord, VerifyReport
from .powerseries import (
    TruncSeries,
    first_mismatch,
    ts_derive,
    ts_from_coeffs,
    ts_inv,
    ts_mul,
    ts_scale_arg,
    ts_shift,
    ts_sqrt,
)
from .signals import ArgumentError, DomainError

logger = logging.getLogger(__name__)


def _require_order(name: str, order: int, minimum: int) -> None:
    if order < minimum:
        raise DomainError(f"{name} needs order >= {minimum}, got {order}")


def _from_terms(order: int, terms: Callable[[int], tuple[int, Fraction]], count: int) -> TruncSeries:
    coeffs = [Fraction(0)] * order

    for index in range(count):
        power, value = terms(index)
        if power >= order:
            break
        coeffs[power] = value

    return ts_from_coeffs(coeffs)


def arcsin_series(order: int) -> TruncSeries:
    """sum binom(2l,l) x^(2l+1) / (4^l (2l+1))"""
    _require_order("arcsin_series", order, 2)
    return _from_terms(
        order,
        lambda l: (2 * l + 1, Fraction(central_binomial(l), 4 ** l * (2 * l + 1))),
        order,
    )


def arcsin_squared_series(order: int) -> TruncSeries:
    """(1/2) sum_{l>=1} (2x)^(2l) / (l^2 binom(2l,l))"""
    _require_order("arcsin_squared_series", order, 3)
    return _from_terms(
        order,
        lambda i: (2 * (i + 1), Fraction(4 ** (i + 1), 2 * (i + 1) ** 2 * central_binomial(i + 1))),
        order,
    )


def arcsin_cubed_series(order: int) -> TruncSeries:
    """3! sum [(2l+1)!!]^2 S(l) x^(2l+3) / (2l+3)!, S the odd-square partial sum"""
    _require_order("arcsin_cubed_series", order, 4)
    return _from_terms(
        order,
        lambda l: (
            2 * l + 3,
            6 * double_factorial(2 * l + 1) ** 2 * odd_square_partial_sum(l) / factorial(2 * l + 3),
        ),
        order,
    )


def inv_sqrt_series(order: int) -> TruncSeries:
    """1/sqrt(1-4x^2) = sum binom(2k,k) x^(2k)"""
    _require_order("inv_sqrt_series", order, 1)
    return _from_terms(order, lambda k: (2 * k, Fraction(central_binomial(k))), order)


def rescale_inv_sqrt(s: TruncSeries, to_unit: bool = True) -> TruncSeries:
    """Switch between the 1/sqrt(1-4x^2) and 1/sqrt(1-x^2) normalizations.

    This is the only place the two are related: x -> x/2 when `to_unit`,
    x -> 2x otherwise.
    """
    return ts_scale_arg(s, Fraction(1, 2) if to_unit else 2)


def lehmer_series(order: int) -> TruncSeries:
    """2x arcsin(x) / sqrt(1-x^2) = sum_{l>=1} (2x)^(2l) / (l binom(2l,l))"""
    _require_order("lehmer_series", order, 3)
    return _from_terms(
        order,
        lambda i: (2 * (i + 1), Fraction(4 ** (i + 1), (i + 1) * central_binomial(i + 1))),
        order,
    )


def arcsin_sq_over_sqrt_series(order: int) -> TruncSeries:
    """arcsin(x)^2 / sqrt(1-x^2) = 2! sum [(2n+1)!!]^2 S(n) x^(2n+2) / (2n+2)!"""
    _require_order("arcsin_sq_over_sqrt_series", order, 3)
    return _from_terms(
        order,
        lambda n: (
            2 * n + 2,
            2 * double_factorial(2 * n + 1) ** 2 * odd_square_partial_sum(n) / factorial(2 * n + 2),
        ),
        order,
    )


SERIES: dict[str, Callable[[int], TruncSeries]] = {
    "arcsin": arcsin_series,
    "arcsin_sq": arcsin_squared_series,
    "arcsin_cubed": arcsin_cubed_series,
    "inv_sqrt": inv_sqrt_series,
    "lehmer": lehmer_series,
    "arcsin_sq_over_sqrt": arcsin_sq_over_sqrt_series,
}


def build_series(name: str, order: int) -> TruncSeries:
    if name not in SERIES:
        raise ArgumentError(f"unknown series {name!r}, expected one of {', '.join(SERIES)}")

    logger.info(f"Building series {name} mod x^{order}")
    return SERIES[name](order)


def one_minus_x_squared(order: int) -> TruncSeries:
    coeffs = [Fraction(0)] * order
    coeffs[0] = Fraction(1)
    if order > 2:
        coeffs[2] = Fraction(-1)
    return ts_from_coeffs(coeffs)


def unit_inv_sqrt(order: int) -> TruncSeries:
    """1/sqrt(1-x^2) via the series square root and reciprocal."""
    return ts_inv(ts_sqrt(one_minus_x_squared(order)))


def build_catalog(order: int) -> dict[str, TruncSeries]:
    return {name: constructor(order) for name, constructor in SERIES.items()}


def _compare(label: str, lhs: TruncSeries, rhs: TruncSeries, started: float) -> VerifyReport:
    common = min(lhs.order, rhs.order)
    mismatch = first_mismatch(lhs, rhs)
    failure = None

    if mismatch is not None:
        power, left, right = mismatch
        failure = FailureRecord(n=power, lhs=str(left), rhs=str(right))
        logger.warning(f"Consistency check {label} differs at x^{power}: {left} != {right}")

    return VerifyReport(
        identity=label,
        n_lo=0,
        n_hi=common - 1,
        first_failure=failure,
        checked=common if failure is None else failure.n + 1,
        fail_count=0 if failure is None else 1,
        elapsed_ms=(time.perf_counter() - started) * 1000,
    )


def check_consistency(catalog: dict[str, TruncSeries]) -> list[VerifyReport]:
    """Checks (a)-(f) on an already built catalog, comparing over common prefixes."""
    arcsin = catalog["arcsin"]
    arcsin_sq = catalog["arcsin_sq"]
    arcsin_cubed = catalog["arcsin_cubed"]
    lehmer = catalog["lehmer"]
    sq_over_sqrt = catalog["arcsin_sq_over_sqrt"]
    order = arcsin.order

    checks: list[tuple[str, Callable[[], tuple[TruncSeries, TruncSeries]]]] = [
        ("consistency(a)", lambda: (ts_mul(arcsin, arcsin), arcsin_sq)),
        ("consistency(b)", lambda: (ts_mul(arcsin_sq, arcsin), arcsin_cubed)),
        ("consistency(c)", lambda: (ts_derive(arcsin), unit_inv_sqrt(order - 1))),
        ("consistency(d)", lambda: (ts_shift(lehmer, -1), 2 * ts_mul(arcsin, unit_inv_sqrt(order)))),
        ("consistency(e)", lambda: (ts_derive(arcsin_cubed), 3 * sq_over_sqrt)),
        ("consistency(f)", lambda: (ts_shift(ts_derive(arcsin_sq), 1), lehmer)),
    ]

    reports = []
    for label, sides in checks:
        started = time.perf_counter()
        lhs, rhs = sides()
        reports.append(_compare(label, lhs, rhs, started))

    return reports


def catalog_consistency(order: int) -> list[VerifyReport]:
    _require_order("catalog_consistency", order, 8)

    reports = check_consistency(build_catalog(order))
    failed = [r.identity for r in reports if not r.passed]
    logger.info(f"Catalog consistency mod x^{order}: {'all passed' if not failed else 'failed ' + ', '.join(failed)}")

    return reports


def raw_display_products(order: int) -> dict[int, TruncSeries]:
    """The three products whose coefficients give the raw ratio displays.

    1: arcsin * arcsin^2 (coefficient of x^(2n+3)),
    2: arcsin^2 * 1/sqrt(1-x^2) and 3: arcsin * arcsin/sqrt(1-x^2)
    (coefficient of x^(2n+2)). Each factor comes from its own expansion.
    """
    _require_order("raw_display_products", order, 4)

    arcsin = arcsin_series(order)
    arcsin_sq = arcsin_squared_series(order)
    inv_sqrt = rescale_inv_sqrt(inv_sqrt_series(order))
    arcsin_over_sqrt = ts_shift(lehmer_series(order + 1), -1) * Fraction(1, 2)

    return {
        1: ts_mul(arcsin, arcsin_sq),
        2: ts_mul(arcsin_sq, inv_sqrt),
        3: ts_mul(arcsin, arcsin_over_sqrt),
    }
