"""Exact checkers for the central binomial identities and range sweeps over n.

Displays that the engine refutes exist in two forms: `printed` reproduces
the display verbatim, `corrected` is the numerically forced variant. Both
are kept side by side; nothing is silently substituted.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal, NamedTuple, Optional, Union
import logging
import time

from .catalog import (
    arcsin_series,
    arcsin_squared_series,
    inv_sqrt_series,
    lehmer_series,
    raw_display_products,
)
from .exactnum import (
    QPi2,
    binomial,
    catalan,
    central_binomial,
    double_factorial,
    factorial,
    odd_square_partial_sum,
    trigamma_half_integer,
    warm_tables,
)
from .models.reports import FailureRecord, VerifyReport
from .powerseries import ts_derive, ts_mul, ts_scale_arg, ts_shift
from .signals import ArgumentError, InternalConsistencyError
from .utils import format_exact

logger = logging.getLogger(__name__)

Form = Literal["printed", "corrected"]
Exact = Union[int, Fraction, QPi2]
Evaluator = Callable[[int], tuple[Exact, Exact]]

PI2 = QPi2(0, 1)


def _ratio(k: int, n: int) -> Fraction:
    """binom(2k,k) / binom(2(n-k+1), n-k+1)"""
    return Fraction(central_binomial(k), central_binomial(n - k + 1))


def _check_variant(variant: int, allowed: tuple[int, ...] = (1, 2, 3)) -> None:
    if variant not in allowed:
        raise ArgumentError(f"variant must be one of {allowed}, got {variant}")


def _check_form(form: str) -> None:
    if form not in ("printed", "corrected"):
        raise ArgumentError(f"form must be 'printed' or 'corrected', got {form!r}")


def eval_theorem21(n: int) -> tuple[Fraction, Fraction]:
    lhs = sum(
        (Fraction(central_binomial(k) * central_binomial(n - k), 2 * k + 1) for k in range(n + 1)),
        Fraction(0),
    )
    rhs = Fraction(16 ** n, (2 * n + 1) * central_binomial(n))
    return lhs, rhs


def trigamma_bracket(n: int) -> QPi2:
    """pi^2 - 2 psi'(n + 3/2); its pi^2 part must vanish."""
    bracket = PI2 - trigamma_half_integer(n + 1).scale(2)

    if not bracket.is_rational:
        raise InternalConsistencyError(f"pi^2 - 2 psi'({n} + 3/2) left a pi^2 residue: {bracket}")

    return bracket


def eval_ratio_identity(variant: int, n: int) -> tuple[Fraction, QPi2]:
    _check_variant(variant)

    if variant == 1:
        weight = lambda k: Fraction(1, 16 ** k * (2 * k + 1) * (n - k + 1) ** 2)
        coefficient = Fraction(3 * double_factorial(2 * n + 1) ** 2, 2 ** (2 * n + 3) * factorial(2 * n + 3))
    elif variant == 2:
        weight = lambda k: Fraction(1, 16 ** k * (n - k + 1) ** 2)
        coefficient = Fraction(double_factorial(2 * n + 1) ** 2, 2 ** (2 * n + 3) * factorial(2 * n + 2))
    else:
        weight = lambda k: Fraction(1, 16 ** k * (2 * k + 1) * (n - k + 1))
        coefficient = Fraction(double_factorial(2 * n + 1) ** 2, 2 ** (2 * n + 3) * factorial(2 * n + 2))

    lhs = sum((weight(k) * _ratio(k, n) for k in range(n + 1)), Fraction(0))
    rhs = trigamma_bracket(n).scale(coefficient)
    return lhs, rhs


def eval_raw_cauchy(variant: int, form: Form, n: int) -> tuple[Fraction, Fraction]:
    """Raw displays: factorial/odd-sum side against the exponent-weighted ratio sum.

    Only variant 1 differs between forms: printed exponent 2(n-2k)-1,
    corrected 2(n-2k)+1. Variants 2 and 3 are correct as printed.
    """
    _check_variant(variant)
    _check_form(form)

    odd_sum = odd_square_partial_sum(n)
    df2 = double_factorial(2 * n + 1) ** 2

    if variant == 1:
        lhs = 6 * df2 * odd_sum / factorial(2 * n + 3)
        shift = -1 if form == "printed" else 1
        term = lambda k: Fraction(2) ** (2 * (n - 2 * k) + shift) / ((2 * k + 1) * (n - k + 1) ** 2)
    elif variant == 2:
        lhs = 2 * df2 * odd_sum / factorial(2 * n + 2)
        term = lambda k: Fraction(2) ** (2 * (n - 2 * k) + 1) / (n - k + 1) ** 2
    else:
        lhs = 2 * df2 * odd_sum / factorial(2 * n + 2)
        term = lambda k: Fraction(2) ** (2 * (n - 2 * k) + 1) / ((2 * k + 1) * (n - k + 1))

    rhs = sum((term(k) * _ratio(k, n) for k in range(n + 1)), Fraction(0))
    return lhs, rhs


ConvolutionId = Literal["monthly_final", "monthly", "alzer_nagy", "equivalence_step"]


def eval_convolution(identity: ConvolutionId, n: int) -> tuple[Fraction, Fraction]:
    if identity == "monthly_final":
        lhs = sum((Fraction(central_binomial(k) * central_binomial(n - k), k + 1) for k in range(n + 1)), Fraction(0))
        rhs = Fraction(binomial(2 * n + 1, n))
    elif identity == "monthly":
        lhs = sum((Fraction(central_binomial(k) * central_binomial(n - k + 1), k + 1) for k in range(n + 1)), Fraction(0))
        rhs = Fraction(2 * binomial(2 * n + 2, n))
    elif identity == "alzer_nagy":
        lhs = Fraction(sum(central_binomial(k) * catalan(n - k) for k in range(n + 1)))
        rhs = Fraction(central_binomial(n + 1), 2)
    elif identity == "equivalence_step":
        lhs = 2 * binomial(2 * n + 2, n) + Fraction(central_binomial(n + 1), n + 2)
        rhs = Fraction(binomial(2 * n + 3, n + 1))
    else:
        raise ArgumentError(f"unknown convolution identity {identity!r}")

    return lhs, rhs


def monthly_shift_equivalence(n: int) -> tuple[Fraction, Fraction]:
    """monthly_final's sum at n+1 against monthly's sum at n plus the k = n+1 term."""
    shifted, _ = eval_convolution("monthly_final", n + 1)
    base, _ = eval_convolution("monthly", n)
    return shifted, base + Fraction(central_binomial(n + 1), n + 2)


def eval_catalan_rewrite(index: int, form: Form, n: int) -> tuple[Fraction, Fraction]:
    """Catalan-number rewrites; 3-5 printed carry (n-k+2)/(k+1), corrected (k+1)/(n-k+2)."""
    _check_variant(index, (1, 2, 3, 4, 5))
    _check_form(form)

    if index in (1, 2) and form == "corrected":
        raise ArgumentError(f"catalan rewrite {index} has no corrected form")

    if index == 1:
        lhs = Fraction(sum((n - k + 1) * catalan(k) * catalan(n - k) for k in range(n + 1)))
        return lhs, Fraction(binomial(2 * n + 1, n))

    if index == 2:
        lhs = sum(
            (Fraction((k + 1) * (n - k + 1), 2 * k + 1) * catalan(k) * catalan(n - k) for k in range(n + 1)),
            Fraction(0),
        )
        return lhs, Fraction(16 ** n, (2 * n + 1) * (n + 1) * catalan(n))

    if form == "printed":
        factor = lambda k: Fraction(n - k + 2, k + 1)
    else:
        factor = lambda k: Fraction(k + 1, n - k + 2)

    if index == 3:
        weight = lambda k: Fraction(1, 16 ** k * (2 * k + 1) * (n - k + 1) ** 2)
        scale = Fraction(3 * double_factorial(2 * n + 1) ** 2, 4 ** n * factorial(2 * n + 3))
    elif index == 4:
        weight = lambda k: Fraction(1, 16 ** k * (n - k + 1) ** 2)
        scale = Fraction(double_factorial(2 * n + 1) ** 2, 4 ** n * factorial(2 * n + 2))
    else:
        weight = lambda k: Fraction(1, 16 ** k * (2 * k + 1) * (n - k + 1))
        scale = Fraction(double_factorial(2 * n + 1) ** 2, 4 ** n * factorial(2 * n + 2))

    lhs = sum(
        (factor(k) * weight(k) * Fraction(catalan(k), catalan(n - k + 1)) for k in range(n + 1)),
        Fraction(0),
    )
    return lhs, scale * odd_square_partial_sum(n)


class CoherenceRow(NamedTuple):
    raw_lhs_scaled: Fraction
    theorem_rhs: Fraction
    raw_rhs_scaled: Fraction
    theorem_lhs: Fraction


def substitution_coherence(variant: int, n: int) -> CoherenceRow:
    """Corrected raw display divided by 2^(2n+1) next to the trigamma statement."""
    raw_lhs, raw_rhs = eval_raw_cauchy(variant, "corrected", n)
    theorem_lhs, theorem_rhs = eval_ratio_identity(variant, n)
    scale = Fraction(1, 2 ** (2 * n + 1))

    return CoherenceRow(raw_lhs * scale, theorem_rhs.r, raw_rhs * scale, theorem_lhs)


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    form: Optional[Form]
    description: str
    evaluate: Evaluator

    @property
    def label(self) -> str:
        return self.id if self.form is None else f"{self.id}[{self.form}]"

    def lhs(self, n: int) -> QPi2:
        return QPi2.lift(self.evaluate(n)[0])

    def rhs(self, n: int) -> QPi2:
        return QPi2.lift(self.evaluate(n)[1])


def _registry() -> dict[tuple[str, Optional[str]], IdentitySpec]:
    specs = [
        IdentitySpec("thm2.1", None, "sum binom(2k,k) binom(2(n-k),n-k)/(2k+1) = 2^(4n)/((2n+1) binom(2n,n))", eval_theorem21),
        IdentitySpec("thm3.1a", None, "ratio sum with 1/((2k+1)(n-k+1)^2) against the trigamma bracket", lambda n: eval_ratio_identity(1, n)),
        IdentitySpec("thm3.1b", None, "ratio sum with 1/(n-k+1)^2 against the trigamma bracket", lambda n: eval_ratio_identity(2, n)),
        IdentitySpec("thm3.1c", None, "ratio sum with 1/((2k+1)(n-k+1)) against the trigamma bracket", lambda n: eval_ratio_identity(3, n)),
        IdentitySpec("monthly_final", None, "sum binom(2k,k) binom(2(n-k),n-k)/(k+1) = binom(2n+1,n)", lambda n: eval_convolution("monthly_final", n)),
        IdentitySpec("monthly", None, "sum binom(2k,k) binom(2(n-k+1),n-k+1)/(k+1) = 2 binom(2n+2,n)", lambda n: eval_convolution("monthly", n)),
        IdentitySpec("alzer_nagy", None, "sum B_k C_(n-k) = B_(n+1)/2", lambda n: eval_convolution("alzer_nagy", n)),
        IdentitySpec("equivalence_step", None, "2 binom(2n+2,n) + binom(2n+2,n+1)/(n+2) = binom(2n+3,n+1)", lambda n: eval_convolution("equivalence_step", n)),
    ]

    for variant in (1, 2, 3):
        for form in ("printed", "corrected"):
            specs.append(IdentitySpec(
                f"raw3.{variant}", form,
                f"raw Cauchy-product display {variant} ({form})",
                lambda n, v=variant, f=form: eval_raw_cauchy(v, f, n),
            ))

    for index in (1, 2, 3, 4, 5):
        forms = ("printed",) if index in (1, 2) else ("printed", "corrected")
        for form in forms:
            specs.append(IdentitySpec(
                f"catalan_rw{index}", form,
                f"Catalan-number rewrite {index} ({form})",
                lambda n, i=index, f=form: eval_catalan_rewrite(i, f, n),
            ))

    return {(spec.id, spec.form): spec for spec in specs}


IDENTITIES = _registry()


def identity_ids() -> list[str]:
    return list(dict.fromkeys(key[0] for key in IDENTITIES))


def forms_of(identity: str) -> list[Optional[str]]:
    return [form for (name, form) in IDENTITIES if name == identity]


def get_identity(identity: str, form: Optional[str] = None) -> IdentitySpec:
    forms = forms_of(identity)

    if not forms:
        raise ArgumentError(f"unknown identity id {identity!r}")

    if form is None:
        form = "printed" if "printed" in forms else None

    if form not in forms:
        raise ArgumentError(f"identity {identity!r} has no form {form!r}")

    return IDENTITIES[(identity, form)]


def _sweep_chunk(
    evaluate: Evaluator,
    lo: int,
    hi: int,
    keep_going: bool,
    catch: tuple[type[Exception], ...],
) -> tuple[Optional[FailureRecord], int]:
    first = None
    failures = 0

    for n in range(lo, hi + 1):
        try:
            lhs, rhs = evaluate(n)
        except catch as err:
            record = FailureRecord(n=n, lhs="", rhs="", error=str(err))
        else:
            if QPi2.lift(lhs) == QPi2.lift(rhs):
                continue
            record = FailureRecord(n=n, lhs=format_exact(lhs), rhs=format_exact(rhs))

        failures += 1
        if first is None:
            first = record
        if not keep_going:
            break

    return first, failures


def _chunks(n_lo: int, n_hi: int, jobs: int) -> list[tuple[int, int]]:
    total = n_hi - n_lo + 1
    size = -(-total // jobs)
    return [(lo, min(lo + size - 1, n_hi)) for lo in range(n_lo, n_hi + 1, size)]


def run_sweep(
    identity: str,
    form: Optional[str],
    evaluate: Evaluator,
    n_lo: int,
    n_hi: int,
    keep_going: bool = False,
    jobs: int = 1,
    catch: tuple[type[Exception], ...] = (),
) -> VerifyReport:
    """Evaluate every n in [n_lo, n_hi]; partitions merge so the smallest failing n wins."""
    if n_lo < 0 or n_lo > n_hi:
        raise ArgumentError(f"invalid range {n_lo}..{n_hi}")
    if jobs < 1:
        raise ArgumentError(f"jobs must be at least 1, got {jobs}")

    started = time.perf_counter()
    label = identity if form is None else f"{identity}[{form}]"
    logger.info(f"Sweeping {label} over n={n_lo}..{n_hi} with {jobs} job(s)")

    if jobs == 1:
        results = [_sweep_chunk(evaluate, n_lo, n_hi, keep_going, catch)]
    else:
        warm_tables(n_hi)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(
                lambda bounds: _sweep_chunk(evaluate, bounds[0], bounds[1], keep_going, catch),
                _chunks(n_lo, n_hi, jobs),
            ))

    failures = [first for first, _ in results if first is not None]
    first_failure = min(failures, key=lambda record: record.n) if failures else None
    total = n_hi - n_lo + 1

    if keep_going:
        checked = total
        fail_count = sum(count for _, count in results)
    else:
        checked = total if first_failure is None else first_failure.n - n_lo + 1
        fail_count = 0 if first_failure is None else 1

    report = VerifyReport(
        identity=identity,
        form=form,
        n_lo=n_lo,
        n_hi=n_hi,
        first_failure=first_failure,
        checked=checked,
        fail_count=fail_count,
        elapsed_ms=(time.perf_counter() - started) * 1000,
    )

    if report.passed:
        logger.info(f"{label}: pass over {checked} values in {report.elapsed_ms:.1f} ms")
    else:
        logger.warning(f"{label}: refuted at n={first_failure.n} (lhs={first_failure.lhs}, rhs={first_failure.rhs})")

    return report


def verify_range(
    spec: IdentitySpec,
    n_lo: int,
    n_hi: int,
    keep_going: bool = False,
    jobs: int = 1,
) -> VerifyReport:
    return run_sweep(spec.id, spec.form, spec.evaluate, n_lo, n_hi, keep_going=keep_going, jobs=jobs)


ERRATA_ENTRIES: list[tuple[str, str]] = [
    ("raw3.1", "printed"),
    ("raw3.1", "corrected"),
    ("raw3.2", "printed"),
    ("raw3.3", "printed"),
    ("catalan_rw1", "printed"),
    ("catalan_rw2", "printed"),
    ("catalan_rw3", "printed"),
    ("catalan_rw3", "corrected"),
    ("catalan_rw4", "printed"),
    ("catalan_rw4", "corrected"),
    ("catalan_rw5", "printed"),
    ("catalan_rw5", "corrected"),
]


def errata_suite(n_hi: int = 300, jobs: int = 1, keep_going: bool = False) -> list[VerifyReport]:
    """Printed displays against their forced corrections over 0..n_hi."""
    return [
        verify_range(get_identity(name, form), 0, n_hi, keep_going=keep_going, jobs=jobs)
        for name, form in ERRATA_ENTRIES
    ]


def coefficient_route_check(route: Literal["A", "B"], n_max: int) -> VerifyReport:
    """Compare the Cauchy product arcsin(2x)/(2x) * 1/sqrt(1-4x^2) with a closed form.

    Route A closes through (1/(8x)) d/dx [arcsin(2x)]^2 and the coefficient
    2^(4n) (n!)^2/(2n+1)!; route B through (1/(8x^2)) * lehmer(2x) and the
    coefficient 2^(4n+1)/((n+1) binom(2n+2,n+1)). Product, series chain and
    closed form must agree for every n <= n_max.
    """
    if route not in ("A", "B"):
        raise ArgumentError(f"route must be 'A' or 'B', got {route!r}")
    if n_max < 0:
        raise ArgumentError(f"n_max must be nonnegative, got {n_max}")

    started = time.perf_counter()
    order = 2 * n_max + 2

    half_arcsin_over_x = ts_shift(ts_scale_arg(arcsin_series(order), 2), -1) * Fraction(1, 2)
    product = ts_mul(half_arcsin_over_x, inv_sqrt_series(order - 1))

    if route == "A":
        chain = ts_shift(ts_derive(ts_scale_arg(arcsin_squared_series(order + 1), 2)), -1) * Fraction(1, 8)
        closed = lambda n: Fraction(16 ** n * factorial(n) ** 2, factorial(2 * n + 1))
    else:
        chain = ts_shift(ts_scale_arg(lehmer_series(order + 1), 2), -2) * Fraction(1, 8)
        closed = lambda n: Fraction(2 ** (4 * n + 1), (n + 1) * central_binomial(n + 1))

    def evaluate(n: int) -> tuple[Fraction, Fraction]:
        cauchy, expected = product[2 * n], closed(n)
        if cauchy == expected and chain[2 * n] != expected:
            return chain[2 * n], expected
        return cauchy, expected

    report = run_sweep(f"route_{route}", None, evaluate, 0, n_max)
    report.elapsed_ms = (time.perf_counter() - started) * 1000
    return report


def raw_series_check(variant: int, n_max: int) -> VerifyReport:
    """Series products behind the raw displays against the corrected raw sums."""
    _check_variant(variant)
    if n_max < 0:
        raise ArgumentError(f"n_max must be nonnegative, got {n_max}")

    product = raw_display_products(2 * n_max + 4)[variant]
    offset = 3 if variant == 1 else 2

    def evaluate(n: int) -> tuple[Fraction, Fraction]:
        _, rhs = eval_raw_cauchy(variant, "corrected", n)
        return product[2 * n + offset], rhs

    return run_sweep(f"raw3.{variant}-series", None, evaluate, 0, n_max)
