"""Exact number tower and the closed-form combinatorial quantities.

Rationals are `fractions.Fraction` (always canonical, zero is 0/1). `QPi2`
extends them to numbers a + b*pi^2, which is all that half-integer trigamma
values need.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Union
import logging
import math
import threading

import numpy as np

from .models.reports import QuadratureReport
from .signals import (
    DegreeOverflowError,
    DomainError,
    ExactArithmeticError,
)

logger = logging.getLogger(__name__)

BigRat = Fraction
Rational = Union[int, Fraction]


def rat_op(kind: Literal["add", "sub", "mul", "div"], a: Rational, b: Rational) -> BigRat:
    a, b = Fraction(a), Fraction(b)

    if kind == "add":
        return a + b
    elif kind == "sub":
        return a - b
    elif kind == "mul":
        return a * b
    elif kind == "div":
        if b == 0:
            raise ExactArithmeticError(f"division by zero: {a} / {b}", a, b)
        return a / b

    raise DomainError(f"unknown rational operation {kind!r}")


@dataclass(frozen=True)
class QPi2:
    """The number r + p*pi^2 with rational r and p."""

    r: Fraction = Fraction(0)
    p: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "p", Fraction(self.p))

    @classmethod
    def lift(cls, value: Union["QPi2", Rational]) -> "QPi2":
        if isinstance(value, QPi2):
            return value
        return cls(Fraction(value), Fraction(0))

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __add__(self, other: Union["QPi2", Rational]) -> "QPi2":
        other = QPi2.lift(other)
        return QPi2(self.r + other.r, self.p + other.p)

    __radd__ = __add__

    def __sub__(self, other: Union["QPi2", Rational]) -> "QPi2":
        other = QPi2.lift(other)
        return QPi2(self.r - other.r, self.p - other.p)

    def __rsub__(self, other: Rational) -> "QPi2":
        return QPi2.lift(other) - self

    def __neg__(self) -> "QPi2":
        return QPi2(-self.r, -self.p)

    def __mul__(self, other: Union["QPi2", Rational]) -> "QPi2":
        other = QPi2.lift(other)

        if self.p != 0 and other.p != 0:
            raise DegreeOverflowError(f"degree overflow: ({self}) * ({other}) needs a pi^4 term", self, other)

        return QPi2(self.r * other.r, self.r * other.p + self.p * other.r)

    __rmul__ = __mul__

    def scale(self, c: Rational) -> "QPi2":
        c = Fraction(c)
        return QPi2(self.r * c, self.p * c)

    def __str__(self) -> str:
        return f"{self.r} + {self.p}*pi^2"


def qpi2_op(kind: Literal["add", "sub", "mul", "scale"], a: QPi2, b: Union[QPi2, Rational]) -> QPi2:
    if kind == "add":
        return a + b
    elif kind == "sub":
        return a - b
    elif kind == "mul":
        return a * b
    elif kind == "scale":
        if isinstance(b, QPi2):
            if not b.is_rational:
                raise DomainError(f"scale factor must be rational, got {b}")
            b = b.r
        return a.scale(b)

    raise DomainError(f"unknown pi^2 operation {kind!r}")


# Growable memo tables; growth is serialized, reads of filled slots need no lock.
_table_lock = threading.Lock()
_factorials: list[int] = [1]
_odd_square_sums: list[Fraction] = [Fraction(1)]
_central_binomials: dict[int, int] = {}


def factorial(n: int) -> int:
    if n < 0:
        raise DomainError(f"factorial of a negative integer: {n}")

    if n < len(_factorials):
        return _factorials[n]

    with _table_lock:
        while len(_factorials) <= n:
            _factorials.append(_factorials[-1] * len(_factorials))

    return _factorials[n]


def double_factorial(m: int) -> int:
    """m!! with (-1)!! = 0!! = 1."""
    if m < -1:
        raise DomainError(f"double factorial undefined for {m}")

    if m <= 0:
        return 1

    half = m // 2
    if m % 2 == 0:
        return (1 << half) * factorial(half)

    # (2j+1)!! = (2j+1)! / (2^j j!)
    return factorial(m) // ((1 << half) * factorial(half))


def binomial(n: int, k: int) -> int:
    if n < 0:
        raise DomainError(f"binomial needs a nonnegative upper index, got {n}")

    if k < 0 or k > n:
        return 0

    return factorial(n) // (factorial(k) * factorial(n - k))


def central_binomial(n: int) -> int:
    if n < 0:
        raise DomainError(f"central binomial of a negative integer: {n}")

    value = _central_binomials.get(n)
    if value is None:
        value = binomial(2 * n, n)
        with _table_lock:
            _central_binomials[n] = value

    return value


def catalan(n: int) -> int:
    quotient, remainder = divmod(central_binomial(n), n + 1)

    if remainder:
        raise ExactArithmeticError(f"binom({2 * n},{n}) is not divisible by {n + 1}", central_binomial(n), n + 1)

    return quotient


def odd_square_partial_sum(n: int) -> Fraction:
    """Sum of 1/(2k+1)^2 for k = 0..n."""
    if n < 0:
        raise DomainError(f"odd-square partial sum needs n >= 0, got {n}")

    if n < len(_odd_square_sums):
        return _odd_square_sums[n]

    with _table_lock:
        while len(_odd_square_sums) <= n:
            k = len(_odd_square_sums)
            _odd_square_sums.append(_odd_square_sums[-1] + Fraction(1, (2 * k + 1) ** 2))

    return _odd_square_sums[n]


def trigamma_half_integer(m: int) -> QPi2:
    """psi'(m + 1/2) = pi^2/2 - 4 * sum_{k=1}^{m} 1/(2k-1)^2."""
    if m < 0:
        raise DomainError(f"trigamma_half_integer needs m >= 0, got {m}")

    correction = odd_square_partial_sum(m - 1) if m > 0 else Fraction(0)
    return QPi2(-4 * correction, Fraction(1, 2))


def warm_tables(n_max: int) -> None:
    """Fill the memo tables far enough for identity sweeps up to `n_max`."""
    factorial(2 * n_max + 6)
    odd_square_partial_sum(n_max + 2)

    for n in range(n_max + 3):
        central_binomial(n)

    logger.info(f"Memo tables warmed up to n={n_max}")


def _midpoint(integrand, lo: float, hi: float, steps: int) -> float:
    h = (hi - lo) / steps
    nodes = lo + h * (np.arange(steps, dtype=np.float64) + 0.5)
    return h * float(np.sum(integrand(nodes)))


def central_binomial_integral_report(n: int, steps: int, cutoff: float) -> QuadratureReport:
    """Quadrature of (1/pi) * int_0^inf (1/4 + s^2)^-(n+1) ds.

    The head [0, cutoff] and the tail (after s = 1/t, on [0, 1/cutoff]) are
    both done with the midpoint rule. `tail_bound` is the analytic bound on
    the tail: cutoff^-(2n+1)/(2n+1) when cutoff >= 1, since the integrand is
    at most s^-(2n+2) there.
    """
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    if steps < 16:
        raise DomainError(f"quadrature needs at least 16 steps, got {steps}")
    if cutoff <= 0:
        raise DomainError(f"cutoff must be positive, got {cutoff}")

    power = n + 1

    head = _midpoint(lambda s: (0.25 + s * s) ** (-power), 0.0, float(cutoff), steps)
    tail = _midpoint(lambda t: t ** (2 * n) * (1.0 + 0.25 * t * t) ** (-power), 0.0, 1.0 / cutoff, steps)

    if cutoff >= 1:
        tail_bound = cutoff ** (-(2 * n + 1)) / (2 * n + 1)
    else:
        tail_bound = (1.0 - cutoff) * 4.0 ** power + 1.0 / (2 * n + 1)

    estimate = (head + tail) / math.pi
    exact = central_binomial(n)

    return QuadratureReport(
        n=n,
        steps=steps,
        cutoff=cutoff,
        head=head / math.pi,
        tail_estimate=tail / math.pi,
        tail_bound=tail_bound / math.pi,
        estimate=estimate,
        exact=exact,
        relative_error=abs(estimate - exact) / exact,
    )


def central_binomial_integral_estimate(n: int, steps: int, cutoff: float) -> float:
    return central_binomial_integral_report(n, steps, cutoff).estimate
