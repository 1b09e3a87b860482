"""Truncated formal power series over the rationals.

A `TruncSeries` of order N stores c_0..c_{N-1} and is known modulo x^N.
Binary operations return the smaller operand order; `ts_derive`,
`ts_integrate` and `ts_shift` change the order as their docstrings say.
Reading a coefficient at or beyond the order is an error, never zero.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union
import logging

from .signals import NotDivisibleError, SeriesError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class TruncSeries:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise SeriesError("a truncated series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, j: int) -> Fraction:
        return ts_coeff(self, j)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        return ts_add(self, other)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return ts_sub(self, other)

    def __neg__(self) -> "TruncSeries":
        return ts_scale(self, -1)

    def __mul__(self, other: Union["TruncSeries", Scalar]) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return ts_mul(self, other)
        return ts_scale(self, other)

    def __rmul__(self, other: Scalar) -> "TruncSeries":
        return ts_scale(self, other)

    def truncate(self, order: int) -> "TruncSeries":
        if order < 1 or order > self.order:
            raise SeriesError(f"cannot truncate a series of order {self.order} to order {order}")
        return TruncSeries(self.coeffs[:order])

    def __str__(self) -> str:
        terms = []

        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if j == 0:
                terms.append(f"{c}")
            elif j == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{j}")

        body = " + ".join(terms) if terms else "0"
        return f"{body} (mod x^{self.order})"


def ts_from_coeffs(values: Iterable[Scalar]) -> TruncSeries:
    return TruncSeries(tuple(values))


def ts_constant(value: Scalar, order: int) -> TruncSeries:
    if order < 1:
        raise SeriesError(f"a constant series needs order >= 1, got {order}")
    return TruncSeries((Fraction(value),) + (Fraction(0),) * (order - 1))


def ts_coeff(s: TruncSeries, j: int) -> Fraction:
    if j < 0 or j >= s.order:
        raise SeriesError(f"coefficient x^{j} is unknown for a series mod x^{s.order}")
    return s.coeffs[j]


def ts_add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    order = min(a.order, b.order)
    return TruncSeries(tuple(a.coeffs[j] + b.coeffs[j] for j in range(order)))


def ts_sub(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    order = min(a.order, b.order)
    return TruncSeries(tuple(a.coeffs[j] - b.coeffs[j] for j in range(order)))


def ts_scale(s: TruncSeries, c: Scalar) -> TruncSeries:
    c = Fraction(c)
    return TruncSeries(tuple(c * v for v in s.coeffs))


def ts_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Cauchy product c_n = sum_{k=0}^{n} a_k b_{n-k}, order min(a.order, b.order)."""
    order = min(a.order, b.order)
    out = [Fraction(0)] * order

    for i in range(order):
        ai = a.coeffs[i]
        if ai == 0:
            continue
        for j in range(order - i):
            bj = b.coeffs[j]
            if bj != 0:
                out[i + j] += ai * bj

    return TruncSeries(tuple(out))


def ts_derive(s: TruncSeries) -> TruncSeries:
    """d/dx, order decreases by one."""
    if s.order < 2:
        raise SeriesError("derivative of a series mod x is unknown")
    return TruncSeries(tuple((j + 1) * s.coeffs[j + 1] for j in range(s.order - 1)))


def ts_integrate(s: TruncSeries) -> TruncSeries:
    """Antiderivative with zero constant term, order increases by one."""
    return TruncSeries((Fraction(0),) + tuple(c / (j + 1) for j, c in enumerate(s.coeffs)))


def ts_scale_arg(s: TruncSeries, c: Scalar) -> TruncSeries:
    """s(c*x): coefficient j times c^j, order preserved."""
    c = Fraction(c)
    out = []
    power = Fraction(1)

    for v in s.coeffs:
        out.append(v * power)
        power *= c

    return TruncSeries(tuple(out))


def ts_shift(s: TruncSeries, k: int) -> TruncSeries:
    """Multiply by x^k; the order changes by k."""
    if k >= 0:
        return TruncSeries((Fraction(0),) * k + s.coeffs)

    drop = -k
    if drop >= s.order:
        raise SeriesError(f"dividing a series mod x^{s.order} by x^{drop} leaves nothing known")

    for j in range(drop):
        if s.coeffs[j] != 0:
            raise NotDivisibleError(f"not divisible by x^{drop}: coefficient of x^{j} is {s.coeffs[j]}")

    return TruncSeries(s.coeffs[drop:])


def ts_inv(s: TruncSeries) -> TruncSeries:
    s0 = s.coeffs[0]
    if s0 == 0:
        raise SeriesError("series with zero constant term has no reciprocal")

    inv_s0 = 1 / s0
    t = [inv_s0]

    for n in range(1, s.order):
        acc = Fraction(0)
        for j in range(1, n + 1):
            sj = s.coeffs[j]
            if sj != 0:
                acc += sj * t[n - j]
        t.append(-inv_s0 * acc)

    return TruncSeries(tuple(t))


def ts_sqrt(s: TruncSeries) -> TruncSeries:
    if s.coeffs[0] != 1:
        raise SeriesError(f"square root needs constant term 1, got {s.coeffs[0]}")

    t = [Fraction(1)]

    for n in range(1, s.order):
        acc = sum((t[j] * t[n - j] for j in range(1, n)), Fraction(0))
        t.append((s.coeffs[n] - acc) / 2)

    return TruncSeries(tuple(t))


def first_mismatch(a: TruncSeries, b: TruncSeries) -> Optional[tuple[int, Fraction, Fraction]]:
    """First power where `a` and `b` differ on their common prefix."""
    for j in range(min(a.order, b.order)):
        if a.coeffs[j] != b.coeffs[j]:
            return j, a.coeffs[j], b.coeffs[j]
    return None
