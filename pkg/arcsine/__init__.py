from .exactnum import (
    BigRat,
    QPi2,
    rat_op,
    qpi2_op,
    factorial,
    double_factorial,
    binomial,
    central_binomial,
    catalan,
    odd_square_partial_sum,
    trigamma_half_integer,
    central_binomial_integral_estimate,
)
from .powerseries import TruncSeries
from .catalog import catalog_consistency
from .identities import verify_range, get_identity, coefficient_route_check
from .dsl import parse, render, evaluate, verify_ast
from .commands import execute_command
from . import models

__all__ = [
    "BigRat",
    "QPi2",
    "rat_op",
    "qpi2_op",
    "factorial",
    "double_factorial",
    "binomial",
    "central_binomial",
    "catalan",
    "odd_square_partial_sum",
    "trigamma_half_integer",
    "central_binomial_integral_estimate",
    "TruncSeries",
    "catalog_consistency",
    "verify_range",
    "get_identity",
    "coefficient_route_check",
    "parse",
    "render",
    "evaluate",
    "verify_ast",
    "execute_command",
    "models"
]
