"""Neron-Tate heights on Jacobians of odd-degree hyperelliptic curves over Q."""

import json

from ._core import (
    FactorizationBudgetExceeded,
    HyperheightError,
    NumericalDegeneracy,
    PrecisionError,
    ReductionDataRequired,
    ValidationError,
    height_json,
    pairing,
    regulator,
    run,
    theta,
)


def _coeffs(curve):
    if isinstance(curve, str):
        return curve
    return ",".join(str(c) for c in curve)


def height(curve, divisor, prec=40, seed=0, reduction=()):
    """Height breakdown as a dict; exact rationals and reals are strings.

    curve: coefficients of f, constant term first (list or "a0,a1,...").
    divisor: "x,y", "(x,y)+(x,y)" or Mumford "[a];[b]".
    """
    return json.loads(height_json(_coeffs(curve), divisor, prec, seed, list(reduction)))


def height_value(curve, divisor, prec=40, seed=0, reduction=()):
    return float(height(curve, divisor, prec, seed, reduction)["total_height"])


__all__ = [
    "FactorizationBudgetExceeded",
    "HyperheightError",
    "NumericalDegeneracy",
    "PrecisionError",
    "ReductionDataRequired",
    "ValidationError",
    "height",
    "height_value",
    "pairing",
    "regulator",
    "run",
    "theta",
]
