"""Continued-fraction detection of rational frequency ratios."""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class RationalMatch:
    """Best rational approximation numerator/denominator with its residual."""

    numerator: int
    denominator: int
    residual: float


def best_rational(x, tol=1e-9, max_denominator=64):
    """Smallest-denominator convergent of x within tol, or None.

    Walks the continued-fraction convergents of x >= 0 and returns the first
    one with |x - p/q| < tol and q <= max_denominator.  Convergents are the
    best rational approximations, so the first hit has the smallest
    admissible denominator.
    """
    if x < 0.0 or not math.isfinite(x):
        raise ValueError("ratio must be finite and non-negative")
    if tol <= 0.0 or max_denominator < 1:
        raise ValueError("tol must be positive and max_denominator >= 1")

    h_prev, h = 0, 1  # numerators of convergents (n-2, n-1)
    k_prev, k = 1, 0  # denominators
    rem = x
    for _ in range(64):
        a = math.floor(rem)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if k > max_denominator:
            return None
        residual = abs(x - h / k)
        if residual < tol:
            return RationalMatch(h, k, residual)
        frac = rem - a
        if frac < 1e-15:
            return None
        rem = 1.0 / frac
    return None
