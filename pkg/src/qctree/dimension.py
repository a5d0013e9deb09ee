"""Moran exponents of the finite trees and dimension bounds for the infinite one."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import DomainError, GeometricTail, Weight


def psi(m: int, a: Weight, t: float) -> float:
    """Sum of a(i)^t over i = 1..m in binary64."""
    if t <= 0:
        raise DomainError("t must be positive")
    return math.fsum(float(a(i)) ** t for i in range(1, m + 1))


@dataclass(frozen=True)
class MoranSolution:
    exponent: float
    residual: float
    bracket: tuple[float, float]
    iterations: int


def moran_dimension(m: int, a: Weight, tol: float = 1e-12) -> MoranSolution:
    """Solve psi(s) = 1 by bisection on [1, 1 + log2 m]."""
    if m < 2:
        raise DomainError("m must be >= 2")
    lo, hi = 1.0, 1.0 + math.log(m) / math.log(2)
    if psi(m, a, lo) < 1 or psi(m, a, hi) > 1:
        raise DomainError("psi does not straddle 1 on the search bracket")
    it = 0
    while it < 64 and hi - lo > 0:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if psi(m, a, mid) >= 1:
            lo = mid
        else:
            hi = mid
        it += 1
    # pick the endpoint with the smaller residual
    s = min((lo, hi), key=lambda t: abs(psi(m, a, t) - 1))
    residual = abs(psi(m, a, s) - 1)
    if residual > tol:
        raise DomainError(f"bisection stalled with residual {residual:.3e}")
    return MoranSolution(s, residual, (lo, hi), it)


def infinite_psi_bound(a: Weight, s: float) -> tuple[float, float]:
    """Partial sum over the explicit values and a closed-form tail bound.

    Only geometric tails a(j) = c r^j are boundable: their s-th powers sum to
    c^s r^(s k) / (1 - r^s) from index k on.
    """
    if s <= 0:
        raise DomainError("s must be positive")
    k = len(a.values)
    partial = math.fsum(float(v) ** s for v in a.values)
    if not a.infinite:
        return partial, 0.0
    if not isinstance(a.tail, GeometricTail):
        raise DomainError("tail rule is not geometric; no certified tail bound")
    c, r = float(a.tail.coeff), float(a.tail.ratio)
    rs = r**s
    tail = c**s * r ** (s * (k + 1)) / (1 - rs)
    return partial, tail


def dimension_bound_infinity(a: Weight, s: float, margin: float = 1e-12) -> bool:
    """True iff sum_j a(j)^s < 1, certified with a small floating-point margin.

    For a finite weight this reduces to psi(m, a, s) < 1.
    """
    partial, tail = infinite_psi_bound(a, s)
    return partial + tail < 1 - margin


def halving_weight(cap: int = 16) -> Weight:
    """a(1) = 1/2 and a(j) = 2^(1-j) for j >= 2."""
    return Weight((Fraction(1, 2), Fraction(1, 2)), GeometricTail(Fraction(2), Fraction(1, 2)), cap)
