"""Exact distances between eventually periodic points, and chain lengths.

The exact solver follows one letter at a time toward [1^inf] or [2^inf]. Each
step is affine, ``X = A * X' + B``, and a periodic tail eventually revisits a
(code, target) state, which closes a one-unknown linear equation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import HALF, DomainError, PointCode, Weight, canonicalize, delta, is_canonical
from .graphs import arc_sum


def _step(letter: int, target: int, a: Weight) -> tuple[Fraction, Fraction, int]:
    """Coefficients (A, B, next target) of one recurrence step."""
    if target == 1:
        if letter == 1:
            return a(1), Fraction(0), 1
        return a(letter), HALF, 1
    if letter == 2:
        return a(2), Fraction(0), 2
    if letter == 1:
        return a(1), HALF, 2
    return a(letter), HALF, 1


def _boundary(x: PointCode, target: int, a: Weight) -> Fraction:
    index: dict[tuple[PointCode, int], int] = {}
    coef: list[Fraction] = []
    const: list[Fraction] = []
    state = (x, target)
    while state not in index:
        index[state] = len(coef)
        z, t = state
        A, B, nt = _step(z.letter(0), t, a)
        coef.append(A)
        const.append(B)
        state = (z.shift(), nt)
    r = index[state]
    # fold the cycle r..end into X_r = P X_r + Q
    P, Q = Fraction(1), Fraction(0)
    for i in range(len(coef) - 1, r - 1, -1):
        P, Q = coef[i] * P, coef[i] * Q + const[i]
    X = Q / (1 - P)
    for i in range(r - 1, -1, -1):
        X = coef[i] * X + const[i]
    return X


def boundary_distance(x: PointCode, target: int, a: Weight) -> Fraction:
    """Exact d(x, [c^inf]) for c in {1, 2}; x must be canonical."""
    if target not in (1, 2):
        raise DomainError(f"target must be 1 or 2, got {target}")
    if not is_canonical(x):
        raise DomainError(f"{x} is not canonical (expected {canonicalize(x)})")
    return _boundary(x, target, a)


def _to_gate(z: PointCode, a: Weight) -> Fraction:
    """d(z, [12^inf]) for z in a first-level subtree, by its first letter."""
    k = z.letter(0)
    if k == 1:
        return a(1) * _boundary(z.shift(), 2, a)
    return a(k) * _boundary(z.shift(), 1, a)


def common_prefix_length(x: PointCode, y: PointCode) -> int:
    """Length of the longest common prefix; x and y must be different words."""
    if x == y:
        raise DomainError("identical codes share every prefix")
    i = 0
    while x.letter(i) == y.letter(i):
        i += 1
    return i


def distance_exact(x: PointCode, y: PointCode, a: Weight) -> Fraction:
    x, y = canonicalize(x), canonicalize(y)
    if x == y:
        return Fraction(0)
    p = common_prefix_length(x, y)
    return delta(x.head(p), a) * (_to_gate(x.drop(p), a) + _to_gate(y.drop(p), a))


@dataclass(frozen=True)
class ChainApproximation:
    """Level-n chain length, an upper bound for the distance.

    ``same_tile_bound`` is Delta(w)(1 + 2^(|w|-n)) for the longest common
    prefix w of both codes with |w| < n.
    """

    value: Fraction
    level: int
    same_tile_bound: Fraction | None = None
    tile: tuple[int, ...] = ()


def chain_length(x: PointCode, y: PointCode, n: int, a: Weight) -> ChainApproximation:
    if n < 1:
        raise DomainError("level n must be >= 1")
    xn, yn = x.head(n), y.head(n)
    value = arc_sum(xn, yn, a)
    p = 0
    while p < n - 1 and xn[p] == yn[p]:
        p += 1
    w = xn[:p]
    bound = delta(w, a) * (1 + Fraction(1, 2 ** (n - p)))
    return ChainApproximation(value, n, bound, w)

