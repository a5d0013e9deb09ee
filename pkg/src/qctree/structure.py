"""Branch points, heights, tiles, and verification of uniform branching."""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .core import (
    DomainError,
    PointCode,
    Weight,
    Word,
    all_codes,
    branch_code,
    canonicalize,
    delta,
    format_rational,
    format_word,
    gate_stem,
    guard,
    words_upto,
)
from .metric import common_prefix_length, distance_exact


def thread_cap() -> int:
    """Worker count from QCTREE_THREADS (default 1, i.e. serial)."""
    try:
        return max(1, int(os.environ.get("QCTREE_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn: Callable, items: Sequence, chunks: int = 8) -> list:
    workers = thread_cap()
    if workers == 1 or len(items) < 2 * chunks:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (workers * chunks))))


def _needs_branching(a: Weight) -> None:
    if a.m < 3:
        raise DomainError("branch points need at least 3 letters")


@dataclass(frozen=True)
class BranchPoint:
    stem: Word
    code: PointCode
    height_H: Fraction
    height_new: Fraction


def branch_point(u: Sequence[int], a: Weight) -> BranchPoint:
    _needs_branching(a)
    h = a(3) * delta(u, a)
    return BranchPoint(tuple(u), branch_code(u), h, h)


def branch_points(n: int, a: Weight) -> list[BranchPoint]:
    """One branch point per stem of length <= n, ordered by stem."""
    _needs_branching(a)
    out = [branch_point(u, a) for u in words_upto(n, a.m)]
    if len({bp.code for bp in out}) != len(out):
        raise AssertionError("branch codes are not distinct")
    return out


def minor_branch_diameters(u: Sequence[int], a: Weight) -> list[Fraction]:
    """Diameters of the branches j >= 3 at [u12^inf], largest first.

    These branches are the tiles T_uj, so their diameters are a(j) Delta(u).
    """
    d = delta(u, a)
    return [a(j) * d for j in range(3, a.m + 1)]


# -- tiles -------------------------------------------------------------------


@dataclass(frozen=True)
class Tile:
    word: Word
    diameter: Fraction
    boundary: tuple[PointCode, ...]


def tile_boundary(w: Sequence[int]) -> tuple[PointCode, ...]:
    """Boundary points of T_w among its corner codes w1^inf and w2^inf."""
    w = tuple(w)
    out = []
    for c in (1, 2):
        x = canonicalize(PointCode(w, (c,)))
        if x.period == (2,) and x.prefix and x.prefix[-1] == 1 and len(x.prefix) - 1 < len(w):
            if x not in out:
                out.append(x)
    return tuple(out)


def tile(w: Sequence[int], a: Weight) -> Tile:
    return Tile(tuple(w), delta(w, a), tile_boundary(w))


def tiles(level: int, a: Weight) -> list[Tile]:
    guard(a.m**level)
    return [tile(w, a) for w in words_upto(level, a.m) if len(w) == level]


def tiles_containing(p: PointCode, k: int, m: int) -> list[Word]:
    """Level-k tiles that contain the point p."""
    p = canonicalize(p)
    stem = gate_stem(p)
    if stem is None:
        return [p.head(k)]
    out = [(stem + (1,) + (2,) * k)[:k]]
    for j in range(2, m + 1):
        w = (stem + (j,) + (1,) * k)[:k]
        if w not in out:
            out.append(w)
    return out


@dataclass(frozen=True)
class NeighborTile:
    word: Word
    ratio: Fraction
    within_bounds: bool


def neighbor_tiles(w: Sequence[int], a: Weight) -> list[NeighborTile]:
    """Same-level tiles meeting T_w, each with the ratio Delta(w)/Delta(u)."""
    w = tuple(w)
    if not w:
        raise DomainError("neighbor tiles need level >= 1")
    lo = 2 * min(a(i) for i in a.letters())
    found: list[Word] = []
    for p in tile_boundary(w):
        for u in tiles_containing(p, len(w), a.m):
            if u != w and u not in found:
                found.append(u)
    out = []
    for u in sorted(found):
        r = delta(w, a) / delta(u, a)
        out.append(NeighborTile(u, r, lo <= r <= 1 / lo))
    return out


# -- verification reports ------------------------------------------------------


def _jsonable(v: Any) -> Any:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, PointCode):
        return str(v)
    if isinstance(v, tuple) and all(isinstance(x, int) for x in v):
        return format_word(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


@dataclass
class CheckReport:
    check: str
    constant: Any
    witness: Any
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "constant": _jsonable(self.constant),
            "witness": _jsonable(self.witness),
            "pass": self.passed,
            **{k: _jsonable(v) for k, v in self.detail.items()},
        }


def _pair_ratio(args) -> tuple[Fraction, Word, Word]:
    v, w, a = args
    d = distance_exact(branch_code(v), branch_code(w), a)
    return d / min(delta(v, a), delta(w, a)), v, w


def _stem_pairs(n: int, m: int) -> list[tuple[Word, Word]]:
    stems = list(words_upto(n, m))
    return [(stems[i], stems[j]) for i in range(len(stems)) for j in range(i + 1, len(stems))]


def verify_separation(n: int, a: Weight) -> CheckReport:
    """d(p, q) >= min(Delta(v), Delta(w)) / 2 over all pairs of stems up to level n.

    ``constant`` is the smallest observed d / min(Delta); the check passes
    when it is at least 1/2.
    """
    _needs_branching(a)
    results = _pmap(_pair_ratio, [(v, w, a) for v, w in _stem_pairs(n, a.m)])
    r, v, w = min(results, key=lambda t: (t[0], len(t[1]), t[1], len(t[2]), t[2]))
    return CheckReport("separation", r, [v, w], r >= Fraction(1, 2), {"pairs": len(results)})


def verify_uniform_branching(
    n: int, a: Weight, samples: int = 300, seed: int = 0
) -> list[CheckReport]:
    """Separation, growth and density checks with the constants a(3), a(3)/a(m), a(3)."""
    _needs_branching(a)
    a3 = a(3)
    out = []

    results = _pmap(_pair_ratio, [(v, w, a) for v, w in _stem_pairs(n, a.m)])
    r, v, w = min(results, key=lambda t: (t[0], len(t[1]), t[1], len(t[2]), t[2]))
    # d >= a(3) min(Delta) is d >= min(H)
    out.append(CheckReport("separation", a3, [v, w], r >= a3, {"tightest_ratio": r}))

    worst, where = Fraction(0), None
    for u in words_upto(n, a.m):
        hs = minor_branch_diameters(u, a)
        for j in range(3, a.m + 1):
            g = hs[0] / hs[j - 3]
            if g > worst:
                worst, where = g, [u, j]
    growth = a3 / a(a.m)
    out.append(CheckReport("growth", growth, where, worst <= growth, {"observed": worst}))

    codes = all_codes(2, 2, a.m)
    rng = random.Random(seed)
    tight, witness, ok = None, None, True
    for _ in range(samples):
        x, y = rng.sample(codes, 2)
        d = distance_exact(x, y, a)
        u = x.head(common_prefix_length(x, y))
        g = branch_code(u)
        on_arc = distance_exact(x, g, a) + distance_exact(g, y, a) == d
        h = a3 * delta(u, a)
        ok = ok and on_arc and h >= a3 * d
        ratio = h / d
        if tight is None or ratio < tight:
            tight, witness = ratio, [x, y]
    out.append(CheckReport("density", a3, witness, ok, {"tightest_ratio": tight, "samples": samples}))
    return out


# -- nesting across alphabets ----------------------------------------------------


def _nearest(args) -> Fraction:
    q, pool, a = args
    best = None
    for p in pool:
        d = distance_exact(p, q, a)
        if best is None or d < best:
            best = d
            if d == 0:
                break
    return best


@dataclass(frozen=True)
class NestingReport:
    level: int
    m_small: int
    m_large: int
    small_into_large: Fraction
    excess: Fraction
    bound: Fraction
    passed: bool


def hausdorff_nesting(n: int, m_small: int, m_large: int, a: Weight) -> NestingReport:
    """Compare level-n branch points of the m_small and m_large trees.

    Every small-alphabet branch point is a branch point of the larger tree,
    so the first excess is 0. The reverse excess is bounded by
    max_{j > m_small} a(j) + 2^-n.
    """
    if not 3 <= m_small < m_large <= a.m:
        raise DomainError("need 3 <= m_small < m_large <= m")
    small = [branch_code(u) for u in words_upto(n, m_small)]
    large = [branch_code(u) for u in words_upto(n, m_large)]
    small_set, large_set = set(small), set(large)
    into = max(Fraction(0) if p in large_set else _nearest((p, large, a)) for p in small)
    far = [q for q in large if q not in small_set]
    excess = max(_pmap(_nearest, [(q, small, a) for q in far]), default=Fraction(0))
    bound = max(a(j) for j in range(m_small + 1, m_large + 1)) + Fraction(1, 2**n)
    return NestingReport(n, m_small, m_large, into, excess, bound, excess <= bound and into == 0)
