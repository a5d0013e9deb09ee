"""Words, weights, point codes and the diameter function.

Everything here is exact: weights are ``Fraction`` values and point codes are
eventually periodic words kept in a normal form, so structural equality of
canonical codes is equality of points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

Word = tuple[int, ...]

HALF = Fraction(1, 2)
ENUMERATION_GUARD = 10**7


class DomainError(ValueError):
    """Raised when an input violates a mathematical precondition."""


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and "p/q" strings. Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise DomainError(f"expected an exact rational, got {value!r}")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"bad rational {value!r}") from exc
    raise DomainError(f"expected an exact rational, got {value!r}")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def word(letters: Iterable[int] | str) -> Word:
    """Build a word from letters or from text such as "1,1,3" or "113"."""
    if isinstance(letters, str):
        text = letters.strip()
        if not text:
            return ()
        parts = text.split(",") if "," in text else list(text)
        letters = [int(p) for p in parts]
    out = tuple(int(x) for x in letters)
    if any(x < 1 for x in out):
        raise DomainError(f"letters must be positive: {out}")
    return out


def format_word(w: Word) -> str:
    return ",".join(map(str, w))


# -- weights ---------------------------------------------------------------


@dataclass(frozen=True)
class GeometricTail:
    """Tail rule a(j) = coeff * ratio**j, used past the explicit values."""

    coeff: Fraction
    ratio: Fraction

    def __call__(self, j: int) -> Fraction:
        return self.coeff * self.ratio**j


@dataclass(frozen=True)
class Weight:
    """Nonincreasing weight with a(1) = a(2) = 1/2.

    ``values`` hold a(1..len). A finite weight has ``tail=None`` and
    alphabet size ``len(values)``. An infinite weight carries a tail rule
    and a truncation ``cap`` used by every enumeration.
    """

    values: tuple[Fraction, ...]
    tail: Callable[[int], Fraction] | None = None
    cap: int | None = None

    def __post_init__(self):
        vals = tuple(as_fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 2 or vals[0] != HALF or vals[1] != HALF:
            raise DomainError("a weight needs a(1) = a(2) = 1/2")
        if self.tail is None:
            if self.cap is not None:
                raise DomainError("cap only applies to infinite alphabets")
        else:
            if self.cap is None:
                object.__setattr__(self, "cap", max(len(vals), 8))
            if self.cap < max(2, len(vals)):
                raise DomainError("truncation cap must cover the explicit values")
            if isinstance(self.tail, GeometricTail) and not 0 < self.tail.ratio < 1:
                raise DomainError("a geometric tail needs ratio in (0, 1)")
        prev = HALF
        for i in range(1, self.m + 1):
            v = self(i)
            if not 0 < v <= prev:
                raise DomainError(f"weight must be positive and nonincreasing (index {i})")
            prev = v

    @property
    def infinite(self) -> bool:
        return self.tail is not None

    @property
    def m(self) -> int:
        """Alphabet size used for enumeration (the cap when infinite)."""
        return self.cap if self.tail is not None else len(self.values)

    def __call__(self, i: int) -> Fraction:
        if i < 1:
            raise DomainError(f"letter {i} out of range")
        if i <= len(self.values):
            return self.values[i - 1]
        if self.tail is None:
            raise DomainError(f"letter {i} out of range for m={len(self.values)}")
        return as_fraction(self.tail(i))

    def truncate(self, m: int) -> "Weight":
        """The finite weight a(1..m)."""
        if m < 2 or (not self.infinite and m > self.m):
            raise DomainError(f"cannot truncate to m={m}")
        return Weight(tuple(self(i) for i in range(1, m + 1)))

    def letters(self) -> range:
        return range(1, self.m + 1)

    @classmethod
    def uniform(cls, m: int) -> "Weight":
        return cls((HALF,) * m)

    @classmethod
    def of(cls, *values) -> "Weight":
        return cls(tuple(as_fraction(v) for v in values))

    def to_json(self) -> dict:
        if not self.infinite:
            return {"m": self.m, "a": [format_rational(v) for v in self.values]}
        if not isinstance(self.tail, GeometricTail):
            raise DomainError("only geometric tails serialize")
        return {
            "m": "infinite",
            "a": [format_rational(v) for v in self.values],
            "tail": {"coeff": format_rational(self.tail.coeff),
                     "ratio": format_rational(self.tail.ratio)},
            "cap": self.cap,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Weight":
        if isinstance(data, str):
            data = json.loads(data)
        values = tuple(as_fraction(v) for v in data["a"])
        if data.get("m") == "infinite":
            t = data["tail"]
            tail = GeometricTail(as_fraction(t["coeff"]), as_fraction(t["ratio"]))
            return cls(values, tail, data.get("cap"))
        if int(data["m"]) != len(values):
            raise DomainError("weight JSON: m does not match the number of values")
        return cls(values)


def check_word(w: Word, m: int) -> None:
    for x in w:
        if not 1 <= x <= m:
            raise DomainError(f"letter {x} outside alphabet 1..{m}")


def delta(w: Sequence[int], a: Weight) -> Fraction:
    """Diameter function: the product of a over the letters of w."""
    out = Fraction(1)
    for x in w:
        out *= a(x)
    return out


def words(k: int, m: int) -> Iterator[Word]:
    """All words of length k over 1..m in lexicographic order."""
    guard(m**k)
    return product(range(1, m + 1), repeat=k)


def words_upto(n: int, m: int) -> Iterator[Word]:
    """Words of length 0..n, ordered by length then lexicographically."""
    guard(sum(m**k for k in range(n + 1)))
    for k in range(n + 1):
        yield from product(range(1, m + 1), repeat=k)


def guard(count: int, limit: int = ENUMERATION_GUARD) -> None:
    if count > limit:
        raise DomainError(f"enumeration of {count} items exceeds the guard {limit}")


# -- point codes -----------------------------------------------------------


def _primitive(period: Word) -> Word:
    n = len(period)
    for d in range(1, n):
        if n % d == 0 and period[:d] * (n // d) == period:
            return period[:d]
    return period


@dataclass(frozen=True)
class PointCode:
    """The infinite word prefix . period . period . ... in normal form."""

    prefix: Word = ()
    period: Word = field(default=(1,))

    def __post_init__(self):
        prefix = word(self.prefix)
        period = word(self.period)
        if not period:
            raise DomainError("period must be nonempty")
        period = _primitive(period)
        # roll trailing prefix letters into the period
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1:] + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str) -> "PointCode":
        """Parse "1,1,2,(3)" style text. Bare words get no period and fail."""
        s = text.replace(" ", "")
        if "(" not in s or not s.endswith(")"):
            raise DomainError(f"point code needs a parenthesized period: {text!r}")
        head, _, tail = s.partition("(")
        try:
            prefix = word(head.rstrip(","))
            period = word(tail[:-1])
        except ValueError as exc:
            raise DomainError(f"bad point code {text!r}") from exc
        return cls(prefix, period)

    def __str__(self) -> str:
        body = f"({format_word(self.period)})"
        return f"{format_word(self.prefix)},{body}" if self.prefix else body

    def letter(self, i: int) -> int:
        """The i-th letter (0-based)."""
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def head(self, n: int) -> Word:
        """The length-n truncation x(n)."""
        return tuple(self.letter(i) for i in range(n))

    def shift(self) -> "PointCode":
        """Drop the first letter."""
        return self.drop(1)

    def drop(self, n: int) -> "PointCode":
        """Drop the first n letters."""
        if n <= len(self.prefix):
            return PointCode(self.prefix[n:], self.period)
        r = (n - len(self.prefix)) % len(self.period)
        return PointCode((), self.period[r:] + self.period[:r])

    def prepend(self, w: Sequence[int]) -> "PointCode":
        return PointCode(tuple(w) + self.prefix, self.period)

    def max_letter(self) -> int:
        return max(self.prefix + self.period)


def code(text_or_prefix, period: Sequence[int] | None = None) -> PointCode:
    """Shorthand: code("1,(2)") or code((1,), (2,))."""
    if period is None:
        return PointCode.parse(text_or_prefix)
    return PointCode(tuple(text_or_prefix), tuple(period))


def canonicalize(x: PointCode) -> PointCode:
    """Rewrite u.j.1^inf (j >= 2) as u.1.2^inf; other codes are already canonical."""
    if x.period == (1,) and x.prefix:
        # normal form guarantees the last prefix letter is not 1
        return PointCode(x.prefix[:-1] + (1,), (2,))
    return x


def is_canonical(x: PointCode) -> bool:
    return canonicalize(x) == x


def point_equals(x: PointCode, y: PointCode) -> bool:
    return canonicalize(x) == canonicalize(y)


def gate_stem(x: PointCode) -> Word | None:
    """For a canonical branch code u.1.2^inf return u, else None."""
    x = canonicalize(x)
    if x.period == (2,) and x.prefix and x.prefix[-1] == 1:
        return x.prefix[:-1]
    return None


def branch_code(u: Sequence[int]) -> PointCode:
    """The point [u 1 2^inf]."""
    return PointCode(tuple(u) + (1,), (2,))


def all_codes(max_prefix: int, max_period: int, m: int) -> list[PointCode]:
    """Distinct canonical codes with bounded prefix and period lengths."""
    seen: dict[PointCode, None] = {}
    for p in range(max_prefix + 1):
        for prefix in product(range(1, m + 1), repeat=p):
            for q in range(1, max_period + 1):
                for period in product(range(1, m + 1), repeat=q):
                    seen.setdefault(canonicalize(PointCode(prefix, period)), None)
    return list(seen)
