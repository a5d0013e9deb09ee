"""The combinatorial trees G_k on words of length k.

Nothing is materialized: adjacency is a closed-form pattern match and arcs
come from routing through the unique gate edge between first-letter subtrees.
``inductive_edges`` builds E_k literally and serves as the brute-force oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, asdict
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .core import DomainError, Word, check_word, guard, words


def _common_prefix(w: Sequence[int], u: Sequence[int]) -> int:
    p = 0
    for x, y in zip(w, u):
        if x != y:
            break
        p += 1
    return p


def _is_i_ones(r: Word) -> bool:
    return r[0] >= 2 and all(x == 1 for x in r[1:])


def _is_one_twos(r: Word) -> bool:
    return r[0] == 1 and all(x == 2 for x in r[1:])


def adjacent(w: Sequence[int], u: Sequence[int]) -> bool:
    """True iff {w, u} = {v i 1^l, v 1 2^l} for some v, l and i >= 2."""
    w, u = tuple(w), tuple(u)
    if len(w) != len(u):
        raise DomainError(f"length mismatch: {len(w)} vs {len(u)}")
    if not w:
        raise DomainError("adjacency needs words of length >= 1")
    p = _common_prefix(w, u)
    if p == len(w):
        return False
    x, y = w[p:], u[p:]
    return (_is_i_ones(x) and _is_one_twos(y)) or (_is_i_ones(y) and _is_one_twos(x))


def neighbors(w: Sequence[int], m: int) -> list[Word]:
    """All neighbors of w in G_{|w|} over {1..m}, lexicographically sorted."""
    w = tuple(w)
    if not w:
        raise DomainError("neighbors needs a word of length >= 1")
    check_word(w, m)
    out = []
    for p in range(len(w)):
        v, r = w[:p], w[p:]
        rest = len(r) - 1
        if _is_one_twos(r):
            out.extend(v + (i,) + (1,) * rest for i in range(2, m + 1))
        elif _is_i_ones(r):
            out.append(v + (1,) + (2,) * rest)
    return sorted(out)


def _gate(letter: int, length: int) -> Word:
    """Endpoint of the gate edge inside the subtree of ``letter``."""
    if letter == 1:
        return (1,) + (2,) * (length - 1)
    return (letter,) + (1,) * (length - 1)


def arc(w: Sequence[int], u: Sequence[int]) -> list[Word]:
    """The unique simple path from w to u, endpoints included."""
    w, u = tuple(w), tuple(u)
    if len(w) != len(u):
        raise DomainError(f"length mismatch: {len(w)} vs {len(u)}")
    p = _common_prefix(w, u)
    if p == len(w):
        return [w]
    v, x, y = w[:p], w[p:], u[p:]
    i, j, n = x[0], y[0], len(x)
    gi, gj = _gate(i, n), _gate(j, n)
    path = [(i,) + t for t in arc(x[1:], gi[1:])]
    if i != 1 and j != 1:
        path.append(_gate(1, n))
    path += [(j,) + t for t in arc(gj[1:], y[1:])]
    return [v + t for t in path]


def arc_sum(w: Sequence[int], u: Sequence[int], f: Callable[[int], Fraction]) -> Fraction:
    """Sum over the arc from w to u of the product of f over each vertex.

    With f = a this is the chain length; with f = 1 it counts vertices.
    Runs in O(k^2) without materializing the path, whose length can be 2^k.
    """
    w, u = tuple(w), tuple(u)
    if len(w) != len(u):
        raise DomainError(f"length mismatch: {len(w)} vs {len(u)}")
    f1, f2 = f(1), f(2)

    def prod(t: Word) -> Fraction:
        out = Fraction(1)
        for x in t:
            out *= f(x)
        return out

    @lru_cache(maxsize=None)
    def s(x: Word, y: Word) -> Fraction:
        p = _common_prefix(x, y)
        if p == len(x):
            return prod(x)
        head, x, y = prod(x[:p]), x[p:], y[p:]
        n = len(x)
        if set(x) | set(y) == {1, 2} and len(set(x)) == 1 and len(set(y)) == 1:
            # 1^n <-> 2^n: every level doubles the vertices
            return head * (f1 + f2) ** n
        i, j = x[0], y[0]
        total = f(i) * s(x[1:], _gate(i, n)[1:]) + f(j) * s(_gate(j, n)[1:], y[1:])
        if i != 1 and j != 1:
            total += prod(_gate(1, n))
        return head * total

    return s(w, u)


def arc_size(w: Sequence[int], u: Sequence[int]) -> int:
    return int(arc_sum(w, u, lambda _: Fraction(1)))


def inductive_edges(k: int, m: int) -> set[frozenset]:
    """E_k built literally: E_1 = {{1,i}}, then gate edges plus lifted copies."""
    if k < 1:
        raise DomainError("k must be >= 1")
    guard(m**k)
    edges = {frozenset({(1,), (i,)}) for i in range(2, m + 1)}
    for level in range(1, k):
        gates = {frozenset({(1,) + (2,) * level, (i,) + (1,) * level}) for i in range(2, m + 1)}
        lifted = set()
        for e in edges:
            a, b = tuple(e)
            for i in range(1, m + 1):
                lifted.add(frozenset({(i,) + a, (i,) + b}))
        edges = gates | lifted
    return edges


@dataclass
class TreeReport:
    k: int
    m: int
    vertices: int
    edges: int
    connected: bool
    matches_inductive: bool | None
    passed: bool

    def to_json(self) -> dict:
        return asdict(self)


def verify_tree_structure(k: int, m: int, brute_force_limit: int = 50_000) -> TreeReport:
    """Count vertices and edges of G_k and test connectivity.

    Edges come from the closed-form neighbor rule; when m^k is at most
    ``brute_force_limit`` they are also compared with the inductive E_k.
    """
    if k < 1 or m < 2:
        raise DomainError("need k >= 1 and m >= 2")
    guard(m**k)
    n_vertices = m**k
    degree_sum = sum(len(neighbors(w, m)) for w in words(k, m))
    start = (1,) * k
    seen = {start}
    queue = deque([start])
    while queue:
        for u in neighbors(queue.popleft(), m):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    n_edges = degree_sum // 2
    connected = len(seen) == n_vertices
    matches = None
    if n_vertices <= brute_force_limit:
        closed = {frozenset({w, u}) for w in words(k, m) for u in neighbors(w, m)}
        matches = closed == inductive_edges(k, m)
    passed = connected and n_edges == n_vertices - 1 and matches is not False
    return TreeReport(k, m, n_vertices, n_edges, connected, matches, passed)
