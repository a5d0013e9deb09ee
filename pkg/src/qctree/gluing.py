"""Finite geodesic trees, geodesic gluing and the three embedding steps.

Trees are vertex/edge lists with exact rational edge lengths. Interior points
of edges are double points, so the branch structure lives on the vertices.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .core import DomainError, PointCode, Weight, as_fraction, canonicalize, format_rational
from .metric import distance_exact
from .structure import CheckReport


@dataclass(frozen=True)
class FiniteGeodesicTree:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, Fraction], ...] = ()
    _adj: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _dist: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        edges = tuple((str(u), str(v), as_fraction(w)) for u, v, w in self.edges)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        if not verts:
            raise DomainError("a tree needs at least one vertex")
        if len(set(verts)) != len(verts):
            raise DomainError("duplicate vertex identifiers")
        adj = {v: [] for v in verts}
        for u, v, w in edges:
            if u not in adj or v not in adj:
                raise DomainError(f"edge ({u}, {v}) uses an unknown vertex")
            if u == v or w <= 0:
                raise DomainError(f"edge ({u}, {v}) must join distinct vertices with positive length")
            adj[u].append((v, w))
            adj[v].append((u, w))
        for v in adj:
            adj[v].sort()
        self._adj.update(adj)
        if len(edges) != len(verts) - 1 or len(self.distances_from(verts[0])) != len(verts):
            raise DomainError("edges do not form a tree")

    # -- structure

    def neighbors(self, v: str) -> list[tuple[str, Fraction]]:
        return self._adj[v]

    def degree(self, v: str) -> int:
        return len(self._adj[v])

    def role(self, v: str) -> str:
        d = self.degree(v)
        return "leaf" if d <= 1 else "double" if d == 2 else "branch"

    @property
    def marks(self) -> dict[str, str]:
        return {v: self.role(v) for v in self.vertices}

    def branch_points(self) -> list[str]:
        return sorted(v for v in self.vertices if self.degree(v) >= 3)

    def leaves(self) -> list[str]:
        return sorted(v for v in self.vertices if self.degree(v) <= 1)

    # -- metric

    def distances_from(self, x: str) -> dict[str, Fraction]:
        if x not in self._dist:
            if x not in self._adj:
                raise DomainError(f"unknown vertex {x!r}")
            out = {x: Fraction(0)}
            stack = [x]
            while stack:
                u = stack.pop()
                for v, w in self._adj[u]:
                    if v not in out:
                        out[v] = out[u] + w
                        stack.append(v)
            self._dist[x] = out
        return self._dist[x]

    def distance(self, x: str, y: str) -> Fraction:
        d = self.distances_from(x)
        if y not in d:
            raise DomainError(f"unknown vertex {y!r}")
        return d[y]

    def path(self, x: str, y: str) -> list[str]:
        """Vertices on the unique path from x to y."""
        dx, dy = self.distances_from(x), self.distances_from(y)
        total = dx[y]
        on = [v for v in self.vertices if dx[v] + dy[v] == total]
        return sorted(on, key=lambda v: dx[v])

    def component(self, p: str, start: str) -> list[str]:
        """Vertices of the component of T minus p that contains ``start``."""
        seen = {p, start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v, _ in self._adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        seen.discard(p)
        return sorted(seen)

    # -- serialization

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[u, v, format_rational(w)] for u, v, w in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "FiniteGeodesicTree":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(tuple(data["vertices"]), tuple(tuple(e) for e in data["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed tree JSON: {exc}") from exc

    def scaled(self, factor: Fraction) -> "FiniteGeodesicTree":
        return FiniteGeodesicTree(self.vertices, tuple((u, v, w * factor) for u, v, w in self.edges))


def tree_distance(T: FiniteGeodesicTree, x: str, y: str) -> Fraction:
    return T.distance(x, y)


def segment_tree(length, a: str = "0", b: str = "1") -> FiniteGeodesicTree:
    return FiniteGeodesicTree((a, b), ((a, b, as_fraction(length)),))


def star(legs: Sequence, center: str = "c") -> FiniteGeodesicTree:
    """A star whose leaves are named l1, l2, ... in leg order."""
    names = [f"l{i + 1}" for i in range(len(legs))]
    return FiniteGeodesicTree(
        (center, *names), tuple((center, n, as_fraction(w)) for n, w in zip(names, legs))
    )


# -- branches and heights --------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    root: str  # neighbor of p inside the branch
    vertices: tuple[str, ...]
    height: Fraction
    farthest: str  # farthest leaf, smallest identifier on ties


def branches(T: FiniteGeodesicTree, p: str) -> list[Branch]:
    """Branches at p, by decreasing height then root identifier."""
    dp = T.distances_from(p)
    out = []
    for nb, _ in T.neighbors(p):
        comp = T.component(p, nb)
        h = max(dp[v] for v in comp)
        far = min(v for v in comp if dp[v] == h)
        out.append(Branch(nb, tuple(comp), h, far))
    out.sort(key=lambda b: (-b.height, b.root))
    return out


def branch_heights(T: FiniteGeodesicTree, p: str) -> list[Fraction]:
    """Maximal distances from p within each branch, largest first."""
    if T.degree(p) < 3:
        raise DomainError(f"{p!r} has {T.degree(p)} branches; need at least 3")
    return [b.height for b in branches(T, p)]


def new_height(T: FiniteGeodesicTree, p: str) -> Fraction:
    return branch_heights(T, p)[2]


def branch_diameters(T: FiniteGeodesicTree, p: str) -> list[Fraction]:
    """Diameters of the closed branches at p, in the same order as ``branches``."""
    out = []
    for b in branches(T, p):
        pts = [p] + [v for v in b.vertices if T.degree(v) <= 1]
        out.append(max(T.distance(x, y) for x in pts for y in pts))
    return out


def diameter_height(T: FiniteGeodesicTree, p: str) -> Fraction:
    """Diameter of the third-largest branch at p."""
    if T.degree(p) < 3:
        raise DomainError(f"{p!r} is not a branch point")
    return sorted(branch_diameters(T, p), reverse=True)[2]


# -- gluing -----------------------------------------------------------------------


@dataclass(frozen=True)
class GluingSpec:
    attachments: tuple[tuple[str, FiniteGeodesicTree, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "attachments", tuple(tuple(t) for t in self.attachments))
        for x, Y, y in self.attachments:
            if y not in Y.vertices:
                raise DomainError(f"base point {y!r} is not a vertex of the glued tree")


def _fresh_prefix(taken: set[str]) -> str:
    k = 0
    while any(v.startswith(f"g{k}.") for v in taken):
        k += 1
    return f"g{k}."


def glue_with_map(
    X: FiniteGeodesicTree, spec: GluingSpec
) -> tuple[FiniteGeodesicTree, list[dict[str, str]]]:
    """Geodesic gluing plus, per attachment, the map from Y-vertices to new ids."""
    taken = set(X.vertices)
    base = _fresh_prefix(taken)
    verts = list(X.vertices)
    edges = list(X.edges)
    maps = []
    for i, (x, Y, y) in enumerate(spec.attachments):
        if x not in taken or x not in X.vertices:
            raise DomainError(f"attachment point {x!r} is not a vertex of the base tree")
        names = {v: (x if v == y else f"{base}{i}.{v}") for v in Y.vertices}
        verts += [names[v] for v in Y.vertices if v != y]
        edges += [(names[u], names[v], w) for u, v, w in Y.edges]
        maps.append(names)
    return FiniteGeodesicTree(tuple(verts), tuple(edges)), maps


def geodesic_glue(X: FiniteGeodesicTree, spec: GluingSpec) -> FiniteGeodesicTree:
    return glue_with_map(X, spec)[0]


def glued_distance(X: FiniteGeodesicTree, spec: GluingSpec, z: tuple, w: tuple) -> Fraction:
    """The gluing pseudometric on points (i, v): i = None for X, else an attachment index."""
    (i, a), (j, b) = z, w
    att = spec.attachments
    if i is None and j is None:
        return X.distance(a, b)
    if i is not None and i == j:
        return att[i][1].distance(a, b)
    if i is None:
        x, Y, y = att[j]
        return X.distance(a, x) + Y.distance(y, b)
    if j is None:
        x, Y, y = att[i]
        return X.distance(b, x) + Y.distance(y, a)
    xi, Yi, yi = att[i]
    xj, Yj, yj = att[j]
    return Yi.distance(a, yi) + X.distance(xi, xj) + Yj.distance(yj, b)


# -- the three steps --------------------------------------------------------------


def step1_spec(T: FiniteGeodesicTree) -> GluingSpec:
    """Segments that lengthen short branches at branch points of valence >= 4.

    At each such p, every branch B_j past the last index that ties with the
    third height gets a segment of length h(p) - h(p, B_j) glued at its
    farthest leaf. All lengths are computed on the input tree.
    """
    lengths: dict[str, tuple[Fraction, str]] = {}
    for p in T.branch_points():
        if T.degree(p) < 4:
            continue
        bs = branches(T, p)
        h = bs[2].height
        last = max(k for k, b in enumerate(bs) if b.height == h)
        for b in bs[last + 1 :]:
            q = b.farthest
            need = h - b.height
            if q in lengths and lengths[q][0] != need:
                raise DomainError(
                    f"leaf {q!r} is selected by {lengths[q][1]!r} and {p!r} with different lengths"
                )
            lengths[q] = (need, p)
    return GluingSpec(tuple((q, segment_tree(L, "0", "1"), "0") for q, (L, _) in sorted(lengths.items())))


def step1_uniform_growth(T: FiniteGeodesicTree) -> FiniteGeodesicTree:
    spec = step1_spec(T)
    return geodesic_glue(T, spec) if spec.attachments else T


def step2_spec(T: FiniteGeodesicTree, m: int) -> GluingSpec:
    """Segments of the smallest branch height that raise every branch point to valence m."""
    attach = []
    for p in T.branch_points():
        n = T.degree(p)
        if n > m:
            raise DomainError(f"branch point {p!r} has valence {n} > m = {m}")
        if n < m:
            h = branch_heights(T, p)[-1]
            attach += [(p, segment_tree(h, "0", "1"), "0") for _ in range(m - n)]
    return GluingSpec(tuple(attach))


def step2_uniform_valence(T: FiniteGeodesicTree, m: int) -> FiniteGeodesicTree:
    spec = step2_spec(T, m)
    return geodesic_glue(T, spec) if spec.attachments else T


def truncated_skeleton(a: Weight, depth: int) -> FiniteGeodesicTree:
    """Finite tree spanned by the corner points of all depth-d tiles.

    Vertices are canonical point codes (as text); edge lengths are exact
    distances. Depth 0 is the segment from [1^inf] to [2^inf].
    """
    if depth < 0:
        raise DomainError("depth must be >= 0")
    edges = [(PointCode((), (1,)), PointCode((), (2,)))]
    for _ in range(depth):
        edges = [
            (canonicalize(x.prepend((j,))), canonicalize(y.prepend((j,))))
            for j in a.letters()
            for x, y in edges
        ]
    verts: dict[PointCode, None] = {}
    for x, y in edges:
        verts.setdefault(x)
        verts.setdefault(y)
    return FiniteGeodesicTree(
        tuple(str(v) for v in verts),
        tuple((str(x), str(y), distance_exact(x, y, a)) for x, y in edges),
    )


def step3_attach(
    T: FiniteGeodesicTree,
    vertex_levels: Iterable[tuple[str, int]],
    m: int,
    a: Weight,
    delta,
    c=Fraction(1, 2),
    depth: int = 1,
) -> FiniteGeodesicTree:
    """Glue m - 2 copies of the scaled truncated skeleton at each listed double point.

    The copy at a level-n point is scaled by c * delta^n and attached at its
    [1^inf] corner. An isolated vertex (single-vertex tree) is also accepted.
    """
    delta, c = as_fraction(delta), as_fraction(c)
    if not 0 < delta < Fraction(1, 3):
        raise DomainError("delta must lie in (0, 1/3)")
    if depth < 1:
        raise DomainError("truncation depth must be >= 1")
    if m < 3 or m > a.m:
        raise DomainError(f"m must be between 3 and {a.m}")
    base = truncated_skeleton(a.truncate(m) if m < a.m or a.infinite else a, depth)
    root = str(PointCode((), (1,)))
    attach = []
    for v, n in vertex_levels:
        if v not in T.vertices:
            raise DomainError(f"unknown vertex {v!r}")
        if T.degree(v) not in (0, 2):
            raise DomainError(f"{v!r} is not a double point (valence {T.degree(v)})")
        copy = base.scaled(c * delta**n)
        attach += [(v, copy, root)] * (m - 2)
    if not attach:
        return T
    return geodesic_glue(T, GluingSpec(tuple(attach)))


def dyadic_vertex_levels(
    T: FiniteGeodesicTree, delta, max_level: int
) -> tuple[FiniteGeodesicTree, list[tuple[str, int]]]:
    """Stand-in vertex sets: points at spacing delta^n along every edge.

    This is a convenience for exercising the attachment step, not the
    multiscale decomposition an actual embedding needs. Each new point gets the
    smallest level n at which it appears; edges are subdivided so that every
    point is a double-point vertex.
    """
    delta = as_fraction(delta)
    verts = list(T.vertices)
    edges = []
    levels: list[tuple[str, int]] = []
    for u, v, L in T.edges:
        cuts: dict[Fraction, int] = {}
        for n in range(1, max_level + 1):
            step = delta**n
            k = 1
            while k * step < L:
                cuts.setdefault(k * step, n)
                k += 1
        prev, prev_pos = u, Fraction(0)
        for pos in sorted(cuts):
            name = f"{u}>{v}@{format_rational(pos)}"
            verts.append(name)
            levels.append((name, cuts[pos]))
            edges.append((prev, name, pos - prev_pos))
            prev, prev_pos = name, pos
        edges.append((prev, v, L - prev_pos))
    return FiniteGeodesicTree(tuple(verts), tuple(edges)), levels


# -- verification --------------------------------------------------------------


def _height(T: FiniteGeodesicTree, p: str, kind: str) -> Fraction:
    return new_height(T, p) if kind == "new" else diameter_height(T, p)


def verify_tree_properties(
    T: FiniteGeodesicTree, constants: dict | None = None, height: str = "new"
) -> list[CheckReport]:
    """Best constants for separation, growth, density and the comparability bounds.

    ``constants`` optionally caps each check ({"growth": 1, ...}); a check
    passes when its best constant is finite and within the cap. Checks with
    no branch points are vacuous and pass with constant None.
    """
    if height not in ("new", "diameter"):
        raise DomainError("height must be 'new' or 'diameter'")
    caps = {k: as_fraction(v) for k, v in (constants or {}).items()}
    bps = T.branch_points()
    H = {p: _height(T, p, height) for p in bps}
    out = []

    def report(name, const, witness, extra=None):
        ok = const is None or (const != math.inf and (name not in caps or const <= caps[name]))
        out.append(CheckReport(name, const, witness, ok, extra or {}))

    best, wit = None, None
    for p, q in combinations(bps, 2):
        r = min(H[p], H[q]) / T.distance(p, q)
        if best is None or r > best:
            best, wit = r, [p, q]
    report("separation", best, wit)

    best, wit = None, None
    for p in bps:
        hs = branch_heights(T, p) if height == "new" else sorted(branch_diameters(T, p), reverse=True)
        for i in range(3, len(hs)):
            r = hs[2] / hs[i]
            if best is None or r > best:
                best, wit = r, [p, i + 1]
        if best is None and len(hs) == 3:
            best, wit = Fraction(1), [p, 3]
    report("growth", best, wit)

    best, wit = None, None
    if bps:
        for x, y in combinations(T.vertices, 2):
            on = [H[v] for v in T.path(x, y) if v in H]
            d = T.distance(x, y)
            r = d / max(on) if on else math.inf
            if best is None or r > best:
                best, wit = r, [x, y]
    report("density", best, wit)

    worst_hi, wit = Fraction(0), None
    comparable = True
    for p in bps:
        for b, dm in zip(branches(T, p), branch_diameters(T, p)):
            comparable &= dm <= 2 * b.height and b.height <= dm
            if dm / b.height > worst_hi:
                worst_hi, wit = dm / b.height, [p, b.root]
    out.append(CheckReport("comparable_heights", worst_hi if bps else None, wit, comparable))

    valences = sorted({T.degree(p) for p in bps})
    out.append(CheckReport("valence", valences, None, True))
    return out


def doubling_bound(N: int, C) -> int | Fraction:
    """Doubling constant 3(N - 2)(6C + 1) + 7 from valence N and growth constant C."""
    if N < 2:
        raise DomainError("N must be >= 2")
    C = as_fraction(C)
    if C < 1:
        raise DomainError("C must be >= 1")
    D = 3 * (N - 2) * (6 * C + 1) + 7
    return int(D) if D.denominator == 1 else D


def random_geodesic_tree(
    n_vertices: int,
    max_valence: int,
    rng: random.Random,
    lengths: Sequence = (Fraction(1, 8), Fraction(1, 4), Fraction(3, 8), Fraction(1, 2), Fraction(1)),
) -> FiniteGeodesicTree:
    """Random attachment tree with capped valence and lengths drawn from ``lengths``."""
    if n_vertices < 1 or max_valence < 2:
        raise DomainError("need n_vertices >= 1 and max_valence >= 2")
    verts = ["v0"]
    deg = {"v0": 0}
    edges = []
    for k in range(1, n_vertices):
        open_ = [v for v in verts if deg[v] < max_valence]
        u = rng.choice(open_)
        v = f"v{k}"
        edges.append((u, v, as_fraction(rng.choice(list(lengths)))))
        verts.append(v)
        deg[u] += 1
        deg[v] = 1
    return FiniteGeodesicTree(tuple(verts), tuple(edges))
