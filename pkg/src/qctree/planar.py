"""Planar IFS realizations: the quasiconvex trees and the Vicsek fractal.

Segments are stored as complex arrays of shape (N, 2), one row per segment
(start, end). Everything here is binary64 with explicit tolerances.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.spatial import ConvexHull, cKDTree

from .core import DomainError, guard

SAMPLES_PER_SEGMENT = 16
GATE_EXCLUSION = 1e-6


@dataclass(frozen=True)
class PlanarSimilarity:
    """z -> scale * e^(i rotation) * (conj(z) if conjugate else z) + translation."""

    scale: float
    rotation: float = 0.0
    translation: complex = 0j
    conjugate: bool = False

    @property
    def multiplier(self) -> complex:
        return self.scale * cmath.exp(1j * self.rotation)

    def __call__(self, z):
        z = np.conj(z) if self.conjugate else z
        return self.multiplier * z + self.translation

    def compose(self, inner: "PlanarSimilarity") -> "PlanarSimilarity":
        """self after inner."""
        A, b = inner.multiplier, inner.translation
        if self.conjugate:
            A, b = A.conjugate(), b.conjugate()
        mult = self.multiplier * A
        return PlanarSimilarity(
            abs(mult), cmath.phase(mult), self.multiplier * b + self.translation,
            self.conjugate != inner.conjugate,
        )


@dataclass(frozen=True)
class Segment:
    start: complex
    end: complex

    def __post_init__(self):
        if self.start == self.end:
            raise DomainError("segment has zero length")

    @property
    def length(self) -> float:
        return abs(self.end - self.start)


def as_segments(segments) -> np.ndarray:
    """Normalize a list of Segment / pairs / an array into an (N, 2) complex array."""
    if isinstance(segments, np.ndarray):
        return segments.astype(complex).reshape(-1, 2)
    rows = [(s.start, s.end) if isinstance(s, Segment) else tuple(s) for s in segments]
    return np.array(rows, dtype=complex).reshape(-1, 2)


def to_segment_list(segs: np.ndarray) -> list[Segment]:
    return [Segment(complex(a), complex(b)) for a, b in as_segments(segs)]


# -- the two model systems -------------------------------------------------


def csst_like_angle(m: int) -> float:
    if m < 3:
        raise DomainError("the planar tree needs m >= 3")
    return math.pi / (3 * m - 3)


def csst_like_weights(m: int) -> list[float]:
    s = 0.5 * math.sin(csst_like_angle(m))
    return [0.5, 0.5] + [s] * (m - 2)


def csst_like_ifs(m: int) -> list[PlanarSimilarity]:
    theta = csst_like_angle(m)
    maps = [
        PlanarSimilarity(0.5, 0.0, -0.25, True),
        PlanarSimilarity(0.5, 0.0, 0.25, False),
    ]
    s = 0.5 * math.sin(theta)
    for j in range(3, m + 1):
        rot = (3 * j - 6) * theta
        # scale * e^(i rot) * (z + 1/2)
        maps.append(PlanarSimilarity(s, rot, 0.5 * s * cmath.exp(1j * rot), False))
    return maps


def unit_segment() -> np.ndarray:
    return np.array([[-0.5, 0.5]], dtype=complex)


def vicsek_ifs() -> list[PlanarSimilarity]:
    third = 1 / 3
    return [
        PlanarSimilarity(third, 0.0, (-2 - 2j) / 3),
        PlanarSimilarity(third, 0.0, (-2 + 2j) / 3),
        PlanarSimilarity(third, 0.0, (2 + 2j) / 3),
        PlanarSimilarity(third, 0.0, (2 - 2j) / 3),
        PlanarSimilarity(third, 0.0, 0j),
    ]


def vicsek_generators() -> np.ndarray:
    """The diagonals of [-1, 1]^2 as four half-diagonals from the center."""
    return np.array([[0, 1 + 1j], [0, -1 + 1j], [0, -1 - 1j], [0, 1 - 1j]], dtype=complex)


def compose_word(ifs: Sequence[PlanarSimilarity], w: Sequence[int]) -> PlanarSimilarity:
    """psi_w = psi_{w1} o ... o psi_{wk} (letters are 1-based)."""
    out = PlanarSimilarity(1.0)
    for i in w:
        out = out.compose(ifs[i - 1])
    return out


def skeleton(ifs: Sequence[PlanarSimilarity], generators, depth: int) -> np.ndarray:
    """Images of the generators under all depth-n words, in word order."""
    gens = as_segments(generators)
    guard(len(ifs) ** depth * len(gens))
    segs = gens
    for _ in range(depth):
        segs = np.concatenate([f(segs) for f in ifs])
    return segs


# -- sampling and distances ------------------------------------------------


def sample_points(segments, per_segment: int = SAMPLES_PER_SEGMENT) -> np.ndarray:
    """Points start + t (end - start), t = k / per_segment; returned as complex."""
    segs = as_segments(segments)
    t = np.linspace(0.0, 1.0, per_segment + 1)
    return (segs[:, :1] + (segs[:, 1:] - segs[:, :1]) * t).ravel()


def _xy(points) -> np.ndarray:
    pts = np.asarray(points)
    if np.iscomplexobj(pts) or pts.ndim == 1:
        pts = np.column_stack([pts.real, pts.imag])
    return pts.astype(float)


def directed_hausdorff(A, B) -> float:
    """sup over a in A of the distance from a to B."""
    A, B = _xy(A), _xy(B)
    if not len(A) or not len(B):
        raise DomainError("point sets must be nonempty")
    return float(cKDTree(B).query(A)[0].max())


def hausdorff_distance(A, B) -> float:
    """Hausdorff distance of two finite point sets.

    For sets sampled from segments at step h the error against the true
    segment sets is at most h.
    """
    return max(directed_hausdorff(A, B), directed_hausdorff(B, A))


def skeleton_hausdorff(S1, S2, per_segment: int = SAMPLES_PER_SEGMENT) -> float:
    return hausdorff_distance(sample_points(S1, per_segment), sample_points(S2, per_segment))


@dataclass(frozen=True)
class SeparationReport:
    min_distance: float
    scale: float
    constant: float | None
    pair: tuple[int, int]
    passed: bool


def separation_check(
    ifs: Sequence[PlanarSimilarity],
    generators,
    depth: int,
    gate: complex = 0j,
    letters: Sequence[int] | None = None,
    cone_angle: float | None = None,
) -> SeparationReport:
    """Minimum distance between sampled points of distinct first-letter tiles.

    Points within 1e-6 of ``gate`` are dropped. ``scale`` is the smallest
    distance from a kept point to the gate. With a cone angle theta the check
    passes iff min_distance >= sin(theta/2) * scale, else iff it is positive.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    letters = list(letters) if letters is not None else list(range(1, len(ifs) + 1))
    base = skeleton(ifs, generators, depth - 1)
    clouds = {}
    scale = math.inf
    for j in letters:
        pts = sample_points(ifs[j - 1](base))
        pts = pts[np.abs(pts - gate) >= GATE_EXCLUSION]
        clouds[j] = pts
        if len(pts):
            scale = min(scale, float(np.abs(pts - gate).min()))
    best, pair = math.inf, (0, 0)
    for x in range(len(letters)):
        for y in range(x + 1, len(letters)):
            i, j = letters[x], letters[y]
            d = float(cKDTree(_xy(clouds[j])).query(_xy(clouds[i]))[0].min())
            if d < best:
                best, pair = d, (i, j)
    c = None if cone_angle is None else math.sin(cone_angle / 2)
    passed = best >= c * scale if c is not None else best > 0
    return SeparationReport(best, scale, c, pair, passed)


# -- skeleton geometry -----------------------------------------------------


def _vertex_graph(segments, tol: float):
    segs = as_segments(segments)
    ends = segs.ravel()
    xy = _xy(ends)
    # merge endpoints closer than tol
    close = cKDTree(xy).query_pairs(tol, output_type="ndarray")
    links = coo_matrix(
        (np.ones(len(close)), (close[:, 0], close[:, 1])), shape=(len(ends), len(ends))
    )
    n, node = connected_components(links, directed=False)
    u, v = node[0::2], node[1::2]
    w = np.abs(segs[:, 1] - segs[:, 0])
    graph = coo_matrix((np.r_[w, w], (np.r_[u, v], np.r_[v, u])), shape=(n, n)).tocsr()
    return graph, node, ends


def geodesic_length(segments, start: complex, end: complex, tol: float = 1e-9) -> float:
    """Shortest path length inside the union of segments, over segment endpoints."""
    graph, node, ends = _vertex_graph(segments, tol)
    s = node[int(np.argmin(np.abs(ends - start)))]
    t = node[int(np.argmin(np.abs(ends - end)))]
    return float(dijkstra(graph, indices=s)[t])


def skeleton_nested(coarse, fine, tol: float = 1e-12) -> bool:
    """True iff every coarse segment is covered by collinear fine segments."""
    coarse, fine = as_segments(coarse), as_segments(fine)
    mids = (fine[:, 0] + fine[:, 1]) / 2
    tree = cKDTree(_xy(mids))
    for p, q in coarse:
        L = abs(q - p)
        idx = tree.query_ball_point([((p + q) / 2).real, ((p + q) / 2).imag], L / 2 + tol)
        if not idx:
            return False
        cand = fine[idx]
        rel = (cand - p) / (q - p)
        on_line = (np.abs(rel.imag) * L <= tol).all(axis=1)
        t = np.sort(rel.real[on_line], axis=1)
        t = t[(t[:, 0] >= -tol / L) & (t[:, 1] <= 1 + tol / L)]
        if not len(t):
            return False
        t = t[np.argsort(t[:, 0])]
        reach = 0.0
        for lo, hi in t:
            if lo > reach + tol / L:
                return False
            reach = max(reach, hi)
        if reach < 1 - tol / L:
            return False
    return True


def diameter(points) -> float:
    """Euclidean diameter of a finite planar point set."""
    xy = np.unique(_xy(points), axis=0)
    if len(xy) > 3:
        try:
            xy = xy[ConvexHull(xy).vertices]
        except Exception:
            # collinear input: the hull is degenerate, fall back to all points
            pass
    diff = xy[:, None, :] - xy[None, :, :]
    return float(np.sqrt((diff**2).sum(-1)).max())


def vicsek_branch_height(u: Sequence[int]) -> float:
    """Closed-form height 3^(-|u|) / sqrt(2) of the branch point [u 5^inf]."""
    if any(not 1 <= x <= 5 for x in u):
        raise DomainError("Vicsek letters are 1..5")
    return 3.0 ** (-len(u)) / math.sqrt(2)


def vicsek_tile_diameter(w: Sequence[int], depth: int = 2) -> float:
    """Measured Euclidean diameter of the tile phi_w(V) from its skeleton."""
    f = compose_word(vicsek_ifs(), w)
    return diameter(f(skeleton(vicsek_ifs(), vicsek_generators(), depth)).ravel())


def vicsek_branch_diameters(u: Sequence[int], depth: int = 3) -> list[float]:
    """Measured diameters of the four branches at [u 5^inf], largest first.

    Branches are the components of the depth-n skeleton of phi_u(V) with the
    center point removed, each closed up with the center. The two smallest
    branches of V at this point lie inside phi_u(V), so the third entry is
    the height of the branch point in V.
    """
    f = compose_word(vicsek_ifs(), u)
    segs = f(skeleton(vicsek_ifs(), vicsek_generators(), depth))
    center = complex(f(0j))
    graph, node, ends = _vertex_graph(segs, 1e-9)
    c = node[int(np.argmin(np.abs(ends - center)))]
    keep = np.ones(graph.shape[0], dtype=bool)
    keep[c] = False
    sub = graph[keep][:, keep]
    n, labels = connected_components(sub, directed=False)
    # map each vertex to one of its endpoint coordinates
    coords = np.empty(graph.shape[0], dtype=complex)
    coords[node] = ends
    kept = coords[keep]
    out = [diameter(np.append(kept[labels == k], center)) for k in range(n)]
    return sorted(out, reverse=True)


# -- export ------------------------------------------------------------------


def render_svg(segments, path, stroke: float | None = None) -> Path:
    segs = as_segments(segments)
    path = Path(path)
    if len(segs):
        xy = _xy(segs.ravel())
        lo, hi = xy.min(axis=0), xy.max(axis=0)
        span = np.maximum(hi - lo, 1e-12)
        lo, span = lo - 0.05 * span, span * 1.1
    else:
        lo, span = np.zeros(2), np.ones(2)
    width = stroke or float(max(span)) / 500
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{lo[0]:.12g} {-(lo[1] + span[1]):.12g} '
        f'{span[0]:.12g} {span[1]:.12g}">',
        f'<g stroke="black" stroke-width="{width:.6g}" stroke-linecap="round" fill="none">',
    ]
    # flip y so the picture is upright
    for a, b in segs:
        lines.append(
            f'<line x1="{a.real:.12g}" y1="{-a.imag:.12g}" x2="{b.real:.12g}" y2="{-b.imag:.12g}"/>'
        )
    lines += ["</g>", "</svg>", ""]
    try:
        path.write_text("\n".join(lines))
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc
    return path


def export_csv(segments, path) -> Path:
    segs = as_segments(segments)
    path = Path(path)
    rows = ["x1,y1,x2,y2"]
    rows += [f"{a.real:.12g},{a.imag:.12g},{b.real:.12g},{b.imag:.12g}" for a, b in segs]
    try:
        path.write_text("\n".join(rows) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def bilipschitz_lower_bound(m: int, depth: int, pairs: int = 2000, seed: int = 0) -> float:
    """Largest sampled ratio of skeleton path distance to Euclidean distance.

    Any bi-Lipschitz constant between the two metrics is at least this value.
    """
    segs = skeleton(csst_like_ifs(m), unit_segment(), depth)
    graph, node, ends = _vertex_graph(segs, 1e-9)
    coords = np.empty(graph.shape[0], dtype=complex)
    coords[node] = ends
    rng = np.random.default_rng(seed)
    src = rng.choice(graph.shape[0], size=min(20, graph.shape[0]), replace=False)
    dist = dijkstra(graph, indices=src)
    best = 1.0
    for row, s in zip(dist, src):
        dst = rng.choice(graph.shape[0], size=min(pairs // len(src) + 1, graph.shape[0]), replace=False)
        e = np.abs(coords[dst] - coords[s])
        ok = e > 1e-12
        if ok.any():
            best = max(best, float((row[dst][ok] / e[ok]).max()))
    return best
