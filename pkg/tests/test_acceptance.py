"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines inline, or
``python -m tests.test_acceptance`` for the summary alone.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction as F
from itertools import product

import pytest

from qctree.core import PointCode, Weight, canonicalize, delta, words, words_upto
from qctree.dimension import dimension_bound_infinity, halving_weight, moran_dimension
from qctree.gluing import (
    branch_heights,
    glue_with_map,
    glued_distance,
    random_geodesic_tree,
    step1_spec,
    step2_spec,
    tree_distance,
    verify_tree_properties,
)
from qctree.graphs import arc, arc_sum, verify_tree_structure
from qctree.metric import chain_length, distance_exact
from qctree.planar import (
    csst_like_ifs,
    geodesic_length,
    skeleton,
    skeleton_nested,
    unit_segment,
    vicsek_branch_diameters,
    vicsek_tile_diameter,
)
from qctree.structure import hausdorff_nesting, verify_separation

WEIGHTS_UP_TO_6 = [
    Weight.uniform(2),
    Weight.uniform(3),
    Weight.of("1/2", "1/2", "1/4"),
    Weight.uniform(4),
    Weight.of("1/2", "1/2", "1/4", "1/8"),
    Weight.of("1/2", "1/2", "1/3", "1/3", "1/5"),
    Weight.of("1/2", "1/2", "1/2", "1/4", "1/16", "1/16"),
]


def _report(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(line)
    _report.lines.append(line)


_report.lines = []


@pytest.fixture(autouse=True)
def _show(capsys):
    # let the PASS/FAIL line reach the terminal even under output capture
    yield
    out = capsys.readouterr().out
    with capsys.disabled():
        print("\n" + out.rstrip())


def test_criterion_01_distance_anchor():
    worst = 0.0
    ok = True
    for a in WEIGHTS_UP_TO_6:
        t0 = time.perf_counter()
        d = distance_exact(PointCode((), (1,)), PointCode((), (2,)), a)
        worst = max(worst, time.perf_counter() - t0)
        ok &= d == 1
    ok &= worst < 1e-3
    _report(1, ok, f"d([1^inf],[2^inf]) = 1 for {len(WEIGHTS_UP_TO_6)} weights, slowest call {worst * 1e3:.3f} ms")
    assert ok


def test_criterion_02_branch_distance_formula():
    t0 = time.perf_counter()
    checked = 0
    bad = []
    for a in [Weight.uniform(2), Weight.uniform(3), Weight.of("1/2", "1/2", "1/4"),
              Weight.uniform(4), Weight.of("1/2", "1/2", "1/4", "1/8")]:
        for u in words_upto(3, a.m):
            for i in a.letters():
                d = distance_exact(PointCode(u + (1,), (2,)), PointCode(u + (i, 1), (2,)), a)
                checked += 1
                if d != delta(u + (i,), a) / 2:
                    bad.append((a, u, i))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 5
    _report(2, ok, f"{checked} exact checks of d = Delta(ui)/2, {len(bad)} mismatches, {dt:.2f} s")
    assert ok


def test_criterion_03_separation():
    t0 = time.perf_counter()
    profiles = [Weight.uniform(3), Weight.of("1/2", "1/2", "1/4"),
                Weight.uniform(4), Weight.of("1/2", "1/2", "1/4", "1/4")]
    reps = [verify_separation(3, a) for a in profiles]
    dt = time.perf_counter() - t0
    tight = min(r.constant for r in reps)
    ok = all(r.passed for r in reps) and dt < 30
    _report(3, ok, f"min d/min(Delta) = {tight} over stems <= 3, m in (3, 4), two profiles each, {dt:.2f} s")
    assert ok


def test_criterion_04_graph_structure():
    # the 2^k + 1 arc needs a third letter, so m runs over 3 and 4
    t0 = time.perf_counter()
    ok = True
    one = lambda t: 1
    for k, m in product(range(1, 5), (3, 4)):
        r = verify_tree_structure(k, m)
        ok &= r.vertices == m**k and r.edges == m**k - 1 and r.connected and r.matches_inductive
        ws = list(words(k, m))
        longest = max(arc_sum(w, u, one) for w in ws for u in ws)
        ok &= longest == 2**k + 1
        ok &= len(arc((1,) * k, (2,) * k)) == 2**k
    dt = time.perf_counter() - t0
    ok &= dt < 60
    _report(4, ok, f"G_k for k <= 4, m in (3, 4): counts, connectivity, brute-force edges, arc lengths; {dt:.2f} s")
    assert ok


def test_criterion_05_chain_convergence():
    a = Weight.of("1/2", "1/2", "1/4")
    rng = random.Random(20240501)
    t0 = time.perf_counter()

    def rand_code():
        total = rng.randint(1, 6)
        per = rng.randint(1, total)
        pre = tuple(rng.randint(1, 3) for _ in range(total - per))
        return canonicalize(PointCode(pre, tuple(rng.randint(1, 3) for _ in range(per))))

    worst = F(0)
    ok = True
    for _ in range(50):
        x, y = rand_code(), rand_code()
        gap = chain_length(x, y, 30, a).value - distance_exact(x, y, a)
        ok &= gap >= 0
        worst = max(worst, gap)
    dt = time.perf_counter() - t0
    ok &= worst < F(1, 2**20) and dt < 30
    _report(5, ok, f"50 pairs, max chain gap at n = 30 is {float(worst):.3e} (< 2^-20 = {2**-20:.3e}), {dt:.2f} s")
    assert ok


def test_criterion_06_moran():
    t0 = time.perf_counter()
    s2 = moran_dimension(2, Weight.uniform(2)).exponent
    s4 = moran_dimension(4, Weight.uniform(4)).exponent
    s3 = moran_dimension(3, Weight.uniform(3)).exponent
    cert = dimension_bound_infinity(halving_weight(), 1.5)
    dt = time.perf_counter() - t0
    ok = (abs(s2 - 1) < 1e-10 and abs(s4 - 2) < 1e-10
          and abs(s3 - math.log(3) / math.log(2)) < 1e-10 and cert and dt < 1)
    _report(6, ok, f"s = {s2!r}, {s3!r}, {s4!r}; sum a(j)^1.5 < 1 certified: {cert}; {dt * 1e3:.1f} ms")
    assert ok


def test_criterion_07_planar_skeleton():
    t0 = time.perf_counter()
    worst = 0.0
    nested = True
    for m in (3, 4, 5):
        prev = None
        for n in range(7):
            segs = skeleton(csst_like_ifs(m), unit_segment(), n)
            if n <= 6:
                worst = max(worst, abs(geodesic_length(segs, -0.5, 0.5) - 1))
            if prev is not None:
                nested &= skeleton_nested(prev, segs, tol=1e-12)
            prev = segs
    dt = time.perf_counter() - t0
    ok = worst < 1e-9 and nested and dt < 60
    _report(7, ok, f"|length(J_n) - 1| <= {worst:.2e} for n <= 6, m in (3, 4, 5); nested: {nested}; {dt:.2f} s")
    assert ok


def test_criterion_08_vicsek():
    t0 = time.perf_counter()
    worst_tile, tile_ratio = 0.0, None
    for n in range(6):
        target = math.sqrt(2) * 3.0**-n
        for w in words(n, 5):
            d = vicsek_tile_diameter(w)
            if abs(d - target) > worst_tile:
                worst_tile, tile_ratio = abs(d - target), d / target
    worst_h, h_ratio = 0.0, None
    for u in words_upto(3, 5):
        H = vicsek_branch_diameters(u)[2]
        target = 3.0 ** -len(u) / math.sqrt(2)
        if abs(H - target) > worst_h:
            worst_h, h_ratio = abs(H - target), H / target
    dt = time.perf_counter() - t0
    ok = worst_tile < 1e-9 and worst_h < 1e-9 and dt < 10
    _report(
        8, ok,
        f"tile diameter error {worst_tile:.3e} (measured/target = {tile_ratio}), "
        f"height error {worst_h:.3e} (measured/target = {h_ratio}); {dt:.2f} s",
    )
    assert ok


def test_criterion_09_gluing_pipeline():
    m = 6
    rng = random.Random(7)
    t0 = time.perf_counter()
    ok = True
    pairs = 0
    unbounded_density = 0
    trees = random.Random(11)
    for _ in range(20):
        T = random_geodesic_tree(trees.randint(5, 40), trees.randint(3, m), trees)
        while not T.branch_points():
            T = random_geodesic_tree(trees.randint(5, 40), trees.randint(3, m), trees)
        s1 = step1_spec(T)
        T1, maps1 = glue_with_map(T, s1)
        s2 = step2_spec(T1, m)
        T2, maps2 = glue_with_map(T1, s2)
        for X, spec, G, maps in ((T, s1, T1, maps1), (T1, s2, T2, maps2)):
            ok &= len(G.edges) == len(G.vertices) - 1
            pts = [(None, v) for v in X.vertices]
            pts += [(i, v) for i, (_, Y, _) in enumerate(spec.attachments) for v in Y.vertices]
            name = lambda p: p[1] if p[0] is None else maps[p[0]][p[1]]
            for _ in range(50):
                z, w = rng.choice(pts), rng.choice(pts)
                ok &= glued_distance(X, spec, z, w) == tree_distance(G, name(z), name(w))
                pairs += 1
        ok &= all(T2.degree(p) == m for p in T2.branch_points())
        ok &= T2.branch_points() == T.branch_points()
        for p in T.branch_points():
            hs0, hs1, hs2 = branch_heights(T, p), branch_heights(T1, p), branch_heights(T2, p)
            ok &= hs2[: len(hs1)] == hs1 and hs1[2] == hs0[2]
            ok &= all(h == hs0[2] for h in hs2[2:])
        reps = {r.check: r for r in verify_tree_properties(T2, {"growth": 1})}
        ok &= reps["growth"].passed and reps["growth"].constant == 1
        ok &= reps["separation"].passed and reps["comparable_heights"].passed
        # density needs a branch point on every arc; steps 1 and 2 add none
        unbounded_density += reps["density"].constant == math.inf
    dt = time.perf_counter() - t0
    ok &= dt < 60
    _report(9, ok, f"20 trees, m = {m}: valence, heights, growth constant 1, {pairs} five-case pairs; "
                  f"density unbounded on {unbounded_density} trees (arcs without branch points); {dt:.2f} s")
    assert ok


@pytest.mark.parametrize("a", [Weight.uniform(5), Weight.of("1/2", "1/2", "1/4", "1/4", "1/8")],
                         ids=["uniform", "decreasing"])
def test_criterion_10_hausdorff_nesting(a):
    t0 = time.perf_counter()
    r = hausdorff_nesting(4, 3, 5, a)
    dt = time.perf_counter() - t0
    bound = max(a(4), a(5)) + F(1, 16)
    ok = r.small_into_large == 0 and r.excess <= bound and dt < 60
    _report(10, ok, f"excess {r.excess} <= {bound}; small-into-large {r.small_into_large}; {dt:.2f} s")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
