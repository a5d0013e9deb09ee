from __future__ import annotations

import math

import numpy as np
import pytest

from qctree.core import DomainError, Weight, delta
from qctree.planar import (
    compose_word,
    csst_like_angle,
    csst_like_ifs,
    csst_like_weights,
    diameter,
    export_csv,
    geodesic_length,
    hausdorff_distance,
    render_svg,
    sample_points,
    separation_check,
    skeleton,
    skeleton_hausdorff,
    skeleton_nested,
    unit_segment,
    vicsek_branch_diameters,
    vicsek_branch_height,
    vicsek_generators,
    vicsek_ifs,
    vicsek_tile_diameter,
)


def test_csst_like_m3_constants():
    assert csst_like_angle(3) == pytest.approx(math.pi / 6)
    assert csst_like_weights(3)[2] == pytest.approx(0.25)
    psi = csst_like_ifs(3)
    assert psi[2].rotation == pytest.approx(math.pi / 2)
    assert abs(psi[0](0.5)) < 1e-15 and abs(psi[1](-0.5)) < 1e-15
    assert psi[2](0.5) == pytest.approx(0.25j)


def test_csst_like_needs_three_maps():
    with pytest.raises(DomainError):
        csst_like_ifs(2)


def test_vicsek_maps():
    phi = vicsek_ifs()
    assert phi[0](0) == pytest.approx((-2 - 2j) / 3)
    assert phi[4](0) == 0
    assert phi[2](1 + 1j) == pytest.approx(1 + 1j)


def test_skeleton_depth_one_m3():
    segs = skeleton(csst_like_ifs(3), unit_segment(), 1)
    want = [{-0.5, 0}, {0, 0.5}, {0, 0.25j}]
    assert len(segs) == 3
    for s, w in zip(segs, want):
        assert all(min(abs(z - c) for c in w) < 1e-15 for z in s)


def test_skeleton_depth_zero_is_generators():
    assert np.array_equal(skeleton(vicsek_ifs(), vicsek_generators(), 0), vicsek_generators())


def test_vicsek_depth_one():
    segs = skeleton(vicsek_ifs(), vicsek_generators(), 1)
    assert len(segs) == 20
    assert np.allclose(np.abs(segs[:, 1] - segs[:, 0]), math.sqrt(2) / 3)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_composed_scale_matches_delta(m):
    ifs = csst_like_ifs(m)
    w = csst_like_weights(m)
    for word in [(1, 3), (m, 2, 1), (2, m, m)]:
        expected = math.prod(w[i - 1] for i in word)
        assert compose_word(ifs, word).scale == pytest.approx(expected, rel=1e-14)
    # uniform half-weights give the exact rational bookkeeping for letters 1, 2
    assert compose_word(ifs, (1, 2, 2)).scale == float(delta((1, 2, 2), Weight.uniform(2)))


def test_hausdorff_examples():
    s = sample_points(unit_segment())
    assert hausdorff_distance(s, s) == 0
    j0 = skeleton(csst_like_ifs(3), unit_segment(), 0)
    j1 = skeleton(csst_like_ifs(3), unit_segment(), 1)
    assert skeleton_hausdorff(j0, j1) == pytest.approx(0.25, abs=1e-12)
    seq = [skeleton_hausdorff(skeleton(csst_like_ifs(3), unit_segment(), n),
                              skeleton(csst_like_ifs(3), unit_segment(), n + 1)) for n in range(6)]
    assert all(x > y for x, y in zip(seq, seq[1:]))


@pytest.mark.parametrize("m,depth", [(3, 4), (6, 3)])
def test_csst_like_separation(m, depth):
    r = separation_check(csst_like_ifs(m), unit_segment(), depth)
    assert r.passed and r.min_distance > 0


def test_vicsek_tiles_one_and_three_far_apart():
    r = separation_check(vicsek_ifs(), vicsek_generators(), 3, letters=[1, 3])
    assert r.min_distance >= 2 / 3 - 0.05


@pytest.mark.parametrize("m", [3, 4, 5])
def test_geodesic_length_and_nesting(m):
    prev = None
    for n in range(5):
        segs = skeleton(csst_like_ifs(m), unit_segment(), n)
        assert geodesic_length(segs, -0.5, 0.5) == pytest.approx(1.0, abs=1e-9)
        if prev is not None:
            assert skeleton_nested(prev, segs)
        prev = segs


def test_nesting_detects_missing_piece():
    fine = np.array([[-0.5, 0.0]], dtype=complex)
    assert not skeleton_nested(unit_segment(), fine)


def test_diameter_collinear_and_square():
    assert diameter(np.array([0, 1, 2, 3], dtype=complex)) == 3
    assert diameter(np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j, 0])) == pytest.approx(2 * math.sqrt(2))


def test_vicsek_formula_values():
    assert vicsek_branch_height(()) == pytest.approx(1 / math.sqrt(2))
    assert vicsek_branch_height((5,)) == pytest.approx(1 / (3 * math.sqrt(2)))
    assert vicsek_branch_height((1, 2)) == pytest.approx(1 / (9 * math.sqrt(2)))
    with pytest.raises(DomainError):
        vicsek_branch_height((6,))


def test_vicsek_measured_geometry():
    # the maps fix the four corners of [-1, 1]^2, so diam V = 2 sqrt 2
    for n in range(3):
        assert vicsek_tile_diameter((5,) * n) == pytest.approx(2 * math.sqrt(2) * 3.0**-n, abs=1e-12)
    assert vicsek_branch_diameters(()) == pytest.approx([math.sqrt(2)] * 4)
    assert vicsek_branch_diameters((3,)) == pytest.approx([math.sqrt(2) / 3] * 4)


def test_render_svg(tmp_path):
    segs = skeleton(csst_like_ifs(3), unit_segment(), 1)
    text = render_svg(segs, tmp_path / "t.svg").read_text()
    assert text.count("<line") == 3 and text.rstrip().endswith("</svg>")
    empty = render_svg(np.zeros((0, 2), dtype=complex), tmp_path / "e.svg").read_text()
    assert "<svg" in empty and "<line" not in empty


def test_export_csv(tmp_path):
    segs = skeleton(vicsek_ifs(), vicsek_generators(), 5)
    rows = export_csv(segs, tmp_path / "v.csv").read_text().splitlines()
    assert rows[0] == "x1,y1,x2,y2" and len(rows) - 1 == 12500


def test_export_errors_name_path(tmp_path):
    bad = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match="missing"):
        export_csv(unit_segment(), bad)
