"""
Planar pictures
===============

Skeletons of the planar tree for m = 3..5 and of the Vicsek fractal, written
as SVG and CSV next to this script.
"""

from pathlib import Path

from qctree.planar import (
    csst_like_ifs,
    export_csv,
    geodesic_length,
    render_svg,
    skeleton,
    skeleton_hausdorff,
    unit_segment,
    vicsek_generators,
    vicsek_ifs,
    vicsek_tile_diameter,
)

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

for m in (3, 4, 5):
    segs = skeleton(csst_like_ifs(m), unit_segment(), 5)
    print(f"m={m}: {len(segs)} segments, spine length {geodesic_length(segs, -0.5, 0.5):.12f}")
    render_svg(segs, out / f"tree_m{m}.svg")

# Hausdorff distance between consecutive skeletons halves each step
prev = skeleton(csst_like_ifs(3), unit_segment(), 0)
for n in range(1, 6):
    cur = skeleton(csst_like_ifs(3), unit_segment(), n)
    print(f"d_H(J_{n - 1}, J_{n}) = {skeleton_hausdorff(prev, cur):.6f}")
    prev = cur

v = skeleton(vicsek_ifs(), vicsek_generators(), 4)
export_csv(v, out / "vicsek.csv")
render_svg(v, out / "vicsek.svg")

# the corners of [-1, 1]^2 are fixed points, so the diameter is 2 sqrt 2
print("diam V ~", vicsek_tile_diameter(()))
print("wrote", sorted(p.name for p in out.iterdir()))
