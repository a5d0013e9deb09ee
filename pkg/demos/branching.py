"""
Branch points, tiles and dimension
==================================

Branch points sit at [u12^inf]; tiles are images of the whole tree under
word compositions. The Moran exponent is the Ahlfors regularity dimension.
"""

import math

from qctree import Weight, branch_points, moran_dimension, tiles, verify_uniform_branching
from qctree.dimension import dimension_bound_infinity, halving_weight
from qctree.structure import neighbor_tiles

a = Weight.of("1/2", "1/2", "1/4", "1/4")

for bp in branch_points(1, a):
    print(f"stem={bp.stem!s:8} point={bp.code!s:10} height={bp.height_H}")

# level-2 tiles and the points they share with their neighbors
for t in tiles(2, a)[:6]:
    print("".join(map(str, t.word)), t.diameter, [str(p) for p in t.boundary])

print("neighbors of tile 1,2:", [("".join(map(str, n.word)), str(n.ratio)) for n in neighbor_tiles((1, 2), a)])

for r in verify_uniform_branching(2, a, samples=100):
    print(r.to_json())

# Moran exponents
for m in range(2, 7):
    s = moran_dimension(m, Weight.uniform(m)).exponent
    print(f"m={m}  s={s:.12f}  log2(m)={math.log2(m):.12f}")
print("skewed weight:", moran_dimension(4, a).exponent)

# infinitely many letters with a(j) = 2^(1-j): the 1.5-sum is below 1
print("certificate at s=1.5:", dimension_bound_infinity(halving_weight(), 1.5))
