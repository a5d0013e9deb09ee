"""
Exact distances and chain lengths
=================================

Points of the tree are eventually periodic codes. Distances come out as
exact rationals; chain lengths approach them from above.
"""

from fractions import Fraction

from qctree import Weight, code, distance_exact, chain_length

a = Weight.of("1/2", "1/2", "1/4", "1/8")

# the two ends of the spine are always at distance 1
print("d([1^inf], [2^inf]) =", distance_exact(code("(1)"), code("(2)"), a))

# the gate point [12^inf] has a second name for every letter j >= 2
for j in range(2, 5):
    print(f"d([12^inf], [{j}1^inf]) =", distance_exact(code("1,(2)"), code(f"{j},(1)"), a))

# a few less trivial pairs
pairs = [("(3)", "(1)"), ("(1,3)", "(2)"), ("4,4,(2)", "3,(1)")]
for x, y in pairs:
    print(f"d({x}, {y}) =", distance_exact(code(x), code(y), a))

# chain lengths over the level-n graphs converge to the exact value
x, y = code("(1,3)"), code("(2)")
exact = distance_exact(x, y, a)
for n in (1, 2, 4, 8, 16, 32):
    c = chain_length(x, y, n, a)
    print(f"n={n:2d}  chain={float(c.value):.12f}  gap={float(c.value - exact):.3e}")

# scaling by a first letter multiplies distances by its weight
i = 3
lhs = distance_exact(x.prepend((i,)), y.prepend((i,)), a)
assert lhs == a(i) * exact == Fraction(11, 14) / 4
print("scaled distance:", lhs)
