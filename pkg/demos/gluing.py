"""
Making a finite tree uniformly branching
========================================

Step 1 evens out the short branches, step 2 raises every branch point to
valence m, step 3 hangs scaled copies of the model tree on double points.
"""

import random
from fractions import Fraction

from qctree import Weight, branch_heights, doubling_bound, step1_uniform_growth, step2_uniform_valence
from qctree.gluing import dyadic_vertex_levels, random_geodesic_tree, step3_attach, verify_tree_properties

rng = random.Random(3)
T = random_geodesic_tree(14, 5, rng)
print(len(T.vertices), "vertices, branch points", T.branch_points())


def show(tree, label):
    print(label)
    for p in tree.branch_points():
        print("  ", p, [str(h) for h in branch_heights(tree, p)])


show(T, "input")
T1 = step1_uniform_growth(T)
show(T1, "after step 1")
m = 5
T2 = step2_uniform_valence(T1, m)
show(T2, "after step 2")

for r in verify_tree_properties(T2):
    print(r.to_json())

# step 3 on a short path, with points placed at spacing delta^n
path = random_geodesic_tree(3, 2, random.Random(0))
P, levels = dyadic_vertex_levels(path, Fraction(1, 4), 1)
T3 = step3_attach(P, levels, 3, Weight.uniform(3), Fraction(1, 4))
print(len(T3.vertices), "vertices after step 3;", len(T3.branch_points()), "branch points")

print("doubling bound for N=5, C=2:", doubling_bound(5, 2))
