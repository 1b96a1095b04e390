"""
When the bounds are exact
=========================

Regular and cyclically structured digraphs make the lower and upper bounds
coincide. Here the 2-vertex multiarc graph has rho squared equal to 2.
"""

# %%
from digraph_bounds.bounds import BoundParams
from digraph_bounds.equality import equality_diagnosis
from digraph_bounds.graph import Digraph, cyclic_partition, index_of_imprimitivity, verify_cyclic_blocks

g = Digraph.from_arcs([(1, 2, 2), (2, 1)])
print("index of imprimitivity:", index_of_imprimitivity(g))

# %%
# An odd span cannot see the 2-cyclic structure.
for L in (1, 2, 3, 4):
    rep = equality_diagnosis(g, BoundParams("liu", k=0, L=L))
    print(f"L={L}: r={rep.r_used} clause={rep.clause} bounds=[{rep.bound.lower:.4f}, {rep.bound.upper:.4f}]"
          + (f" rho^{rep.r_used}={rep.rho_power}" if rep.equality_predicted else ""))

# %%
# A 6-cycle with a chord back two steps: h = 2, blocks of A^2 carry the spectrum.
c6 = Digraph.from_arcs([(i, i % 6 + 1) for i in range(1, 7)] + [(1, 4)])
h = index_of_imprimitivity(c6)
print("h =", h, "partition:", cyclic_partition(c6, h))
for block in verify_cyclic_blocks(c6, h, 2):
    print(block)
