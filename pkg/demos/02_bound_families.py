"""
Comparing the bound families
============================

Liu, Xu and Kolotilina bounds on the same digraph, plus the full sweep that
the command line prints with ``digraph-bounds paper-tables``.
"""

# %%
from importlib import resources

from digraph_bounds.bounds import bound_sweep, kolotilina_bounds, alpha_grid, liu_bounds, xu_bounds
from digraph_bounds.graph import load_digraph
from digraph_bounds.walks import reach_pattern, walk_table

with (resources.files("digraph_bounds") / "data" / "g1.edges").open() as fh:
    g = load_digraph(fh)
wt = walk_table(g, 4)
pat = reach_pattern(g, 1)

# %%
# With the same total walk length the Liu bound is never looser than Xu.
for k, N in [(0, 2), (1, 2), (2, 1)]:
    liu = liu_bounds(wt, k, 1 + N)
    xu = xu_bounds(wt, pat, k, 1, N)
    print(f"k={k} M=1 N={N}: liu [{liu.lower:.4f}, {liu.upper:.4f}]  xu [{xu.lower:.4f}, {xu.upper:.4f}]")

# %%
# Kolotilina's mixture as alpha moves across [0, 1]; alpha = 0.5 is Xu with M = N.
for a in alpha_grid(0.1):
    r = kolotilina_bounds(wt, pat, 2, 1, a)
    print(f"alpha={a:.1f}: [{r.lower:.4f}, {r.upper:.4f}]")

# %%
table = bound_sweep(g, 4)
for tier, (lo, hi) in sorted(table.tier_best(table.liu).items()):
    print(f"walks of length <= {tier}: best Liu bracket [{lo:.4f}, {hi:.4f}]")
marked = [(r.params.label(), m) for r, m in zip(table.liu, table.liu_markers()) if any(m)]
print("rows achieving it:", marked)
