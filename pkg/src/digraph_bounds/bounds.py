"""Spectral radius bounds from walk counts.

Every family returns a :class:`BoundResult`. For the walk-count families
(Liu, Xu, Kolotilina) the extrema are chosen on exact rationals and only
the final root is taken in floating point; the exact quantity bounding
``rho**degree`` is kept alongside the float so callers can test equality
without tolerances.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

import numpy as np

from .graph import Digraph
from .walks import ReachPattern, WalkTable, ratio_compare, reach_pattern, walk_table

__all__ = [
    "BudgetError",
    "BoundParams",
    "BoundResult",
    "SweepTable",
    "frobenius_bounds",
    "weighted_bounds",
    "liu_bounds",
    "xu_bounds",
    "kolotilina_bounds",
    "kolotilina_best",
    "bound_sweep",
    "compute_tier",
    "integer_root",
    "rational_root",
    "real_root",
]

FAMILIES = ("frobenius", "weighted", "liu", "xu", "kolotilina")
ALPHA_TIE = 1e-12


class BudgetError(ValueError):
    """Requested walk order exceeds what the walk table holds."""


@dataclass(frozen=True)
class BoundParams:
    family: str
    k: int = 0
    L: int = 1
    M: int = 1
    N: int = 0
    alpha: float | None = None
    grid_step: float | None = None
    weights: tuple | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown bound family {self.family!r}")
        if self.k < 0 or self.N < 0:
            raise ValueError("k and N must be nonnegative")
        if self.L < 1 or self.M < 1:
            raise ValueError("L and M must be positive")
        if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.grid_step is not None and not 0.0 < self.grid_step <= 0.5:
            raise ValueError("grid step must lie in (0, 0.5]")

    @property
    def order(self) -> int:
        """Highest walk length the family needs (its compute cost)."""
        if self.family in ("liu", "kolotilina"):
            return self.k + self.L
        if self.family == "xu":
            return self.k + max(self.M, self.N)
        return 1

    def label(self) -> str:
        if self.family in ("liu", "kolotilina"):
            return f"({self.k},{self.L})"
        if self.family == "xu":
            if self.M == 1:
                return f"({self.k},{self.N})"
            return f"({self.k},{self.M},{self.N})"
        return ""


@dataclass(frozen=True)
class BoundResult:
    """One lower/upper pair on the spectral radius.

    ``lower_power``/``upper_power`` are the exact rationals bounding
    ``rho**degree`` when available (``None`` for irrational Kolotilina
    mixtures or float weights). ``arg_lower``/``arg_upper`` hold the vertex
    index, or an ``(i, j)`` pair for the pattern-restricted families.
    """

    lower: float
    upper: float
    arg_lower: int | tuple[int, int]
    arg_upper: int | tuple[int, int]
    params: BoundParams
    degree: int = 1
    lower_power: Fraction | None = None
    upper_power: Fraction | None = None
    terms: tuple[Fraction, ...] | None = None
    alpha_lower: float | None = None
    alpha_upper: float | None = None
    lower_alpha_independent: bool = False
    upper_alpha_independent: bool = False

    @property
    def alpha_independent(self) -> bool:
        return self.lower_alpha_independent and self.upper_alpha_independent

    @property
    def lower_exact(self) -> Fraction | None:
        """The lower bound itself as a rational, when it is one."""
        return None if self.lower_power is None else rational_root(self.lower_power, self.degree)

    @property
    def upper_exact(self) -> Fraction | None:
        return None if self.upper_power is None else rational_root(self.upper_power, self.degree)

    @property
    def collapsed(self) -> bool | None:
        """Exact ``lower == upper`` test; ``None`` if either side is inexact."""
        if self.lower_power is None or self.upper_power is None:
            return None
        return self.lower_power == self.upper_power

    def term_values(self) -> list[float] | None:
        if self.terms is None:
            return None
        return [real_root(t, self.degree) for t in self.terms]


def integer_root(n: int, L: int) -> int | None:
    """Exact L-th root of a nonnegative integer, or ``None``."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or L == 1:
        return n
    x = 1 << -(-n.bit_length() // L)  # upper bound on the root
    while True:
        y = ((L - 1) * x + n // x ** (L - 1)) // L
        if y >= x:
            break
        x = y
    return x if x**L == n else None


def rational_root(q: Fraction, L: int) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    p = integer_root(q.numerator, L)
    if p is None:
        return None
    d = integer_root(q.denominator, L)
    return None if d is None else Fraction(p, d)


def real_root(q: Fraction | int, L: int) -> float:
    """``q ** (1/L)`` as a float; exact whenever the root is rational."""
    q = Fraction(q)
    if q == 0:
        return 0.0
    exact = rational_root(q, L)
    if exact is not None:
        return float(exact)
    return math.exp((math.log(q.numerator) - math.log(q.denominator)) / L)


def _log(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


def _check_budget(wt: WalkTable, order: int) -> None:
    if order > wt.kmax:
        raise BudgetError(f"needs walks of length {order} but the table stops at {wt.kmax}")


def _check_denominators(wt: WalkTable, k: int) -> None:
    if wt.has_zero(k):
        raise ValueError(
            f"zero {k}-outdegree: the digraph has sinks; trim it before using k={k}"
        )


def _extrema(keys: Sequence, fracs: Sequence[tuple[int, int]]):
    """Positions of the first minimum and first maximum of exact ratios."""
    cmp = cmp_to_key(lambda a, b: ratio_compare(*fracs[a], *fracs[b]))
    idx = range(len(fracs))
    lo = min(idx, key=cmp)
    hi = max(idx, key=cmp)
    # max() keeps the first maximal element as well
    return keys[lo], keys[hi], lo, hi


def frobenius_bounds(g: Digraph) -> BoundResult:
    """Minimum and maximum outdegree."""
    if g.n == 0:
        raise ValueError("bounds of an empty digraph")
    d = g.outdegrees()
    lo = min(range(g.n), key=d.__getitem__)
    hi = max(range(g.n), key=d.__getitem__)
    return BoundResult(
        float(d[lo]), float(d[hi]), lo, hi, BoundParams("frobenius"),
        lower_power=Fraction(d[lo]), upper_power=Fraction(d[hi]),
        terms=tuple(Fraction(v) for v in d),
    )


def weighted_bounds(g: Digraph, x: Sequence) -> BoundResult:
    """Extremes of ``(A x)_i / x_i`` for a strictly positive weight vector.

    Integer or ``Fraction`` weights are evaluated exactly.
    """
    if g.n == 0:
        raise ValueError("bounds of an empty digraph")
    if len(x) != g.n:
        raise ValueError(f"weight vector has length {len(x)}, expected {g.n}")
    if any(not xi > 0 for xi in x):
        raise ValueError("weights must be strictly positive")
    exact = all(isinstance(xi, numbers.Rational) for xi in x)
    w = [Fraction(xi) for xi in x] if exact else [float(xi) for xi in x]
    ratios = [sum(m * w[j] for j, m in g.successors(i)) / w[i] for i in range(g.n)]
    lo = min(range(g.n), key=ratios.__getitem__)
    hi = max(range(g.n), key=ratios.__getitem__)
    params = BoundParams("weighted", weights=tuple(x))
    if exact:
        return BoundResult(
            float(ratios[lo]), float(ratios[hi]), lo, hi, params,
            lower_power=ratios[lo], upper_power=ratios[hi], terms=tuple(ratios),
        )
    return BoundResult(float(ratios[lo]), float(ratios[hi]), lo, hi, params)


def liu_bounds(wt: WalkTable, k: int, L: int) -> BoundResult:
    """Extremes of ``(d_i^{(k+L)+} / d_i^{k+})^{1/L}`` over all vertices."""
    params = BoundParams("liu", k=k, L=L)
    _check_budget(wt, k + L)
    if k > 0:
        _check_denominators(wt, k)
    num, den = wt[k + L], wt[k]
    fracs = list(zip(num, den))
    lo, hi, _, _ = _extrema(list(range(wt.n)), fracs)
    terms = tuple(Fraction(p, q) for p, q in fracs)
    return BoundResult(
        real_root(terms[lo], L), real_root(terms[hi], L), lo, hi, params,
        degree=L, lower_power=terms[lo], upper_power=terms[hi], terms=terms,
    )


def _pattern_pairs(pat: ReachPattern) -> list[tuple[int, int]]:
    pairs = list(pat.pairs())
    if not pairs:
        raise ValueError(f"A^{pat.M} is zero: no walks of length {pat.M}")
    return pairs


def xu_bounds(wt: WalkTable, pat: ReachPattern, k: int, M: int, N: int) -> BoundResult:
    """Pattern-restricted extremes of
    ``(d_i^{(k+M)+} d_j^{(k+N)+} / (d_i^{k+} d_j^{k+}))^{1/(M+N)}`` over pairs
    ``(i, j)`` joined by a length-M walk.
    """
    params = BoundParams("xu", k=k, M=M, N=N)
    if pat.M != M:
        raise ValueError(f"pattern is for length {pat.M}, not M={M}")
    _check_budget(wt, k + max(M, N))
    if k > 0:
        _check_denominators(wt, k)
    pairs = _pattern_pairs(pat)
    rm, rn, rk = wt[k + M], wt[k + N], wt[k]
    fracs = [(rm[i] * rn[j], rk[i] * rk[j]) for i, j in pairs]
    lo, hi, ilo, ihi = _extrema(pairs, fracs)
    plo, phi = Fraction(*fracs[ilo]), Fraction(*fracs[ihi])
    return BoundResult(
        real_root(plo, M + N), real_root(phi, M + N), lo, hi, params,
        degree=M + N, lower_power=plo, upper_power=phi,
    )


class _KoloData:
    """Per-pair log ratios for evaluating the Kolotilina mixture at many alphas."""

    def __init__(self, wt: WalkTable, pat: ReachPattern, k: int, L: int):
        if pat.M != L:
            raise ValueError(f"pattern is for length {pat.M}, not L={L}")
        _check_budget(wt, k + L)
        _check_denominators(wt, k)
        if wt.has_zero(k + L):
            raise ValueError("zero row sums: the digraph has sinks; trim it first")
        self.L = L
        self.pairs = _pattern_pairs(pat)
        self.ratio = [Fraction(p, q) for p, q in zip(wt[k + L], wt[k])]
        logs = np.array([_log(r) for r in self.ratio])
        idx = np.array(self.pairs)
        self.li = logs[idx[:, 0]]
        self.lj = logs[idx[:, 1]]
        self.same = np.array([self.ratio[i] == self.ratio[j] for i, j in self.pairs])
        self.root_i = np.array([real_root(self.ratio[i], L) for i, _ in self.pairs])
        self.root_j = np.array([real_root(self.ratio[j], L) for _, j in self.pairs])

    def values(self, alpha: float) -> np.ndarray:
        if alpha == 0.0:
            return self.root_j.copy()
        if alpha == 1.0:
            return self.root_i.copy()
        v = np.exp((alpha * self.li + (1.0 - alpha) * self.lj) / self.L)
        v[self.same] = self.root_i[self.same]
        return v

    def exact_power(self, pos: int, alpha: float) -> Fraction | None:
        i, j = self.pairs[pos]
        if alpha == 1.0 or self.ratio[i] == self.ratio[j]:
            return self.ratio[i]
        if alpha == 0.0:
            return self.ratio[j]
        return None


def kolotilina_bounds(
    wt: WalkTable, pat: ReachPattern, k: int, L: int, alpha: float
) -> BoundResult:
    """Kolotilina's mixed bound applied to ``D^{-1} A^L D``, then the L-th root.

    Pair values are ``(p_i^alpha p_j^(1-alpha))^{1/L}`` with
    ``p_i = d_i^{(k+L)+} / d_i^{k+}``, over pairs joined by a length-L walk.
    """
    params = BoundParams("kolotilina", k=k, L=L, alpha=alpha)
    data = _KoloData(wt, pat, k, L)
    v = data.values(alpha)
    lo, hi = int(np.argmin(v)), int(np.argmax(v))
    return BoundResult(
        float(v[lo]), float(v[hi]), data.pairs[lo], data.pairs[hi], params,
        degree=L, lower_power=data.exact_power(lo, alpha),
        upper_power=data.exact_power(hi, alpha),
        alpha_lower=alpha, alpha_upper=alpha,
    )


def alpha_grid(step: float) -> list[float]:
    count = int(round(1.0 / step))
    grid = [round(i * step, 12) for i in range(count + 1) if i * step <= 1.0 + 1e-12]
    if grid[-1] < 1.0:
        grid.append(1.0)
    return grid


def _tied(a: float, b: float) -> bool:
    return abs(a - b) <= ALPHA_TIE * max(1.0, abs(a), abs(b))


def kolotilina_best(
    wt: WalkTable, pat: ReachPattern, k: int, L: int, grid_step: float = 0.01
) -> BoundResult:
    """Best Kolotilina bounds over the alpha grid ``0, step, ..., 1``.

    The lower bound is maximised and the upper minimised separately; ties
    go to the smaller alpha. A side whose value spreads by less than 1e-12
    across the grid is flagged alpha-independent.
    """
    params = BoundParams("kolotilina", k=k, L=L, grid_step=grid_step)
    data = _KoloData(wt, pat, k, L)
    grid = alpha_grid(grid_step)
    lows, highs, arg_lo, arg_hi = [], [], [], []
    for a in grid:
        v = data.values(a)
        arg_lo.append(int(np.argmin(v)))
        arg_hi.append(int(np.argmax(v)))
        lows.append(float(v[arg_lo[-1]]))
        highs.append(float(v[arg_hi[-1]]))

    best_lo = max(lows)
    ia = next(t for t, x in enumerate(lows) if x >= best_lo or _tied(x, best_lo))
    best_hi = min(highs)
    ib = next(t for t, x in enumerate(highs) if x <= best_hi or _tied(x, best_hi))
    return BoundResult(
        lows[ia], highs[ib], data.pairs[arg_lo[ia]], data.pairs[arg_hi[ib]], params,
        degree=L,
        lower_power=data.exact_power(arg_lo[ia], grid[ia]),
        upper_power=data.exact_power(arg_hi[ib], grid[ib]),
        alpha_lower=grid[ia], alpha_upper=grid[ib],
        lower_alpha_independent=max(lows) - min(lows) < ALPHA_TIE,
        upper_alpha_independent=max(highs) - min(highs) < ALPHA_TIE,
    )


def compute_tier(order: int) -> int:
    """Table grouping by highest walk order; orders 1 and 2 share a tier."""
    return max(order, 2)


@dataclass
class SweepTable:
    """All bounds with walk order at most ``budget``, in table order.

    ``liu`` rows are ``(k, L)`` with ``k + L <= budget``; ``xu`` rows use
    ``M = 1`` and ``(k, N)`` with ``N >= 1`` and ``k + N <= budget``;
    ``kolotilina`` rows use ``L = 1`` and the alpha grid.
    """

    budget: int
    liu: list[BoundResult] = field(default_factory=list)
    xu: list[BoundResult] = field(default_factory=list)
    kolotilina: list[BoundResult] = field(default_factory=list)

    def tier_best(self, rows: list[BoundResult]) -> dict[int, tuple[float, float]]:
        """Tightest (largest lower, smallest upper) per compute tier."""
        best: dict[int, tuple[float, float]] = {}
        for r in rows:
            t = compute_tier(r.params.order)
            lo, hi = best.get(t, (-math.inf, math.inf))
            best[t] = (max(lo, r.lower), min(hi, r.upper))
        return best

    def liu_markers(self) -> list[tuple[bool, bool]]:
        """Tightest lower/upper among Liu rows of the top tier."""
        best = self.tier_best(self.liu)
        top = max(best)
        lo, hi = best[top]
        return [
            (compute_tier(r.params.order) == top and _tied(r.lower, lo),
             compute_tier(r.params.order) == top and _tied(r.upper, hi))
            for r in self.liu
        ]

    def xu_markers(self) -> list[tuple[bool, bool]]:
        """Xu sides strictly tighter than every Liu row of the same tier."""
        best = self.tier_best(self.liu)
        marks = []
        for r in self.xu:
            lo, hi = best.get(compute_tier(r.params.order), (math.inf, -math.inf))
            marks.append((
                r.lower > lo and not _tied(r.lower, lo),
                r.upper < hi and not _tied(r.upper, hi),
            ))
        return marks


def bound_sweep(g: Digraph, budget: int, grid_step: float = 0.01) -> SweepTable:
    """Evaluate Liu, Xu (M = 1) and Kolotilina (L = 1) bounds up to ``budget``."""
    if g.n == 0:
        raise ValueError("bounds of an empty digraph")
    if budget < 1:
        raise ValueError("budget must be positive")
    if g.sinks():
        raise ValueError("the digraph has sinks; trim it before sweeping")
    wt = walk_table(g, budget)
    pat1 = reach_pattern(g, 1)
    table = SweepTable(budget)
    for order in range(1, budget + 1):
        for k in range(order):
            table.liu.append(liu_bounds(wt, k, order - k))
            table.xu.append(xu_bounds(wt, pat1, k, 1, order - k))
    for k in range(budget):
        table.kolotilina.append(kolotilina_best(wt, pat1, k, 1, grid_step))
    return table
