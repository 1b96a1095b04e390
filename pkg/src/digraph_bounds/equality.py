"""When do the walk-count bounds hold with equality?

For a strongly connected digraph without sinks, the Liu bounds at
``(k, L)`` and the Xu bounds at ``(k, M, N)`` are tight exactly when the
ratio ``d_i^{(k+1)+} / d_i^{k+}`` is constant (average (k+1)-outdegree
regular) or constant on each block of a cyclic r-partition
(r-quasiregular), with ``r = gcd(h, L)`` or ``gcd(h, M + N)``. In that case
``rho**r`` is an integer. Everything here is decided in exact arithmetic;
floats only appear in the final root check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bounds import BoundParams, BoundResult, liu_bounds, real_root, xu_bounds
from .graph import Digraph, NotStronglyConnectedError, cyclic_structure, scc
from .walks import WalkTable, reach_pattern, walk_table

__all__ = [
    "RootCheck",
    "EqualityReport",
    "check_regular",
    "check_quasiregular",
    "block_constants",
    "root_of_integer_check",
    "equality_diagnosis",
]


@dataclass(frozen=True)
class RootCheck:
    rho: float
    r: int
    nearest: int
    verdict: bool


def root_of_integer_check(rho: float, r: int, tol: float = 1e-6) -> RootCheck:
    """Is ``rho**r`` within ``tol`` of an integer?"""
    if rho < 0 or r < 1 or tol <= 0:
        raise ValueError("need rho >= 0, r >= 1 and tol > 0")
    power = rho**r
    nearest = round(power)
    return RootCheck(rho, r, nearest, abs(power - nearest) <= tol)


def _ratios(wt: WalkTable, kappa: int) -> list[Fraction]:
    if kappa < 1:
        raise ValueError("kappa must be at least 1")
    if kappa > wt.kmax:
        raise ValueError(f"kappa={kappa} exceeds the walk table (kmax={wt.kmax})")
    if wt.has_zero(kappa - 1):
        raise ValueError("zero walk counts: trim sinks first")
    return [Fraction(p, q) for p, q in zip(wt[kappa], wt[kappa - 1])]


def check_regular(wt: WalkTable, kappa: int) -> tuple[bool, Fraction | None]:
    """Exact test that ``d_i^{kappa+} / d_i^{(kappa-1)+}`` is one constant."""
    ratios = _ratios(wt, kappa)
    if all(x == ratios[0] for x in ratios):
        return True, ratios[0]
    return False, None


def check_quasiregular(
    g: Digraph, wt: WalkTable, kappa: int, r: int
) -> tuple[bool, tuple[Fraction, ...] | None, tuple[int, ...] | None]:
    """Is the ratio constant on every block of the cyclic r-partition?

    Returns ``(flag, block constants, partition)``; the partition maps each
    vertex to a block in ``0..r-1`` and is reported even when the ratios
    are not blockwise constant. A non-divisor ``r`` gives ``(False, None,
    None)``.
    """
    if g.n == 0 or not scc(g).is_strongly_connected:
        raise NotStronglyConnectedError("quasiregularity needs a strongly connected digraph")
    if r < 2:
        raise ValueError("r must be at least 2")
    cs = cyclic_structure(g)
    if cs.h % r:
        return False, None, None
    part = cs.partition_for(r)
    ratios = _ratios(wt, kappa)
    consts: list[Fraction | None] = [None] * r
    for v, b in enumerate(part):
        if consts[b] is None:
            consts[b] = ratios[v]
        elif consts[b] != ratios[v]:
            return False, None, part
    return True, tuple(consts), part


def block_constants(
    g: Digraph, wt: WalkTable, kappa: int, r: int
) -> tuple[tuple[Fraction, ...], Fraction, float]:
    """Block constants, their exact product, and ``product ** (1/r)``.

    The product equals ``rho**r`` whenever the quasiregularity holds.
    """
    ok, consts, _ = check_quasiregular(g, wt, kappa, r)
    if not ok:
        raise ValueError(f"digraph is not average {kappa}-outdegree {r}-quasiregular")
    product = math.prod(consts, start=Fraction(1))
    return consts, product, real_root(product, r)


@dataclass(frozen=True)
class EqualityReport:
    """Equality diagnosis for one Liu or Xu parameter set.

    ``clause`` is ``"regular"``, ``"quasiregular"``, ``"both"`` or ``"none"``.
    The theory makes both sides tight together, so ``equality_predicted``
    covers the lower and the upper bound alike. ``rho_power`` is the exact
    value of ``rho**r_used`` when equality is predicted.
    """

    params: BoundParams
    applicable: bool
    reason: str | None = None
    kappa: int = 1
    h: int | None = None
    r_used: int | None = None
    regular: bool = False
    c: Fraction | None = None
    quasiregular: bool = False
    partition: tuple[int, ...] | None = None
    block_constants: tuple[Fraction, ...] | None = None
    clause: str = "none"
    equality_predicted: bool = False
    bounds_collapse: bool | None = None
    rho_power: Fraction | None = None
    root_check: RootCheck | None = None
    bound: BoundResult | None = None


def equality_diagnosis(g: Digraph, params: BoundParams, tol: float = 1e-6) -> EqualityReport:
    """Predict equality of a Liu/Xu bound from outdegree structure.

    The prediction is cross-checked against the exact bound extrema
    (``bounds_collapse``); a disagreement would contradict the theory and
    raises ``RuntimeError``.
    """
    if params.family not in ("liu", "xu"):
        raise ValueError("equality diagnosis covers the liu and xu families")
    if g.n == 0:
        raise ValueError("equality diagnosis of an empty digraph")
    if g.sinks():
        raise ValueError("the digraph has sinks; trim it first")
    k = params.k
    kappa = k + 1
    if params.family == "liu":
        span = params.L
        order = k + params.L
    else:
        span = params.M + params.N
        order = k + max(params.M, params.N)
    wt = walk_table(g, max(order, kappa))
    if params.family == "liu":
        bound = liu_bounds(wt, k, params.L)
    else:
        bound = xu_bounds(wt, reach_pattern(g, params.M), k, params.M, params.N)

    if not scc(g).is_strongly_connected:
        return EqualityReport(
            params, False, "digraph is not strongly connected", kappa=kappa,
            bounds_collapse=bound.collapsed, bound=bound,
        )

    h = cyclic_structure(g).h
    r = math.gcd(h, span)
    regular, c = check_regular(wt, kappa)
    quasi, consts, part = False, None, None
    if r > 1:
        quasi, consts, part = check_quasiregular(g, wt, kappa, r)
    predicted = regular or quasi
    clause = {(True, True): "both", (True, False): "regular",
              (False, True): "quasiregular", (False, False): "none"}[(regular, quasi)]

    collapse = bound.collapsed
    if collapse != predicted:
        raise RuntimeError(
            f"equality structure ({clause}) disagrees with exact bound extrema"
        )

    rho_power = check = None
    if predicted:
        rho_power = c**r if regular else math.prod(consts, start=Fraction(1))
        check = root_of_integer_check(real_root(rho_power, r), r, tol)
    return EqualityReport(
        params, True, None, kappa, h, r, regular, c, quasi, part, consts, clause,
        predicted, collapse, rho_power, check, bound,
    )
