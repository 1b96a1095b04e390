"""Independent spectral radius oracles.

These never feed the bounds; they exist to check them. Two unrelated
routes are provided:

* shifted power iteration on ``A_c / s + I`` for each nontrivial strongly
  connected component (the shift makes imprimitive blocks primitive), and
* an exact integer characteristic polynomial (Faddeev-LeVerrier) whose
  largest real root is isolated with a Sturm sequence in exact rationals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .graph import Digraph, scc

__all__ = [
    "OracleResult",
    "spectral_radius_oracle",
    "perron_vector",
    "characteristic_polynomial",
    "exact_charpoly_radius",
]

log = logging.getLogger(__name__)

MAX_ITER = 1_000_000
CHARPOLY_MAX_N = 16


@dataclass(frozen=True)
class OracleResult:
    rho: float
    method: str
    iterations: int
    residual: float
    converged: bool = True
    per_component: dict[int, float] = field(default_factory=dict)
    vector: np.ndarray | None = None


def _power_iteration(a: sp.csr_matrix, tol: float, max_iter: int):
    """Perron root of irreducible ``a`` via power iteration on ``a/s + I``.

    ``s`` is the largest row sum, so the shifted matrix has its Perron root
    in ``[1, 2]`` and imprimitive components stop oscillating. Iteration
    stops when the Collatz-Wielandt bracket ``[min (Bx)_i/x_i, max (Bx)_i/x_i]``
    is narrower than ``tol / s``; both ends bound the Perron root of ``B``.
    Above 1 the tolerance is relative, since an absolute bracket of 1e-10 is
    beyond double precision once the root reaches the thousands.
    """
    n = a.shape[0]
    scale = float(a.sum(axis=1).max())
    b = a / scale
    x = np.ones(n) / n
    lo, hi = 0.0, np.inf
    for it in range(1, max_iter + 1):
        y = b @ x + x
        q = y / x
        lo, hi = q.min(), q.max()
        x = y / y.sum()
        width = (hi - lo) * scale
        if width < tol * max(1.0, (0.5 * (lo + hi) - 1.0) * scale):
            break
    else:
        it = max_iter
    rho = float((0.5 * (lo + hi) - 1.0) * scale)
    residual = float(np.linalg.norm(a @ x - rho * x))
    return rho, x, it, residual, bool(width < tol * max(1.0, rho))


def spectral_radius_oracle(g: Digraph, tol: float = 1e-10, max_iter: int = MAX_ITER) -> OracleResult:
    """Spectral radius as the largest component Perron root.

    Trivial components (one vertex, no self-loop) contribute 0. For a
    strongly connected digraph ``vector`` is the Perron vector scaled to
    sum to one.
    """
    if g.n == 0:
        raise ValueError("spectral radius of an empty digraph")
    if tol <= 0:
        raise ValueError("tol must be positive")
    dec = scc(g)
    full = sp.csr_matrix(g.adjacency(dtype=float))
    per: dict[int, float] = {}
    total_it, worst, converged = 0, 0.0, True
    vec = None
    for c, members in enumerate(dec.components):
        if dec.is_trivial(g, c):
            per[c] = 0.0
            continue
        idx = sorted(members)
        rho, x, it, res, ok = _power_iteration(full[idx][:, idx], tol, max_iter)
        per[c] = rho
        total_it += it
        worst = max(worst, res)
        converged &= ok
        if dec.is_strongly_connected:
            vec = np.zeros(g.n)
            vec[idx] = x
    if not converged:
        log.warning("power iteration hit the iteration cap; estimate may be loose")
    return OracleResult(
        max(per.values()), "shifted-power", total_it, worst, converged, per, vec
    )


def perron_vector(g: Digraph, tol: float = 1e-12) -> np.ndarray:
    """Positive eigenvector of a strongly connected digraph, summing to one."""
    res = spectral_radius_oracle(g, tol)
    if res.vector is None:
        raise ValueError("Perron vector requires a strongly connected digraph")
    return res.vector


def characteristic_polynomial(g: Digraph) -> list[int]:
    """Integer coefficients of ``det(mu I - A)``, highest degree first."""
    n = g.n
    a = [[0] * n for _ in range(n)]
    for (i, j), m in g.arcs.items():
        a[i][j] = m
    coeffs = [1]
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[-1]
        # M_k = A M_{k-1} + c_{k-1} I
        mk = [
            [sum(a[i][t] * mk[t][j] for t in range(n) if a[i][t]) + (c_prev if i == j else 0)
             for j in range(n)]
            for i in range(n)
        ]
        trace = sum(a[i][t] * mk[t][i] for i in range(n) for t in range(n) if a[i][t])
        if trace % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier coefficient")
        coeffs.append(-trace // k)
    return coeffs


def _poly_rem(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while len(p) >= len(q) and any(p):
        f = p[0] / q[0]
        for t in range(len(q)):
            p[t] -= f * q[t]
        p.pop(0)
    while p and p[0] == 0:
        p.pop(0)
    return p


def _sturm_chain(coeffs: list[int]) -> list[list[Fraction]]:
    p0 = [Fraction(c) for c in coeffs]
    deg = len(coeffs) - 1
    p1 = [c * (deg - t) for t, c in enumerate(p0[:-1])]
    chain = [p0, p1]
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x: Fraction) -> int:
    signs = []
    for poly in chain:
        v = Fraction(0)
        for c in poly:
            v = v * x + c
        if v:
            signs.append(v > 0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def exact_charpoly_radius(g: Digraph, tol: float = 1e-10) -> float:
    """Largest real root of the characteristic polynomial.

    Roots are counted with a Sturm sequence and bisected on
    ``[0, max outdegree]``, which always contains the spectral radius.
    """
    if g.n == 0:
        raise ValueError("spectral radius of an empty digraph")
    if g.n > CHARPOLY_MAX_N:
        raise ValueError(f"exact characteristic polynomial limited to n <= {CHARPOLY_MAX_N}")
    coeffs = characteristic_polynomial(g)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()  # factor out mu**m; zero roots do not matter here
    if len(coeffs) == 1:
        return 0.0
    chain = _sturm_chain(coeffs)
    hi = Fraction(max(g.outdegrees()) + 1)
    v_hi = _sign_changes(chain, hi)
    lo = Fraction(0)
    if _sign_changes(chain, lo) - v_hi == 0:
        return 0.0
    while hi - lo > Fraction(tol) / 4:
        mid = (lo + hi) / 2
        if _sign_changes(chain, mid) - v_hi > 0:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)
