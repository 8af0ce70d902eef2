"""Quadrature building blocks for integrands on the unit circle.

Three engines cover every integrand shape the package meets:

* uniform trapezoid sums with node doubling, the cheapest high-accuracy rule
  for smooth periodic integrands;
* fixed Gauss-Legendre panels whose subpanel widths grade geometrically into
  an endpoint, for integrable endpoint singularities (log-type or |t|^alpha);
* adaptive Gauss-Legendre bisection for piecewise-smooth integrands whose
  awkward points are only approximately known.

All functions take vectorized callables: f(ndarray of angles) -> ndarray.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = [
    "gl_rule",
    "periodic_mean_doubling",
    "graded_edges",
    "integrate_edges",
    "adaptive_gl",
    "singular_circle_mean",
    "bisect_roots",
]

TWO_PI = 2.0 * np.pi


@lru_cache(maxsize=None)
def gl_rule(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def periodic_mean_doubling(
    f,
    start_nodes: int,
    max_nodes: int,
    rel_tol: float,
    transform=None,
    absolute: bool = False,
):
    """Mean of f over [0, 2pi) by uniform sampling with node doubling.

    Doubling interleaves midpoints so earlier samples are reused. Convergence
    is judged on transform(mean) between successive refinements: relative by
    default, absolute when ``absolute`` (for log-scale integrands whose mean
    may legitimately sit near zero). Returns (raw_mean, transformed, err, nodes)
    where err is the last refinement delta on the transformed value.
    """
    if transform is None:
        transform = lambda x: x
    n = max(int(start_nodes), 8)
    t = TWO_PI * np.arange(n) / n
    total = float(np.sum(f(t)))
    prev = transform(total / n)
    err = np.inf
    while n < max_nodes:
        mids = TWO_PI * (np.arange(n) + 0.5) / n
        total += float(np.sum(f(mids)))
        n *= 2
        cur = transform(total / n)
        err = abs(cur - prev)
        scale = 1.0 if absolute else max(abs(cur), 1e-300)
        if err <= rel_tol * scale:
            return total / n, cur, err, n
        prev = cur
    return total / n, prev, err, n


def graded_edges(
    a: float,
    b: float,
    singular_left: bool,
    singular_right: bool,
    max_width: float,
    ratio: float = 0.3,
    floor: float = 1e-15,
) -> np.ndarray:
    """Subpanel edges over [a, b], grading geometrically into singular ends.

    The innermost sliver at a singular end has relative width ``floor``; with
    an integrable endpoint singularity its Gauss-Legendre value is accurate
    enough that nothing needs to be dropped.
    """
    if b <= a:
        raise ValueError("empty panel")
    if singular_left and singular_right:
        mid = 0.5 * (a + b)
        left = graded_edges(a, mid, True, False, max_width, ratio, floor)
        right = graded_edges(mid, b, False, True, max_width, ratio, floor)
        return np.concatenate([left, right[1:]])
    if singular_right:
        rev = graded_edges(a, b, True, False, max_width, ratio, floor)
        return (a + b - rev)[::-1]
    if singular_left:
        h = b - a
        # keep the innermost sliver wide enough (in ulps of the endpoint
        # scale) that Gauss nodes cannot round onto the singular endpoint
        scale = max(abs(a), abs(b), 1.0)
        floor_eff = max(floor, 256.0 * np.finfo(float).eps * scale / h)
        levels = max(int(np.ceil(np.log(floor_eff) / np.log(ratio))), 1)
        offsets = h * ratio ** np.arange(levels, -1, -1)
        edges = np.concatenate([[a], a + offsets])
    else:
        edges = np.array([a, b])
    # cap subpanel widths so oscillatory-but-smooth stretches stay resolved
    out = [edges[0]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        pieces = max(1, int(np.ceil((hi - lo) / max_width)))
        out.extend(lo + (hi - lo) * np.arange(1, pieces + 1) / pieces)
    return np.asarray(out)


def integrate_edges(f, edges: np.ndarray, order: int = 16) -> float:
    """Gauss-Legendre of f over consecutive [edges[i], edges[i+1]] panels.

    All nodes are stacked into a single call to f.
    """
    nodes, weights = gl_rule(order)
    lo = edges[:-1]
    width = np.diff(edges)
    pts = lo[:, None] + 0.5 * width[:, None] * (nodes[None, :] + 1.0)
    vals = f(pts.reshape(-1)).reshape(pts.shape)
    return float(np.sum(0.5 * width[:, None] * weights[None, :] * vals))


def adaptive_gl(
    f,
    a: float,
    b: float,
    abs_tol: float,
    order: int = 12,
    max_depth: int = 48,
):
    """Adaptive Gauss-Legendre bisection of f over [a, b].

    Returns (value, err_estimate). Panels are accepted when one rule and its
    bisected refinement agree within the panel's share of abs_tol; depth-capped
    panels are accepted as-is with their disagreement charged to the estimate.
    """
    nodes, weights = gl_rule(order)

    def rule(lo, hi):
        pts = lo + 0.5 * (hi - lo) * (nodes + 1.0)
        return float(0.5 * (hi - lo) * np.dot(weights, f(pts)))

    total = 0.0
    err = 0.0
    stack = [(a, b, rule(a, b), abs_tol, 0)]
    while stack:
        lo, hi, coarse, tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = rule(lo, mid)
        right = rule(mid, hi)
        disagreement = abs(left + right - coarse)
        if disagreement <= max(tol, 1e-16 * (abs(left) + abs(right))) or depth >= max_depth:
            total += left + right
            err += disagreement
        else:
            stack.append((lo, mid, left, 0.5 * tol, depth + 1))
            stack.append((mid, hi, right, 0.5 * tol, depth + 1))
    return total, err


def singular_circle_mean(f, angles: np.ndarray, oscillation_degree: int, order: int = 16):
    """Mean of f over [0, 2pi) with panels graded into each angle in ``angles``.

    The circle is split at the given (singular) angles; every panel grades
    geometrically into both of its endpoints and is capped so smooth stretches
    stay resolved for integrands oscillating on the scale of the given degree.
    Returns (mean, err_estimate), the error taken from an order-halved
    re-evaluation on the same panel edges.
    """
    a = np.sort(np.asarray(angles, dtype=float) % TWO_PI)
    keep = [a[0]]
    for x in a[1:]:
        if x - keep[-1] > 1e-12:
            keep.append(x)
    a = np.asarray(keep)
    brk = np.concatenate([a, [a[0] + TWO_PI]])
    max_width = min(0.5, np.pi / (oscillation_degree + 2))
    pieces = [
        graded_edges(lo, hi, True, True, max_width)
        for lo, hi in zip(brk[:-1], brk[1:])
        if hi > lo
    ]
    edges = np.concatenate([e if i == 0 else e[1:] for i, e in enumerate(pieces)])
    hi_val = integrate_edges(f, edges, order=order)
    lo_val = integrate_edges(f, edges, order=order // 2)
    return hi_val / TWO_PI, abs(hi_val - lo_val) / TWO_PI


def bisect_roots(f, lo: np.ndarray, hi: np.ndarray, iters: int = 50) -> np.ndarray:
    """Vectorized bisection: one sign change of f assumed in each [lo, hi]."""
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    flo = np.sign(f(lo))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = np.sign(f(mid))
        same = fm == flo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)
