"""Generalized means M_p of Laurent polynomials on the unit circle.

M_0 is the geometric mean (exp of the mean of log|T|), M_p for p > 0 the
usual power mean with the 1/(2pi) normalization so that every constant c has
M_p(c) = |c| for every p, and M_inf the sup over the circle. M_0 admits an
exact product formula over the zeros of z^n T(z); quadrature provides the
independent route. Every mean carries an error estimate and a method tag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature as quad
from .polynomials import LaurentPolynomial
from .rootfind import RootSet, roots

__all__ = [
    "QuadratureConfig",
    "MeanResult",
    "NEAR_CIRCLE_THRESHOLD",
    "mahler_from_roots",
    "mean_p",
    "mean_0_quadrature",
    "mean_inf",
    "logplus_integral",
]

# Roots closer to the circle than this get dedicated singular handling;
# farther out, plain trapezoid refinement wins.
NEAR_CIRCLE_THRESHOLD = 1e-3

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class QuadratureConfig:
    """Node-doubling bounds shared by all quadrature-backed means."""

    start_nodes: int = 64
    max_nodes: int = 1 << 20
    rel_tol: float = 1e-10

    def __post_init__(self):
        if self.start_nodes < 16:
            raise ValueError("start_nodes must be at least 16")

    def to_json_dict(self) -> dict:
        return {
            "start_nodes": self.start_nodes,
            "max_nodes": self.max_nodes,
            "rel_tol": self.rel_tol,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "QuadratureConfig":
        return cls(
            start_nodes=int(obj.get("start_nodes", 64)),
            max_nodes=int(obj.get("max_nodes", 1 << 20)),
            rel_tol=float(obj.get("rel_tol", 1e-10)),
        )


DEFAULT_GRID = QuadratureConfig()


@dataclass(frozen=True)
class MeanResult:
    """Value of M_p with an error estimate and the route that produced it."""

    p: float  # 0.0 for the geometric mean, math.inf for the sup norm
    value: float
    err_estimate: float
    method: str  # jensen-product | trapezoid | adaptive-singular | sampled-max


def _reject_zero(T: LaurentPolynomial):
    if T.is_zero():
        raise ValueError("mean of the zero polynomial is undefined")


def mahler_from_roots(R: RootSet) -> MeanResult:
    """Geometric mean from the product formula |c| * prod max(1, |z_k|)."""
    mods = np.abs(R.roots)
    value = float(abs(R.leading) * np.prod(np.maximum(1.0, mods)))
    err = value * 1e-14 * (len(R) + 1)
    return MeanResult(p=0.0, value=value, err_estimate=err, method="jensen-product")


def _near_circle_angles(R: RootSet, threshold: float = NEAR_CIRCLE_THRESHOLD) -> np.ndarray:
    mods = np.abs(R.roots)
    near = np.abs(mods - 1.0) <= threshold
    return np.sort(np.angle(R.roots[near])) % TWO_PI


def _log_abs_on_circle(T: LaurentPolynomial, scale: float):
    def f(t):
        return np.log(np.maximum(np.abs(T.on_circle(t)) / scale, 1e-300))

    return f


def mean_0_quadrature(
    T: LaurentPolynomial, R: RootSet, grid: QuadratureConfig = DEFAULT_GRID
) -> MeanResult:
    """Geometric mean by integrating log|T| on the circle.

    The circle is split at the angles of roots within NEAR_CIRCLE_THRESHOLD of
    it and Gauss-Legendre panels grade geometrically into those angles; the
    log singularities are integrable, so nothing is excluded. With no nearby
    roots the integrand is analytic and trapezoid doubling is used instead.
    """
    _reject_zero(T)
    scale = float(np.max(np.abs(T.coeffs)))
    f = _log_abs_on_circle(T, scale)
    angles = _near_circle_angles(R)
    if angles.size == 0:
        _, mean_log, err_log, _ = quad.periodic_mean_doubling(
            f, grid.start_nodes, grid.max_nodes, grid.rel_tol, absolute=True
        )
    else:
        mean_log, err_log = quad.singular_circle_mean(f, angles, 2 * T.n)
    value = scale * math.exp(mean_log)
    return MeanResult(
        p=0.0,
        value=value,
        err_estimate=value * (err_log + 1e-13),
        method="adaptive-singular",
    )


def _is_even_integer(p: float) -> bool:
    return p == int(p) and int(p) % 2 == 0


def mean_p(
    T: LaurentPolynomial,
    p: float,
    grid: QuadratureConfig = DEFAULT_GRID,
    roots_hint: RootSet | None = None,
) -> MeanResult:
    """M_p for finite p > 0 by quadrature of |T|^p over the circle.

    Trapezoid doubling is the default. When T has zeros within
    NEAR_CIRCLE_THRESHOLD of the circle and |T|^p is not smooth there (any
    non-even p), the integral switches to panels graded into the offending
    angles. ``roots_hint`` skips the internal root solve when the caller
    already has the zeros of z^n T.
    """
    _reject_zero(T)
    if not p > 0 or math.isinf(p):
        raise ValueError("mean_p needs a finite p > 0")
    scale = float(np.max(np.abs(T.coeffs)))

    def f(t):
        return np.abs(T.on_circle(t)) ** p / scale**p

    angles = np.zeros(0)
    if not _is_even_integer(p):
        R = roots_hint if roots_hint is not None else roots(T.to_algebraic())
        angles = _near_circle_angles(R)
    if angles.size:
        raw, raw_err = quad.singular_circle_mean(f, angles, 2 * T.n)
        value = scale * raw ** (1.0 / p)
        err = value * raw_err / (p * max(raw, 1e-300))
        return MeanResult(p=p, value=value, err_estimate=err, method="adaptive-singular")
    transform = lambda raw: scale * max(raw, 0.0) ** (1.0 / p)
    _, value, err, _ = quad.periodic_mean_doubling(
        f, grid.start_nodes, grid.max_nodes, grid.rel_tol, transform=transform
    )
    return MeanResult(p=p, value=value, err_estimate=err, method="trapezoid")


def mean_inf(T: LaurentPolynomial, samples: int | None = None) -> MeanResult:
    """Sup of |T| on the circle: coarse sampling plus golden-section polish.

    Every local maximum of the coarse samples is refined (not only the best
    one) so that near-tied peaks cannot silently shadow the true max. The
    sample count must be at least 8 per coefficient, the default is 16.
    """
    floor = 8 * (2 * T.n + 1)
    if samples is None:
        samples = max(2 * floor, 64)
    if samples < floor:
        raise ValueError(f"need at least {floor} samples for class bound {T.n}")
    if T.is_zero():
        return MeanResult(p=math.inf, value=0.0, err_estimate=0.0, method="sampled-max")

    coeffs = T.coeffs
    n = T.n

    def gv(x):
        # |T(e^{ix})| with 1/z = conj(z) on the circle; skips generic checks
        z = np.exp(1j * x)
        acc = np.full(z.shape, coeffs[-1])
        for k in range(2 * n - 1, n - 1, -1):
            acc = acc * z + coeffs[k]
        if n:
            w = np.conj(z)
            neg = np.full(z.shape, coeffs[0])
            for k in range(1, n):
                neg = neg * w + coeffs[k]
            acc = acc + neg * w
        return np.abs(acc)

    t = TWO_PI * np.arange(samples) / samples
    g = gv(t)
    peak = (g >= np.roll(g, 1)) & (g >= np.roll(g, -1))
    idx = np.nonzero(peak)[0]
    if idx.size > 64:
        idx = idx[np.argsort(g[idx])[-64:]]
    h = TWO_PI / samples
    lo = t[idx] - h
    hi = t[idx] + h

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = gv(x1)
    f2 = gv(x2)
    iters = int(np.ceil(np.log(1e-9 / (2.0 * h)) / np.log(invphi)))
    for _ in range(max(iters, 8)):
        take_right = f1 < f2
        lo = np.where(take_right, x1, lo)
        hi = np.where(take_right, hi, x2)
        x1n = np.where(take_right, x2, hi - invphi * (hi - lo))
        x2n = np.where(take_right, lo + invphi * (hi - lo), x1)
        fresh = gv(np.where(take_right, x2n, x1n))
        f1, f2 = np.where(take_right, f2, fresh), np.where(take_right, fresh, f1)
        x1, x2 = x1n, x2n
    value = float(max(np.max(g), np.max(f1), np.max(f2)))
    j = np.arange(-T.n, T.n + 1)
    deriv_bound = float(np.sum(np.abs(j * T.coeffs)))
    err = deriv_bound * float(np.max(hi - lo))
    return MeanResult(p=math.inf, value=value, err_estimate=err, method="sampled-max")


def logplus_integral(T: LaurentPolynomial, grid: QuadratureConfig = DEFAULT_GRID) -> float:
    """(1/2pi) integral of log^+|T(e^{it})| = max(log|T|, 0) over the circle.

    The integrand is continuous with kinks where |T| crosses 1. Crossings are
    located by a fine scan plus bisection and become panel boundaries; panels
    entirely below 1 contribute zero, the rest are integrated adaptively.
    """
    _reject_zero(T)

    def h(t):
        return np.log(np.maximum(np.abs(T.on_circle(t)), 1e-300))

    def hplus(t):
        return np.maximum(h(t), 0.0)

    n_scan = max(8192, 64 * (2 * T.n + 1))
    n_scan = 1 << int(np.ceil(np.log2(n_scan)))
    t = TWO_PI * np.arange(n_scan) / n_scan
    hv = h(t)
    pos = hv > 0.0
    if not np.any(pos):
        # grazing from below can still poke above 1 between scan points, but
        # the excursion area is O(spacing^3); below every tolerance used here
        return 0.0
    flips = np.nonzero(pos != np.roll(pos, -1))[0]
    if flips.size == 0:
        _, mean_val, _, _ = quad.periodic_mean_doubling(
            hplus, grid.start_nodes, grid.max_nodes, grid.rel_tol, absolute=True
        )
        return float(mean_val)
    lo = t[flips]
    hi = lo + TWO_PI / n_scan
    crossings = np.sort(quad.bisect_roots(h, lo, hi))
    brk = np.concatenate([crossings, [crossings[0] + TWO_PI]])

    rough = float(np.mean(np.maximum(hv, 0.0)))
    tol_total = 1e-13 + grid.rel_tol * max(rough, 1e-3)
    total = 0.0
    for a, b in zip(brk[:-1], brk[1:]):
        if b - a <= 1e-13:
            continue
        probes = a + (b - a) * (np.arange(1, 10) / 10.0)
        if np.all(h(probes) <= 0.0):
            continue
        val, _ = quad.adaptive_gl(hplus, a, b, tol_total * (b - a) / TWO_PI)
        total += val
    return total / TWO_PI
