"""Simultaneous root finding and unit-circle classification.

The solver is Aberth-Ehrlich: all roots are iterated together, each update
being a Newton step divided by the repulsion from the other iterates. This
avoids a general eigensolver and is O(deg^2) per sweep, plenty for the
degrees (<= 200) this package targets. Multiple roots are returned as nearby
simple roots; every downstream formula is continuous in the roots, so
clusters are harmless at our tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericFailure
from .polynomials import AlgebraicPolynomial, RootSet

__all__ = ["roots", "classify", "CirclePartition", "DEFAULT_CIRCLE_EPS"]

DEFAULT_CIRCLE_EPS = 1e-9

_MAX_ITER = 500
_MAX_ATTEMPTS = 6
_STAGNATION_WINDOW = 60
# The residual gauge plateaus above tol at tight root clusters and for
# polynomials whose double-precision coefficients simply do not pin their
# roots any tighter (high-degree unimodular-root products). Those plateaus
# are accepted after a Newton polish: downstream formulas are continuous in
# the roots, so representation-limited roots are still usable. Genuine
# non-convergence sits orders of magnitude higher.
_PLATEAU_ACCEPT = 1e-5


def _horner_pair(c: np.ndarray, z: np.ndarray):
    """Vectorized value and derivative of sum c_j z^j at the points z."""
    p = np.full_like(z, c[-1])
    dp = np.zeros_like(z)
    for k in range(c.shape[0] - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[k]
    return p, dp


def _weierstrass_residual(c: np.ndarray, z: np.ndarray) -> float:
    """max_k |P(z_k)| / (|lead| prod_{j!=k} |z_k - z_j|), the convergence gauge."""
    p, _ = _horner_pair(c, z)
    d = z.shape[0]
    if d == 1:
        return float(np.max(np.abs(p)) / np.abs(c[-1]))
    diff = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(diff, 1.0)
    logprod = np.sum(np.log(np.maximum(diff, 1e-300)), axis=1)
    logres = np.log(np.maximum(np.abs(p), 1e-300)) - np.log(np.abs(c[-1])) - logprod
    return float(np.exp(np.max(logres)))


def _newton_polish(c: np.ndarray, z: np.ndarray, iters: int = 8) -> np.ndarray:
    """Per-root Newton steps, keeping each update only if |P| decreased."""
    pv, _ = _horner_pair(c, z)
    best_abs = np.abs(pv)
    best = z.copy()
    cur = z.copy()
    for _ in range(iters):
        pv, dpv = _horner_pair(c, cur)
        dpv = np.where(np.abs(dpv) < 1e-300, 1e-300 + 0j, dpv)
        cur = cur - pv / dpv
        pv, _ = _horner_pair(c, cur)
        improved = np.abs(pv) < best_abs
        best = np.where(improved, cur, best)
        best_abs = np.where(improved, np.abs(pv), best_abs)
    return best


def _initial_points(c: np.ndarray, rng: np.random.Generator, attempt: int) -> np.ndarray:
    d = c.shape[0] - 1
    radius = (np.abs(c[0]) / np.abs(c[-1])) ** (1.0 / d)
    radius = min(max(radius, 1e-6), 1e6)
    angles = 2.0 * np.pi * (np.arange(d) + 0.5) / d + 0.45
    if attempt == 0:
        return radius * np.exp(1j * angles)
    jitter = rng.normal(scale=0.3, size=d) + 1j * rng.normal(scale=0.3, size=d)
    return radius * np.exp(1j * (angles + rng.uniform(0, 2 * np.pi))) * (1.0 + jitter)


def _aberth(c: np.ndarray, tol: float) -> np.ndarray:
    """All roots of c_0 + c_1 z + ... + c_d z^d with c_0, c_d != 0, d >= 1."""
    d = c.shape[0] - 1
    if d == 1:
        return np.array([-c[0] / c[1]])
    if d == 2:
        a2, a1, a0 = c[2], c[1], c[0]
        disc = np.sqrt(a1 * a1 - 4.0 * a2 * a0 + 0j)
        if abs(a1 + disc) < abs(a1 - disc):
            disc = -disc
        q = -0.5 * (a1 + disc)
        return np.array([q / a2, a0 / q])

    rng = np.random.default_rng(0x5EED)
    best_res = np.inf
    best_z = None
    for attempt in range(_MAX_ATTEMPTS):
        z = _initial_points(c, rng, attempt)
        res_hist = []
        for _ in range(_MAX_ITER):
            p, dp = _horner_pair(c, z)
            tiny = np.abs(dp) < 1e-300
            if np.any(tiny):
                dp = np.where(tiny, 1e-300 + 0j, dp)
            newton = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = np.sum(1.0 / diff, axis=1)
            denom = 1.0 - newton * repulsion
            denom = np.where(np.abs(denom) < 1e-300, 1e-300 + 0j, denom)
            z = z - newton / denom
            res = _weierstrass_residual(c, z)
            res_hist.append(res)
            if res < best_res:
                best_res, best_z = res, z.copy()
            if res <= tol:
                return _newton_polish(c, z)
            if (
                len(res_hist) > _STAGNATION_WINDOW
                and res > 0.5 * res_hist[-_STAGNATION_WINDOW]
            ):
                break
        if best_res <= max(100.0 * tol, 1e-9):
            # solidly converged; a random restart cannot improve on this
            break
    if best_z is not None:
        polished = _newton_polish(c, best_z, iters=16)
        polished_res = _weierstrass_residual(c, polished)
        if polished_res < best_res:
            best_z, best_res = polished, polished_res
        if best_res <= _PLATEAU_ACCEPT:
            return best_z
    raise NumericFailure(
        f"root solver stagnated at residual {best_res:.3e} (tol {tol:.1e})",
        residual=best_res,
    )


def roots(P: AlgebraicPolynomial, tol: float = 1e-12) -> RootSet:
    """All zeros of P, multiplicities listed repeatedly.

    High-order zero coefficients are stripped first (counted in
    degree_deficit); low-order zero coefficients become exact roots at the
    origin. Raises NumericFailure if the iteration cannot reach ``tol`` even
    after random restarts.
    """
    if P.is_zero():
        raise ValueError("zero polynomial has no root set")
    work, deficit = P.normalized()
    c = work.coeffs
    nz_low = np.nonzero(c)[0][0]
    origin_mult = int(nz_low)
    c = c[nz_low:]
    leading = complex(c[-1])
    found = np.zeros(0, dtype=complex)
    if c.shape[0] > 1:
        scaled = c / np.max(np.abs(c))
        found = _aberth(scaled, tol)
    all_roots = np.concatenate([np.zeros(origin_mult, dtype=complex), found])
    return RootSet(leading=leading, roots=all_roots, degree_deficit=deficit)


@dataclass(frozen=True, eq=False)
class CirclePartition:
    """Roots split by modulus against the unit circle with tolerance band epsilon."""

    inside: np.ndarray
    on: np.ndarray
    outside: np.ndarray
    epsilon: float

    def __post_init__(self):
        for name in ("inside", "on", "outside"):
            arr = np.asarray(getattr(self, name), dtype=complex).reshape(-1).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def all_in_closed_disk(self) -> bool:
        return self.outside.shape[0] == 0


def classify(R: RootSet, epsilon: float = DEFAULT_CIRCLE_EPS) -> CirclePartition:
    """Partition the roots into |z| < 1-eps, | |z|-1 | <= eps, |z| > 1+eps."""
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 0.5)")
    mod = np.abs(R.roots)
    on = np.abs(mod - 1.0) <= epsilon
    inside = ~on & (mod < 1.0)
    outside = ~on & (mod > 1.0)
    return CirclePartition(
        inside=R.roots[inside],
        on=R.roots[on],
        outside=R.roots[outside],
        epsilon=epsilon,
    )
