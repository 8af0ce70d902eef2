"""Executable checks for the derivative inequalities and their supporting facts.

Every check consumes a polynomial (supplied or drawn from a seeded sampler),
computes both sides of one claimed inequality or identity, and emits a
VerificationReport with the margin and the exact tolerance used. Inputs that
violate a conditional claim's hypothesis yield a skipped report, never a
failure: only genuine counterexample candidates may fail. Sweeps evaluate
samples independently (optionally across processes) and keep the worst
witness for regression pinning.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .circle_means import (
    DEFAULT_GRID,
    QuadratureConfig,
    logplus_integral,
    mahler_from_roots,
    mean_0_quadrature,
    mean_inf,
    mean_p,
)
from .constructions import perturb_by_en, reflect_outside, smoothed_logplus, mu_moment
from .errors import NumericFailure
from .polynomials import LaurentPolynomial, RootSet, from_roots, laurent_from_algebraic
from .rootfind import classify, roots

__all__ = [
    "VerificationReport",
    "SampleSpec",
    "CLAIMS",
    "sample_polynomial",
    "sample_with_roots",
    "check_bernstein",
    "check_equality_case",
    "check_lemma_2_1",
    "check_lemma_2_2",
    "check_theorem_1_2",
    "check_monotone_p",
    "run_sweep",
    "summarize",
]

CLAIMS = (
    "thm-1-1",
    "thm-1-2",
    "thm-1-3",
    "lemma-2-1",
    "lemma-2-2",
    "equality-case",
    "monotone-p",
    "identity-3-1",
    "identity-3-2",
)

DISTRIBUTIONS = (
    "coeff-gaussian",
    "roots-in-disk",
    "roots-outside",
    "roots-mixed",
    "roots-on-circle",
)

DEFAULT_P_GRID = (0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 16.0)


@dataclass(frozen=True)
class VerificationReport:
    """Pass/fail record of one check, with margins and the worst sample.

    passed is equivalent to margin >= -tolerance_used * max(|lhs|, |rhs|, 1);
    skipped reports mark inputs that do not meet a conditional hypothesis and
    never count as failures.
    """

    claim: str
    passed: bool
    lhs: float
    rhs: float
    margin: float
    witness: dict | None
    tolerance_used: float
    skipped: bool = False
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {
            "claim": self.claim,
            "passed": self.passed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "witness": self.witness,
            "tolerance_used": self.tolerance_used,
            "skipped": self.skipped,
            "detail": self.detail,
        }


def _scale(lhs: float, rhs: float) -> float:
    return max(abs(lhs), abs(rhs), 1.0)


def _ineq_report(claim, lhs, rhs, tol, witness, detail="") -> VerificationReport:
    """Report for a one-sided claim lhs <= rhs."""
    margin = rhs - lhs
    passed = margin >= -tol * _scale(lhs, rhs)
    return VerificationReport(
        claim=claim,
        passed=bool(passed),
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(margin),
        witness=witness,
        tolerance_used=float(tol),
        detail=detail,
    )


def _eq_report(claim, lhs, rhs, tol, witness, detail="") -> VerificationReport:
    """Report for a two-sided claim lhs == rhs; margin is -|lhs - rhs|."""
    margin = -abs(rhs - lhs)
    passed = margin >= -tol * _scale(lhs, rhs)
    return VerificationReport(
        claim=claim,
        passed=bool(passed),
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(margin),
        witness=witness,
        tolerance_used=float(tol),
        detail=detail,
    )


def _skip_report(claim, tol, witness, detail) -> VerificationReport:
    return VerificationReport(
        claim=claim,
        passed=True,
        lhs=0.0,
        rhs=0.0,
        margin=0.0,
        witness=witness,
        tolerance_used=float(tol),
        skipped=True,
        detail=detail,
    )


def _witness(T: LaurentPolynomial, **params) -> dict:
    return {"polynomial": T.to_json_dict(), "params": params}


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class SampleSpec:
    """Reproducible family of random polynomials: (spec, seed, index) -> T."""

    n: int
    distribution: str
    seed: int
    count: int

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if self.n < 0 or self.count <= 0:
            raise ValueError("need n >= 0 and count > 0")


def _rng_for(spec: SampleSpec, index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(spec.seed) & (2**64 - 1), spawn_key=(index,))
    )


def sample_with_roots(
    spec: SampleSpec, index: int
) -> tuple[LaurentPolynomial, RootSet | None]:
    """Sample plus the generative root set of z^n T, exact where one exists.

    For roots-* distributions the planted zeros ARE the zeros of z^n T(z), so
    they are returned alongside the coefficient form; the coefficient form
    alone can pin high-degree unimodular-root products only to ~1e-4, while
    the generative roots are exact. coeff-gaussian has no generative roots
    and returns None.
    """
    if not 0 <= index < spec.count:
        raise ValueError(f"index {index} outside [0, {spec.count})")
    rng = _rng_for(spec, index)
    n = spec.n
    if spec.distribution == "coeff-gaussian":
        while True:
            coeffs = rng.normal(size=2 * n + 1) + 1j * rng.normal(size=2 * n + 1)
            if abs(coeffs[-1]) >= 1e-6 * np.max(np.abs(coeffs)):
                return LaurentPolynomial(n, coeffs), None
    count = 2 * n
    angles = rng.uniform(0.0, 2.0 * np.pi, count)
    if spec.distribution == "roots-in-disk":
        mods = rng.uniform(0.0, 1.0, count)
    elif spec.distribution == "roots-outside":
        mods = rng.uniform(1.0, 3.0, count)
    elif spec.distribution == "roots-on-circle":
        mods = np.ones(count)
    else:  # roots-mixed
        inside = rng.random(count) < 0.5
        mods = np.where(inside, rng.uniform(0.0, 1.0, count), rng.uniform(1.0, 3.0, count))
    c = rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    zs = mods * np.exp(1j * angles)
    T = laurent_from_algebraic(from_roots(c, zs), n)
    if n == 0:
        return T, RootSet(leading=c)
    return T, RootSet(leading=c, roots=zs)


def sample_polynomial(spec: SampleSpec, index: int) -> LaurentPolynomial:
    """Draw sample ``index`` of the family; identical inputs give identical output.

    coeff-gaussian draws i.i.d. complex Gaussian coefficients, re-drawn while
    the top coefficient is negligible (|a_n| < 1e-6 max|a_j|) so the class
    bound is effective. roots-* distributions plant 2n zeros in the named
    region and attach a leading coefficient with modulus in [0.5, 2].
    """
    return sample_with_roots(spec, index)[0]


# ---------------------------------------------------------------------------
# checks


def check_bernstein(
    T: LaurentPolynomial,
    p: float,
    tol: float = 1e-8,
    grid: QuadratureConfig = DEFAULT_GRID,
    roots_hint: RootSet | None = None,
    droots_hint: RootSet | None = None,
) -> VerificationReport:
    """M_p of the derivative against n times M_p of the polynomial.

    p = 0 checks the geometric-mean inequality through both the root-product
    route and the quadrature route; both must pass individually. p = inf uses
    the refined sampled max. The class bound n is the stored one, which only
    weakens the right side favorably when the top coefficient vanishes.
    """
    if T.is_zero():
        raise ValueError("cannot check the zero polynomial")
    n = T.n
    dT = T.derivative()
    claim = "thm-1-1" if p == 0 else "thm-1-3"
    if p == 0:
        rT = roots_hint if roots_hint is not None else roots(T.to_algebraic())
        rdT = droots_hint if droots_hint is not None else roots(dT.to_algebraic())
        lhs_j = mahler_from_roots(rdT).value
        rhs_j = n * mahler_from_roots(rT).value
        lhs_q = mean_0_quadrature(dT, rdT, grid).value
        rhs_q = n * mean_0_quadrature(T, rT, grid).value
        rep_j = _ineq_report(claim, lhs_j, rhs_j, tol, _witness(T, p=0.0), "jensen-product")
        rep_q = _ineq_report(claim, lhs_q, rhs_q, tol, _witness(T, p=0.0), "quadrature")
        worse = min(
            (rep_j, rep_q), key=lambda r: r.margin / _scale(r.lhs, r.rhs)
        )
        both = rep_j.passed and rep_q.passed
        return replace(worse, passed=both, detail=f"worse of both routes ({worse.detail})")
    if math.isinf(p):
        lhs = mean_inf(dT).value
        rhs = n * mean_inf(T).value
        return _ineq_report(claim, lhs, rhs, tol, _witness(T, p="inf"))
    lhs = mean_p(dT, p, grid, roots_hint=droots_hint).value
    rhs = n * mean_p(T, p, grid, roots_hint=roots_hint).value
    return _ineq_report(claim, lhs, rhs, tol, _witness(T, p=float(p)))


def check_equality_case(
    T: LaurentPolynomial,
    tol: float = 1e-7,
    eps: float = 1e-9,
    roots_hint: RootSet | None = None,
) -> VerificationReport:
    """For zeros of z^n T all in the closed disk: M_0(T) = |a_n|, M_0(T') = n|a_n|.

    Inputs with zeros strictly outside the circle get a skipped report.
    """
    if T.is_zero():
        raise ValueError("cannot check the zero polynomial")
    n = T.n
    R = roots_hint if roots_hint is not None else roots(T.to_algebraic())
    if not classify(R, eps).all_in_closed_disk:
        return _skip_report(
            "equality-case", tol, _witness(T), "zeros outside the closed disk"
        )
    a_n = abs(T.top)
    m0 = mahler_from_roots(R).value
    dT = T.derivative()
    if dT.is_zero():
        m0d = 0.0
    else:
        m0d = mahler_from_roots(roots(dT.to_algebraic())).value
    rep1 = _eq_report("equality-case", m0, a_n, tol, _witness(T), "M_0(T) vs |a_n|")
    rep2 = _eq_report(
        "equality-case", m0d, n * a_n, tol, _witness(T), "M_0(T') vs n|a_n|"
    )
    worse = min((rep1, rep2), key=lambda r: r.margin / _scale(r.lhs, r.rhs))
    return replace(worse, passed=rep1.passed and rep2.passed)


def check_lemma_2_1(
    S: LaurentPolynomial,
    eps: float = 1e-6,
    roots_hint: RootSet | None = None,
) -> VerificationReport:
    """Zeros of z^n S in the closed disk force the zeros of S' into it too.

    The zeros of S' as a function on the punctured plane are the non-origin
    zeros of z^{n+1} S'(z); the report's lhs is their largest modulus.
    """
    if S.is_zero():
        raise ValueError("cannot check the zero polynomial")
    R = roots_hint if roots_hint is not None else roots(S.to_algebraic())
    if not classify(R, eps).all_in_closed_disk:
        return _skip_report(
            "lemma-2-1", eps, _witness(S), "hypothesis unmet: zeros outside the closed disk"
        )
    dS = S.derivative()
    if dS.is_zero():
        return _ineq_report("lemma-2-1", 0.0, 1.0, eps, _witness(S), "derivative is constant zero")
    rd = roots(dS.to_algebraic())
    nonzero = rd.roots[rd.roots != 0]
    max_mod = float(np.max(np.abs(nonzero))) if nonzero.size else 0.0
    return _ineq_report("lemma-2-1", max_mod, 1.0, eps, _witness(S))


def check_lemma_2_2(
    T: LaurentPolynomial,
    V: LaurentPolynomial,
    points: int = 4096,
    tol: float = 1e-8,
    eps: float = 1e-9,
) -> VerificationReport:
    """|T| <= |V| on the circle plus zeros of z^n V in the disk give |T'| <= |V'|.

    Hypothesis violations produce a precondition-failure (skipped) report,
    distinct from a failure of the conclusion. The report carries the minimum
    slack over the grid and the angle where it occurs.
    """
    if T.is_zero() or V.is_zero():
        raise ValueError("cannot check the zero polynomial")
    rv = roots(V.to_algebraic())
    if not classify(rv, max(eps, 1e-9)).all_in_closed_disk:
        return _skip_report(
            "lemma-2-2", tol, _witness(T), "precondition failed: zeros of the dominating polynomial outside the closed disk"
        )
    t = 2.0 * np.pi * np.arange(points) / points
    abs_t = np.abs(T.on_circle(t))
    abs_v = np.abs(V.on_circle(t))
    if np.any(abs_t > abs_v * (1.0 + tol) + tol * max(np.max(abs_v), 1.0)):
        return _skip_report(
            "lemma-2-2", tol, _witness(T), "precondition failed: |T| exceeds |V| on the circle"
        )
    abs_dt = np.abs(T.derivative().on_circle(t))
    abs_dv = np.abs(V.derivative().on_circle(t))
    k = int(np.argmin(abs_dv - abs_dt))
    return _ineq_report(
        "lemma-2-2",
        float(abs_dt[k]),
        float(abs_dv[k]),
        tol,
        _witness(T, worst_angle=float(t[k])),
    )


def _w_grid(count: int = 64) -> np.ndarray:
    # half-step offset keeps the grid off the axis where T = c z^n degenerates
    return np.exp(2j * np.pi * (np.arange(count) + 0.5) / count)


def _log_mahler(T: LaurentPolynomial) -> float:
    return math.log(mahler_from_roots(roots(T.to_algebraic())).value)


def check_theorem_1_2(
    T: LaurentPolynomial,
    grid: QuadratureConfig = DEFAULT_GRID,
    tol: float = 1e-6,
    fubini: bool = True,
    fubini_tol: float = 1e-3,
) -> VerificationReport:
    """Mean of log^+|T'/n| on the circle never exceeds the mean of log^+|T|.

    With ``fubini`` set, both sides are recomputed by averaging geometric
    means of top-coefficient perturbations T + w z^n over a 64-point w grid
    (each of those means taken by the root-product formula), and the averages
    must agree with the direct integrals within fubini_tol.
    """
    if T.is_zero():
        raise ValueError("cannot check the zero polynomial")
    n = T.n
    dT_over_n = T.derivative() * (1.0 / n) if n else T.derivative()
    if n == 0:
        # derivative of a constant: left side integrand is log^+ 0 = 0
        lhs = 0.0
    else:
        lhs = logplus_integral(dT_over_n, grid)
    rhs = logplus_integral(T, grid)
    rep = _ineq_report("thm-1-2", lhs, rhs, tol, _witness(T))
    if not fubini or n == 0:
        return rep
    ws = _w_grid()
    lhs_avg = 0.0
    rhs_avg = 0.0
    for w in ws:
        Tp = perturb_by_en(T, w)
        rhs_avg += _log_mahler(Tp)
        lhs_avg += _log_mahler(Tp.derivative() * (1.0 / n))
    lhs_avg /= ws.size
    rhs_avg /= ws.size
    dev = max(abs(lhs_avg - lhs) / _scale(lhs_avg, lhs), abs(rhs_avg - rhs) / _scale(rhs_avg, rhs))
    if dev > fubini_tol:
        return replace(
            rep,
            passed=False,
            detail=f"smoothing-route averages deviate from direct integrals by {dev:.2e}",
        )
    return replace(rep, detail=f"smoothing-route deviation {dev:.2e}")


def check_monotone_p(
    T: LaurentPolynomial,
    p_grid=DEFAULT_P_GRID,
    tol: float = 1e-8,
    grid: QuadratureConfig = DEFAULT_GRID,
    roots_hint: RootSet | None = None,
) -> VerificationReport:
    """M_0 <= M_{p_1} <= ... <= M_{p_k} <= M_inf along an ascending p grid."""
    if T.is_zero():
        raise ValueError("cannot check the zero polynomial")
    ps = [float(q) for q in p_grid]
    if any(b <= a for a, b in zip(ps, ps[1:])) or any(q <= 0 for q in ps):
        raise ValueError("p grid must be strictly ascending and positive")
    R = roots_hint if roots_hint is not None else roots(T.to_algebraic())
    values = [mahler_from_roots(R).value]
    labels = ["0"]
    for q in ps:
        values.append(mean_p(T, q, grid, roots_hint=R).value)
        labels.append(f"{q:g}")
    values.append(mean_inf(T).value)
    labels.append("inf")
    worst = None
    for (a, la), (b, lb) in zip(zip(values, labels), zip(values[1:], labels[1:])):
        rep = _ineq_report(
            "monotone-p", a, b, tol, _witness(T, step=f"p={la} vs p={lb}")
        )
        if worst is None or rep.margin / _scale(rep.lhs, rep.rhs) < worst.margin / _scale(
            worst.lhs, worst.rhs
        ):
            worst = rep
    all_ok = worst.passed and all(
        b >= a - tol * _scale(a, b) for a, b in zip(values, values[1:])
    )
    return replace(worst, passed=bool(all_ok))


# ---------------------------------------------------------------------------
# identity sweeps (scalar claims)


def _check_identity_3_1(spec: SampleSpec, index: int) -> VerificationReport:
    rng = _rng_for(spec, index)
    v = 10.0 ** rng.uniform(-1.0, 1.0) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    lhs = smoothed_logplus(v)
    rhs = max(math.log(abs(v)), 0.0)
    tol = 1e-4 if abs(abs(v) - 1.0) < 1e-3 else 1e-8
    witness = {"v": [float(v.real), float(v.imag)], "params": {}}
    # absolute comparison: the identity is additive, not homogeneous
    margin = -abs(lhs - rhs)
    return VerificationReport(
        claim="identity-3-1",
        passed=bool(abs(lhs - rhs) <= tol),
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(margin),
        witness=witness,
        tolerance_used=tol,
    )


def identity_3_2_grid(
    u_points: int = 25, p_values=(0.25, 0.5, 1.0, 2.0, 4.0)
) -> list[tuple[float, float]]:
    us = np.geomspace(1e-3, 1e3, u_points)
    return [(float(u), float(q)) for u in us for q in p_values]


def _check_identity_3_2(u: float, p: float, tol: float = 1e-8) -> VerificationReport:
    lhs = mu_moment(u, p)
    rhs = u**p
    margin = -abs(lhs / rhs - 1.0)
    return VerificationReport(
        claim="identity-3-2",
        passed=bool(abs(lhs / rhs - 1.0) <= tol),
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(margin),
        witness={"u": float(u), "p": float(p), "params": {}},
        tolerance_used=tol,
    )


# ---------------------------------------------------------------------------
# sweeps


def _run_one(claim: str, spec: SampleSpec, index: int, opts: dict) -> VerificationReport:
    tol = opts.get("tol")
    grid = opts.get("grid", DEFAULT_GRID)
    if claim == "identity-3-1":
        return _check_identity_3_1(spec, index)
    if claim == "identity-3-2":
        pairs = opts.get("pairs") or identity_3_2_grid()
        u, q = pairs[index]
        return _check_identity_3_2(u, q, tol if tol is not None else 1e-8)
    T, planted = sample_with_roots(spec, index)
    if claim == "thm-1-1":
        rep = check_bernstein(
            T, 0.0, tol if tol is not None else 1e-8, grid, roots_hint=planted
        )
    elif claim == "thm-1-3":
        p = opts.get("p", 2.0)
        rep = check_bernstein(
            T, p, tol if tol is not None else 1e-8, grid, roots_hint=planted
        )
    elif claim == "thm-1-2":
        rep = check_theorem_1_2(
            T, grid, tol if tol is not None else 1e-6, fubini=opts.get("fubini", True)
        )
    elif claim == "lemma-2-1":
        rep = check_lemma_2_1(T, opts.get("eps", 1e-6), roots_hint=planted)
    elif claim == "lemma-2-2":
        out = reflect_outside(T, planted)
        rep = check_lemma_2_2(
            T, out.v, opts.get("points", 4096), tol if tol is not None else 1e-8
        )
    elif claim == "equality-case":
        rep = check_equality_case(T, tol if tol is not None else 1e-7, roots_hint=planted)
    elif claim == "monotone-p":
        rep = check_monotone_p(
            T,
            opts.get("p_grid", DEFAULT_P_GRID),
            tol if tol is not None else 1e-8,
            grid,
            roots_hint=planted,
        )
    else:
        raise ValueError(f"unknown claim {claim!r}")
    if rep.witness is not None:
        rep = replace(rep, witness={**rep.witness, "index": index})
    return rep


def run_sweep(
    claim: str,
    spec: SampleSpec,
    jobs: int | None = None,
    **opts,
) -> list[VerificationReport]:
    """Evaluate one claim over every sample of ``spec``, in index order.

    With jobs > 1 the samples are scored by a process pool; outputs are
    collected in index order, so results do not depend on the pool size.
    """
    if claim not in CLAIMS:
        raise ValueError(f"unknown claim {claim!r}; expected one of {CLAIMS}")
    if claim == "identity-3-2":
        pairs = opts.get("pairs") or identity_3_2_grid()
        opts = {**opts, "pairs": pairs}
        count = len(pairs)
    else:
        count = spec.count
    indices = range(count)
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or count < 8:
        return [_run_one(claim, spec, i, opts) for i in indices]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, count // (8 * jobs))
        return list(
            pool.map(
                _run_one,
                (claim for _ in indices),
                (spec for _ in indices),
                indices,
                (opts for _ in indices),
                chunksize=chunk,
            )
        )


def summarize(reports: list[VerificationReport]) -> dict:
    """Associative roll-up: AND of passed, min margin, worst witness."""
    active = [r for r in reports if not r.skipped]
    worst = None
    for r in active:
        if worst is None or r.margin / _scale(r.lhs, r.rhs) < worst.margin / _scale(
            worst.lhs, worst.rhs
        ):
            worst = r
    return {
        "count": len(reports),
        "checked": len(active),
        "skipped": len(reports) - len(active),
        "passed": all(r.passed for r in active) if active else True,
        "min_margin": worst.margin if worst is not None else 0.0,
        "worst": worst,
    }
