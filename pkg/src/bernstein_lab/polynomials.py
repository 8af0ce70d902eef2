"""Laurent and algebraic polynomials with exact coefficient bookkeeping.

A Laurent polynomial here is T(z) = sum_{j=-n}^{n} a_j z^j, kept as a dense
coefficient vector indexed from exponent -n to n. The class bound n is stored
explicitly: a polynomial with a_n = 0 still belongs to the class of bound n,
which matters for every inequality that quantifies over the class rather than
over exact degree. Algebraic polynomials are plain a_0..a_m coefficient
vectors. Conversion between the two forms is multiplication by z^n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LaurentPolynomial",
    "AlgebraicPolynomial",
    "RootSet",
    "from_roots",
    "laurent_from_algebraic",
]


def _as_complex_array(values, expected_len=None):
    arr = np.asarray(values, dtype=complex)
    if arr.ndim != 1:
        raise ValueError("coefficient sequence must be one-dimensional")
    if expected_len is not None and arr.shape[0] != expected_len:
        raise ValueError(
            f"expected {expected_len} coefficients, got {arr.shape[0]}"
        )
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class LaurentPolynomial:
    """T(z) = sum a_j z^j for j in [-n, n], stored densely.

    ``coeffs[j + n]`` holds a_j. The zero polynomial is representable; mean
    and verification operations reject it at their own boundaries.
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("class bound n must be nonnegative")
        object.__setattr__(
            self, "coeffs", _as_complex_array(self.coeffs, 2 * self.n + 1)
        )

    @classmethod
    def monomial(cls, n: int, j: int, c: complex = 1.0) -> "LaurentPolynomial":
        """c * z^j as a member of the class with bound n (requires |j| <= n)."""
        if abs(j) > n:
            raise ValueError("exponent outside the class bound")
        coeffs = np.zeros(2 * n + 1, dtype=complex)
        coeffs[j + n] = c
        return cls(n, coeffs)

    @classmethod
    def zero(cls, n: int) -> "LaurentPolynomial":
        return cls(n, np.zeros(2 * n + 1, dtype=complex))

    def coeff(self, j: int) -> complex:
        """Coefficient a_j; zero outside the stored window."""
        if abs(j) > self.n:
            return 0j
        return complex(self.coeffs[j + self.n])

    @property
    def top(self) -> complex:
        """a_n, the coefficient the equality case and reflection pivot on."""
        return complex(self.coeffs[-1])

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __call__(self, z):
        """Evaluate by a two-sided Horner scheme (z for j >= 0, 1/z for j < 0).

        Accepts a scalar or an ndarray of nonzero points.
        """
        scalar = np.isscalar(z) or np.ndim(z) == 0
        zz = np.asarray(z, dtype=complex)
        if np.any(zz == 0):
            raise ZeroDivisionError("Laurent polynomial undefined at 0")
        n = self.n
        pos = np.full_like(zz, self.coeffs[-1])
        for k in range(2 * n - 1, n - 1, -1):
            pos = pos * zz + self.coeffs[k]
        if n == 0:
            return complex(pos) if scalar else pos
        w = 1.0 / zz
        neg = np.full_like(zz, self.coeffs[0])
        for k in range(1, n):
            neg = neg * w + self.coeffs[k]
        total = pos + neg * w
        return complex(total) if scalar else total

    def on_circle(self, t):
        """Values T(e^{it}) for an array (or scalar) of angles t."""
        return self(np.exp(1j * np.asarray(t, dtype=float)))

    def derivative(self) -> "LaurentPolynomial":
        """d/dz, re-housed in the class of bound n + 1.

        The exponent window widens by one instead of asserting which end
        coefficients cancel; callers needing a tight class call deflated().
        """
        m = self.n + 1
        out = np.zeros(2 * m + 1, dtype=complex)
        j = np.arange(-self.n, self.n + 1)
        out[(j - 1) + m] = j * self.coeffs
        return LaurentPolynomial(m, out)

    def deflated(self) -> "LaurentPolynomial":
        """Smallest-class representative: strips zero coefficient wings."""
        nz = np.nonzero(self.coeffs)[0]
        if nz.size == 0:
            return LaurentPolynomial(0, [0j])
        n_eff = int(max(abs(nz - self.n)))
        lo = self.n - n_eff
        return LaurentPolynomial(n_eff, self.coeffs[lo : lo + 2 * n_eff + 1])

    def to_algebraic(self) -> "AlgebraicPolynomial":
        """z^n * T(z) as an algebraic polynomial of degree <= 2n."""
        return AlgebraicPolynomial(self.coeffs)

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        n = max(self.n, other.n)
        out = np.zeros(2 * n + 1, dtype=complex)
        out[n - self.n : n + self.n + 1] += self.coeffs
        out[n - other.n : n + other.n + 1] += other.coeffs
        return LaurentPolynomial(n, out)

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-1.0) * other

    def __mul__(self, c) -> "LaurentPolynomial":
        if not np.isscalar(c):
            return NotImplemented
        return LaurentPolynomial(self.n, self.coeffs * complex(c))

    __rmul__ = __mul__

    def coeff_close(self, other: "LaurentPolynomial", tol: float = 0.0) -> bool:
        """Coefficientwise comparison after aligning exponent windows."""
        n = max(self.n, other.n)
        a = np.zeros(2 * n + 1, dtype=complex)
        b = np.zeros(2 * n + 1, dtype=complex)
        a[n - self.n : n + self.n + 1] = self.coeffs
        b[n - other.n : n + other.n + 1] = other.coeffs
        if tol == 0.0:
            return bool(np.array_equal(a, b))
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1.0)
        return bool(np.max(np.abs(a - b)) <= tol * scale)

    def rotated(self, theta: float) -> "LaurentPolynomial":
        """The polynomial z -> T(e^{i theta} z); coefficient a_j picks up e^{ij theta}."""
        j = np.arange(-self.n, self.n + 1)
        return LaurentPolynomial(self.n, self.coeffs * np.exp(1j * theta * j))

    def to_json_dict(self) -> dict:
        """Polynomial literal: {"n": int, "coeffs": [[re, im], ...]}."""
        return {
            "n": self.n,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "LaurentPolynomial":
        if not isinstance(obj, dict) or "n" not in obj or "coeffs" not in obj:
            raise ValueError('polynomial literal needs "n" and "coeffs" fields')
        n = int(obj["n"])
        pairs = obj["coeffs"]
        if len(pairs) != 2 * n + 1:
            raise ValueError(
                f"polynomial literal with n={n} needs {2 * n + 1} coefficient"
                f" pairs, got {len(pairs)}"
            )
        coeffs = np.array([complex(re, im) for re, im in pairs])
        return cls(n, coeffs)

    def __repr__(self):
        return f"LaurentPolynomial(n={self.n}, coeffs={self.coeffs!r})"


@dataclass(frozen=True, eq=False)
class AlgebraicPolynomial:
    """P(z) = sum_{j=0}^{m} a_j z^j with a dense coefficient vector.

    High-order zero coefficients are legal transiently; normalized() strips
    them and exposes the effective degree.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_complex_array(self.coeffs))
        if self.coeffs.shape[0] == 0:
            raise ValueError("need at least one coefficient")

    @property
    def degree_bound(self) -> int:
        return self.coeffs.shape[0] - 1

    def effective_degree(self) -> int:
        """Largest j with a_j != 0, or -1 for the zero polynomial."""
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if nz.size else -1

    def normalized(self) -> tuple["AlgebraicPolynomial", int]:
        """Strip high-order zero coefficients; return (poly, count stripped)."""
        d = self.effective_degree()
        if d < 0:
            raise ValueError("zero polynomial has no normalized form")
        return AlgebraicPolynomial(self.coeffs[: d + 1]), self.degree_bound - d

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __call__(self, z):
        scalar = np.isscalar(z) or np.ndim(z) == 0
        zz = np.asarray(z, dtype=complex)
        acc = np.full_like(zz, self.coeffs[-1])
        for k in range(self.coeffs.shape[0] - 2, -1, -1):
            acc = acc * zz + self.coeffs[k]
        return complex(acc) if scalar else acc

    def derivative(self) -> "AlgebraicPolynomial":
        if self.coeffs.shape[0] == 1:
            return AlgebraicPolynomial([0j])
        j = np.arange(1, self.coeffs.shape[0])
        return AlgebraicPolynomial(j * self.coeffs[1:])

    def __repr__(self):
        return f"AlgebraicPolynomial(coeffs={self.coeffs!r})"


@dataclass(frozen=True, eq=False)
class RootSet:
    """Zeros with multiplicity (listed repeatedly) plus the leading coefficient.

    degree_deficit counts high-order zero coefficients stripped before root
    finding, so len(roots) + degree_deficit equals the nominal degree bound.
    """

    leading: complex
    roots: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    degree_deficit: int = 0

    def __post_init__(self):
        if self.leading == 0:
            raise ValueError("leading coefficient must be nonzero")
        arr = np.asarray(self.roots, dtype=complex).reshape(-1).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "roots", arr)
        object.__setattr__(self, "leading", complex(self.leading))

    def __len__(self):
        return self.roots.shape[0]


def from_roots(c: complex, roots) -> AlgebraicPolynomial:
    """Expand c * prod (z - z_k) to coefficients by iterated convolution."""
    if c == 0:
        raise ValueError("leading coefficient must be nonzero")
    coeffs = np.array([complex(c)])
    for r in np.asarray(roots, dtype=complex).reshape(-1):
        grown = np.zeros(coeffs.shape[0] + 1, dtype=complex)
        grown[1:] += coeffs
        grown[:-1] -= r * coeffs
        coeffs = grown
    return AlgebraicPolynomial(coeffs)


def laurent_from_algebraic(P: AlgebraicPolynomial, n: int) -> LaurentPolynomial:
    """Inverse of to_algebraic: P(z) / z^n housed in the class of bound n."""
    if P.effective_degree() > 2 * n:
        raise ValueError("degree exceeds 2n; polynomial not in the class")
    coeffs = np.zeros(2 * n + 1, dtype=complex)
    coeffs[: P.coeffs.shape[0]] = P.coeffs[: 2 * n + 1]
    return LaurentPolynomial(n, coeffs)
