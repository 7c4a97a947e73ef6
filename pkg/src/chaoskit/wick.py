"""Exact moments and cumulants of polynomial functionals of Gaussian vectors.

Two independent routes to bivariate Gaussian moments are kept deliberately
separate so they can check each other:

* :func:`gaussian_moment` reduces the first remaining factor against every
  other factor (pairing recursion, memoized on the multidegree), and
* :func:`gaussian_moment_bivariate_conditional` integrates conditional
  moments of V given U, never touching the pairing recursion.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .algebra import ParamPoly, double_factorial

__all__ = [
    "DEGREE_CAP",
    "DegreeCapError",
    "CovSpec",
    "GaussianPolynomial",
    "gaussian_moment",
    "gaussian_moment_bivariate_conditional",
    "expectation",
    "expectation_of_product",
    "cumulant",
]

# Total monomial degree supported by the moment engine.  Far above what the
# shipped constructions need (degree 18 polynomials taken to the 2nd power),
# but a hard stop against accidental combinatorial blow-ups.
DEGREE_CAP = 40


class DegreeCapError(ValueError):
    """Requested moment exceeds the supported total degree."""


def gaussian_moment_1d(k: int) -> int:
    """E[G^k] for one standard Gaussian: (k-1)!! for even k, else 0."""
    if k < 0:
        raise ValueError("negative power")
    if k % 2:
        return 0
    return 1 if k == 0 else double_factorial(k - 1)


def _coerce_entry(value) -> ParamPoly:
    if isinstance(value, ParamPoly):
        return value
    return ParamPoly.constant(value)


class CovSpec:
    """Symmetric covariance matrix whose entries are exact ParamPoly values."""

    __slots__ = ("dimension", "entries", "_moment_cache", "_is_identity")

    def __init__(self, entries: Sequence[Sequence[Union[ParamPoly, int, Fraction]]]):
        rows = [tuple(_coerce_entry(v) for v in row) for row in entries]
        d = len(rows)
        if d == 0 or any(len(row) != d for row in rows):
            raise ValueError("covariance entries must form a square matrix")
        for i in range(d):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"covariance not symmetric at ({i}, {j})")
        self.dimension = d
        self.entries = tuple(rows)
        self._moment_cache: dict[tuple[int, ...], ParamPoly] = {}
        one, zero = ParamPoly.constant(1), ParamPoly()
        self._is_identity = all(
            rows[i][j] == (one if i == j else zero) for i in range(d) for j in range(d)
        )

    _identity_cache: dict[int, "CovSpec"] = {}

    @classmethod
    def identity(cls, dimension: int) -> "CovSpec":
        """The i.i.d. standard Gaussian covariance (cached per dimension)."""
        cov = cls._identity_cache.get(dimension)
        if cov is None:
            one, zero = ParamPoly.constant(1), ParamPoly()
            cov = cls(
                [
                    [one if i == j else zero for j in range(dimension)]
                    for i in range(dimension)
                ]
            )
            cls._identity_cache[dimension] = cov
        return cov

    @classmethod
    def bivariate(cls, rho: Union[ParamPoly, int, Fraction, None] = None) -> "CovSpec":
        """Unit-variance pair with correlation ``rho`` (symbolic by default)."""
        r = ParamPoly.variable("rho") if rho is None else _coerce_entry(rho)
        one = ParamPoly.constant(1)
        return cls([[one, r], [r, one]])

    @property
    def is_identity(self) -> bool:
        return self._is_identity

    def parameters(self) -> tuple[str, ...]:
        names: set[str] = set()
        for row in self.entries:
            for entry in row:
                names.update(entry.variables)
        return tuple(sorted(names))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CovSpec):
            return NotImplemented
        return self.dimension == other.dimension and self.entries == other.entries

    __hash__ = None

    def numeric_matrix(self, assignment: Mapping[str, float] | None = None):
        assignment = assignment or {}
        return [
            [entry.evaluate_float(assignment) for entry in row] for row in self.entries
        ]

    def cholesky_factor(
        self, assignment: Mapping[str, float] | None = None, tol: float = 1e-10
    ) -> list[list[float]]:
        """Pivoted Cholesky factor F with sigma = F F^T.

        Raises ValueError when the evaluated matrix has a pivot below -tol,
        i.e. is not positive semidefinite at this evaluation point.
        """
        d = self.dimension
        m = [row[:] for row in self.numeric_matrix(assignment)]
        lower = [[0.0] * d for _ in range(d)]
        perm = list(range(d))
        for k in range(d):
            j = max(range(k, d), key=lambda t: m[t][t])
            if m[j][j] < -tol:
                raise ValueError(
                    f"covariance is not PSD at this evaluation point "
                    f"(pivot {m[j][j]:.3e})"
                )
            if j != k:
                m[k], m[j] = m[j], m[k]
                for row in m:
                    row[k], row[j] = row[j], row[k]
                lower[k], lower[j] = lower[j], lower[k]
                perm[k], perm[j] = perm[j], perm[k]
            pivot = m[k][k]
            if pivot <= tol:
                for t in range(k, d):
                    if m[t][t] < -tol:
                        raise ValueError(
                            f"covariance is not PSD at this evaluation point "
                            f"(pivot {m[t][t]:.3e})"
                        )
                break
            root = math.sqrt(pivot)
            lower[k][k] = root
            for i in range(k + 1, d):
                lower[i][k] = m[i][k] / root
            for i in range(k + 1, d):
                lik = lower[i][k]
                if lik:
                    for j2 in range(k + 1, i + 1):
                        m[i][j2] -= lik * lower[j2][k]
                        m[j2][i] = m[i][j2]
        factor = [[0.0] * d for _ in range(d)]
        for i, target in enumerate(perm):
            factor[target] = lower[i]
        return factor


# ---------------------------------------------------------------------------
# Moments.
# ---------------------------------------------------------------------------


def _moment(cov: CovSpec, multidegree: tuple[int, ...]) -> ParamPoly:
    """Memoized moment of one monomial; assumes the multidegree is validated."""
    if sum(multidegree) % 2:
        return ParamPoly()
    cached = cov._moment_cache.get(multidegree)
    if cached is not None:
        return cached
    if cov.is_identity:
        value = 1
        for e in multidegree:
            if e:
                value *= gaussian_moment_1d(e)
        result = ParamPoly.constant(value)
    else:
        result = _pairing_recursion(cov, multidegree)
    cov._moment_cache[multidegree] = result
    return result


def _pairing_recursion(cov: CovSpec, md: tuple[int, ...]) -> ParamPoly:
    total = sum(md)
    if total == 0:
        return ParamPoly.constant(1)
    if total % 2:
        return ParamPoly()
    cached = cov._moment_cache.get(md)
    if cached is not None:
        return cached
    i = next(k for k, e in enumerate(md) if e)
    beta = md[:i] + (md[i] - 1,) + md[i + 1 :]
    acc = ParamPoly()
    for k, remaining in enumerate(beta):
        if remaining:
            reduced = beta[:k] + (remaining - 1,) + beta[k + 1 :]
            acc = acc + remaining * cov.entries[i][k] * _pairing_recursion(cov, reduced)
    cov._moment_cache[md] = acc
    return acc


def gaussian_moment(multidegree: Sequence[int], cov: CovSpec) -> ParamPoly:
    """E[prod_i Z_i^{multidegree[i]}] for the centered Gaussian vector of ``cov``.

    Pairing recursion on the first remaining factor, memoized per covariance.
    Zero whenever the total degree is odd.
    """
    md = tuple(int(e) for e in multidegree)
    if len(md) != cov.dimension:
        raise ValueError(
            f"multidegree length {len(md)} does not match dimension {cov.dimension}"
        )
    if any(e < 0 for e in md):
        raise ValueError("multidegree entries must be non-negative")
    if sum(md) > DEGREE_CAP:
        raise DegreeCapError(f"total degree {sum(md)} exceeds cap {DEGREE_CAP}")
    return _moment(cov, md)


def gaussian_moment_bivariate_conditional(n: int, m: int) -> ParamPoly:
    """E[U^n V^m] for unit-variance correlated Gaussians, via conditioning.

    Writes V | U=x as N(rho*x, 1 - rho^2) and integrates the conditional
    moment term by term; only even powers of the conditional spread
    contribute, so the answer is an exact polynomial in rho.  Independent of
    the pairing recursion used by :func:`gaussian_moment`.
    """
    if n < 0 or m < 0:
        raise ValueError("powers must be non-negative")
    if n + m > DEGREE_CAP:
        raise DegreeCapError(f"total degree {n + m} exceeds cap {DEGREE_CAP}")
    rho = ParamPoly.variable("rho")
    spread_sq = 1 - rho * rho  # Var(V | U)
    total = ParamPoly()
    for k in range(0, m + 1, 2):
        outer = n + m - k
        if outer % 2:
            continue
        weight = math.comb(m, k) * gaussian_moment_1d(k) * gaussian_moment_1d(outer)
        if weight:
            total = total + weight * rho ** (m - k) * spread_sq ** (k // 2)
    return total


# ---------------------------------------------------------------------------
# Polynomial functionals.
# ---------------------------------------------------------------------------


class GaussianPolynomial:
    """Polynomial of the coordinates of a Gaussian vector.

    ``terms`` maps a coordinate-exponent tuple (length = dimension) to an
    exact ParamPoly coefficient, so the same object covers both plain
    rational functionals and families swept by symbolic parameters.
    """

    __slots__ = ("cov", "terms")

    def __init__(
        self,
        cov: CovSpec,
        terms: Mapping[tuple[int, ...], Union[ParamPoly, int, Fraction]] | None = None,
    ):
        self.cov = cov
        cleaned: dict[tuple[int, ...], ParamPoly] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != cov.dimension:
                raise ValueError(
                    f"exponent tuple {exps!r} does not match dimension {cov.dimension}"
                )
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            coeff = _coerce_entry(coeff)
            if not coeff.is_zero:
                existing = cleaned.get(exps)
                cleaned[exps] = coeff if existing is None else existing + coeff
        self.terms = {e: c for e, c in cleaned.items() if not c.is_zero}

    @classmethod
    def constant(cls, cov: CovSpec, value) -> "GaussianPolynomial":
        return cls(cov, {(0,) * cov.dimension: _coerce_entry(value)})

    @classmethod
    def coordinate(cls, cov: CovSpec, index: int, power: int = 1) -> "GaussianPolynomial":
        exps = [0] * cov.dimension
        exps[index] = power
        return cls(cov, {tuple(exps): 1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def _require_same_cov(self, other: "GaussianPolynomial"):
        if self.cov is not other.cov and self.cov != other.cov:
            raise ValueError("operands live over different covariances")

    def __add__(self, other) -> "GaussianPolynomial":
        if not isinstance(other, GaussianPolynomial):
            return self + GaussianPolynomial.constant(self.cov, other)
        self._require_same_cov(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            existing = out.get(exps)
            out[exps] = c if existing is None else existing + c
        return GaussianPolynomial(self.cov, out)

    __radd__ = __add__

    def __neg__(self) -> "GaussianPolynomial":
        return GaussianPolynomial(self.cov, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "GaussianPolynomial":
        if not isinstance(other, GaussianPolynomial):
            other = GaussianPolynomial.constant(self.cov, other)
        return self + (-other)

    def __mul__(self, other) -> "GaussianPolynomial":
        if not isinstance(other, GaussianPolynomial):
            # scalar (int / Fraction / ParamPoly) scaling
            scale = _coerce_entry(other)
            return GaussianPolynomial(
                self.cov, {e: c * scale for e, c in self.terms.items()}
            )
        self._require_same_cov(other)
        out: dict[tuple[int, ...], ParamPoly] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                prod = ca * cb
                existing = out.get(key)
                out[key] = prod if existing is None else existing + prod
        return GaussianPolynomial(self.cov, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "GaussianPolynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = GaussianPolynomial.constant(self.cov, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussianPolynomial):
            return NotImplemented
        return self.cov == other.cov and self.terms == other.terms

    __hash__ = None

    def partial_derivative(self, index: int) -> "GaussianPolynomial":
        """d/dx_index, treating the coordinates as plain variables."""
        out: dict[tuple[int, ...], ParamPoly] = {}
        for exps, c in self.terms.items():
            e = exps[index]
            if e:
                key = exps[:index] + (e - 1,) + exps[index + 1 :]
                scaled = c * e
                existing = out.get(key)
                out[key] = scaled if existing is None else existing + scaled
        return GaussianPolynomial(self.cov, out)

    def __repr__(self) -> str:
        return f"GaussianPolynomial({len(self.terms)} terms, d={self.cov.dimension})"


def expectation(f: GaussianPolynomial) -> ParamPoly:
    """E[f] as an exact polynomial in the covariance parameters."""
    total = ParamPoly()
    for exps, coeff in f.terms.items():
        degree = sum(exps)
        if degree > DEGREE_CAP:
            raise DegreeCapError(f"monomial degree {degree} exceeds cap {DEGREE_CAP}")
        if degree % 2:
            continue
        total = total + coeff * _moment(f.cov, exps)
    return total


def _parity_classes(f: GaussianPolynomial, identity: bool):
    groups: dict[tuple, list] = {}
    for exps, coeff in f.terms.items():
        if identity:
            sig = tuple(i for i, e in enumerate(exps) if e % 2)
        else:
            sig = (sum(exps) % 2,)
        groups.setdefault(sig, []).append((exps, coeff))
    return groups


def expectation_of_product(f: GaussianPolynomial, g: GaussianPolynomial) -> ParamPoly:
    """E[f * g] without materializing the product polynomial.

    Terms are bucketed by parity signature (coordinatewise for independent
    coordinates, total parity otherwise); only matching buckets can produce
    a non-vanishing moment.
    """
    f._require_same_cov(g)
    if f.total_degree() + g.total_degree() > DEGREE_CAP:
        raise DegreeCapError(
            f"product degree {f.total_degree() + g.total_degree()} exceeds cap "
            f"{DEGREE_CAP}"
        )
    identity = f.cov.is_identity
    left = _parity_classes(f, identity)
    right = _parity_classes(g, identity)
    total = ParamPoly()
    for sig, fterms in left.items():
        gterms = right.get(sig)
        if not gterms:
            continue
        for ea, ca in fterms:
            for eb, cb in gterms:
                key = tuple(x + y for x, y in zip(ea, eb))
                total = total + ca * cb * _moment(f.cov, key)
    return total


def cumulant(f: GaussianPolynomial, order: int) -> ParamPoly:
    """Cumulant of f of the given order (1 through 6), exactly.

    Uses the raw-moment recursion
    kappa_n = mu_n - sum_{k<n} C(n-1, k-1) * kappa_k * mu_{n-k};
    order 4 therefore equals E[(f - Ef)^4] - 3 E[(f - Ef)^2]^2.
    """
    if not isinstance(order, int) or not 1 <= order <= 6:
        raise ValueError(f"cumulant order must be in 1..6, got {order!r}")
    degree = f.total_degree()
    if order * max(degree, 1) > DEGREE_CAP:
        raise DegreeCapError(
            f"order {order} of a degree-{degree} functional exceeds cap {DEGREE_CAP}"
        )
    raw: dict[int, ParamPoly] = {1: expectation(f)}
    if order >= 2:
        raw[2] = expectation_of_product(f, f)
    if order >= 3:
        f2 = f * f
        raw[3] = expectation_of_product(f2, f)
    if order >= 4:
        raw[4] = expectation_of_product(f2, f2)
    if order >= 5:
        f3 = f2 * f
        raw[5] = expectation_of_product(f2, f3)
    if order >= 6:
        raw[6] = expectation_of_product(f3, f3)
    kappa: dict[int, ParamPoly] = {}
    for n in range(1, order + 1):
        acc = raw[n]
        for k in range(1, n):
            acc = acc - math.comb(n - 1, k - 1) * kappa[k] * raw[n - k]
        kappa[n] = acc
    return kappa[order]
