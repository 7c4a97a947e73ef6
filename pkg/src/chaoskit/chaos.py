"""Symmetric tensor calculus over a finite orthonormal system.

Conventions used throughout:

* A :class:`SymTensor` of order p stores one exact value per sorted
  multi-index; the value is shared by every permutation of that index.
* Norms are full-tensor Euclidean norms: ``|u|^2`` sums the squared entry
  over all index permutations, i.e. orbit size times the stored square.
* ``multiple_integral`` maps a kernel to the polynomial whose coefficient on
  ``prod_i H_{a_i}(x_i)`` is the kernel entry times its orbit size, which
  gives the isometry E[I_p(u) I_q(v)] = (p == q) * p! * <u, v>.
* The carre-du-champ operator is oriented so that E[gamma(X)] equals the
  variance of X.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .algebra import hermite
from .wick import (
    CovSpec,
    GaussianPolynomial,
    cumulant,
    expectation,
    expectation_of_product,
)

__all__ = [
    "SymTensor",
    "Tensor",
    "ChaosElement",
    "HVector",
    "ProductExpansion",
    "Kappa4Decomposition",
    "MixedTermBound",
    "symmetrize",
    "contract",
    "contract_sym",
    "multiple_integral",
    "product_formula_expand",
    "malliavin_derivative",
    "ou_apply",
    "ou_inverse",
    "gamma",
    "gamma_variance",
    "stein_bound",
    "kappa4_exact",
    "kappa4_decomposition",
    "max_contraction_norms",
    "mixed_term_bound_check",
]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise TypeError(f"exact rational expected, got {type(value).__name__}")


def _orbit_size(idx: tuple[int, ...]) -> int:
    """Number of distinct permutations of a sorted multi-index."""
    size = math.factorial(len(idx))
    for _, group in itertools.groupby(idx):
        size //= math.factorial(sum(1 for _ in group))
    return size


class SymTensor:
    """Symmetric order-p tensor with exact rational entries.

    ``coeffs`` maps each sorted multi-index (length ``order``, entries in
    ``range(dimension)``) to the common value of the tensor on that orbit.
    Zero values are not stored.
    """

    __slots__ = ("dimension", "order", "coeffs")

    def __init__(
        self,
        dimension: int,
        order: int,
        coeffs: Mapping[tuple[int, ...], Union[Fraction, int]] | None = None,
    ):
        if not isinstance(order, int) or order < 1:
            raise ValueError(f"order must be a positive integer, got {order!r}")
        if not isinstance(dimension, int) or dimension < 1:
            raise ValueError(f"dimension must be a positive integer, got {dimension!r}")
        cleaned: dict[tuple[int, ...], Fraction] = {}
        for idx, value in (coeffs or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != order:
                raise ValueError(f"index {idx!r} does not have order {order}")
            if any(not 0 <= i < dimension for i in idx):
                raise ValueError(f"index {idx!r} out of range for dimension {dimension}")
            if list(idx) != sorted(idx):
                raise ValueError(f"index {idx!r} is not sorted; store orbit values once")
            v = _as_fraction(value)
            if v:
                cleaned[idx] = v
        self.dimension = dimension
        self.order = order
        self.coeffs = cleaned

    @classmethod
    def basis(cls, dimension: int, index: int) -> "SymTensor":
        """The order-1 coordinate vector e_index."""
        return cls(dimension, 1, {(index,): 1})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def norm_sq(self) -> Fraction:
        """Full-tensor squared Euclidean norm (orbit-weighted)."""
        return sum(
            (_orbit_size(idx) * c * c for idx, c in self.coeffs.items()),
            Fraction(0),
        )

    def norm(self) -> float:
        return math.sqrt(float(self.norm_sq()))

    def inner(self, other: "SymTensor") -> Fraction:
        """Full-tensor inner product <self, other>."""
        if (self.dimension, self.order) != (other.dimension, other.order):
            raise ValueError("inner product needs matching dimension and order")
        small, large = self.coeffs, other.coeffs
        if len(small) > len(large):
            small, large = large, small
        total = Fraction(0)
        for idx, c in small.items():
            d = large.get(idx)
            if d is not None:
                total += _orbit_size(idx) * c * d
        return total

    def full_items(self):
        """Yield every (full index, value) pair, one per distinct permutation."""
        for idx, value in self.coeffs.items():
            for perm in set(itertools.permutations(idx)):
                yield perm, value

    def slot(self, index: int) -> "SymTensor":
        """Contract one slot against the basis vector e_index (order >= 2)."""
        if self.order < 2:
            raise ValueError("slot contraction needs order >= 2")
        out: dict[tuple[int, ...], Fraction] = {}
        for idx, value in self.coeffs.items():
            if index in idx:
                pos = idx.index(index)
                out[idx[:pos] + idx[pos + 1 :]] = value
        return SymTensor(self.dimension, self.order - 1, out)

    def scale(self, factor: Union[Fraction, int]) -> "SymTensor":
        factor = _as_fraction(factor)
        return SymTensor(
            self.dimension,
            self.order,
            {idx: c * factor for idx, c in self.coeffs.items()},
        )

    def __add__(self, other: "SymTensor") -> "SymTensor":
        if not isinstance(other, SymTensor):
            return NotImplemented
        if (self.dimension, self.order) != (other.dimension, other.order):
            raise ValueError("sum needs matching dimension and order")
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            out[idx] = out.get(idx, Fraction(0)) + c
        return SymTensor(self.dimension, self.order, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymTensor):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"SymTensor(d={self.dimension}, order={self.order}, nnz={len(self.coeffs)})"


class Tensor:
    """General (not necessarily symmetric) tensor stored by full index."""

    __slots__ = ("dimension", "order", "entries")

    def __init__(
        self,
        dimension: int,
        order: int,
        entries: Mapping[tuple[int, ...], Union[Fraction, int]] | None = None,
    ):
        if order < 0:
            raise ValueError("order must be non-negative")
        cleaned: dict[tuple[int, ...], Fraction] = {}
        for idx, value in (entries or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != order:
                raise ValueError(f"index {idx!r} does not have order {order}")
            if any(not 0 <= i < dimension for i in idx):
                raise ValueError(f"index {idx!r} out of range")
            v = _as_fraction(value)
            if v:
                cleaned[idx] = v
        self.dimension = dimension
        self.order = order
        self.entries = cleaned

    def norm_sq(self) -> Fraction:
        return sum((c * c for c in self.entries.values()), Fraction(0))

    def norm(self) -> float:
        return math.sqrt(float(self.norm_sq()))

    def scalar_value(self) -> Fraction:
        if self.order != 0:
            raise ValueError("scalar_value needs an order-0 tensor")
        return self.entries.get((), Fraction(0))

    def __repr__(self) -> str:
        return f"Tensor(d={self.dimension}, order={self.order}, nnz={len(self.entries)})"


def symmetrize(
    source: Union[Tensor, SymTensor, Mapping[tuple[int, ...], Union[Fraction, int]]],
    dimension: int | None = None,
    order: int | None = None,
) -> SymTensor:
    """Symmetrize a tensor: average the entries over each index orbit.

    Accepts a :class:`Tensor`, a full-index mapping (``dimension`` and
    ``order`` then required), or a :class:`SymTensor` (returned unchanged;
    symmetrization is idempotent).
    """
    if isinstance(source, SymTensor):
        return source
    if isinstance(source, Tensor):
        entries, dimension, order = source.entries, source.dimension, source.order
    else:
        if dimension is None or order is None:
            raise ValueError("mapping input needs explicit dimension and order")
        entries = source
    sums: dict[tuple[int, ...], Fraction] = {}
    for idx, value in entries.items():
        key = tuple(sorted(idx))
        sums[key] = sums.get(key, Fraction(0)) + _as_fraction(value)
    coeffs = {idx: total / _orbit_size(idx) for idx, total in sums.items()}
    return SymTensor(dimension, order, coeffs)


def contract(u: SymTensor, v: SymTensor, r: int) -> Tensor:
    """The r-fold contraction u (x)_r v over the last r slots of each kernel.

    Result has order p + q - 2r and is in general not symmetric.  r = 0 is
    the tensor product; r = p = q gives the order-0 tensor <u, v>.
    """
    if u.dimension != v.dimension:
        raise ValueError("contraction needs matching dimensions")
    if not 0 <= r <= min(u.order, v.order):
        raise ValueError(f"contraction order r={r} out of range")
    p, q = u.order, v.order
    lead_v: dict[tuple[int, ...], list] = {}
    for full, value in v.full_items():
        lead_v.setdefault(full[q - r :], []).append((full[: q - r], value))
    out: dict[tuple[int, ...], Fraction] = {}
    for full, value in u.full_items():
        matches = lead_v.get(full[p - r :])
        if not matches:
            continue
        head = full[: p - r]
        for tail, w in matches:
            key = head + tail
            prod = value * w
            if key in out:
                out[key] += prod
            else:
                out[key] = prod
    return Tensor(u.dimension, p + q - 2 * r, out)


def contract_sym(u: SymTensor, v: SymTensor, r: int) -> SymTensor:
    """Symmetrized contraction; requires a result of order >= 1."""
    raw = contract(u, v, r)
    if raw.order == 0:
        raise ValueError("symmetrized contraction is undefined for order 0")
    return symmetrize(raw)


# ---------------------------------------------------------------------------
# Chaos elements and multiple integrals.
# ---------------------------------------------------------------------------


class ChaosElement:
    """Finite sum of multiple integrals, stored as {order: kernel}."""

    __slots__ = ("dimension", "components", "_compiled")

    def __init__(self, dimension: int, components: Mapping[int, SymTensor]):
        cleaned: dict[int, SymTensor] = {}
        for order, tensor in components.items():
            if not isinstance(order, int) or order < 1:
                raise ValueError(f"component orders must be >= 1, got {order!r}")
            if tensor.order != order:
                raise ValueError(
                    f"kernel of order {tensor.order} filed under order {order}"
                )
            if tensor.dimension != dimension:
                raise ValueError("component dimension mismatch")
            if not tensor.is_zero:
                cleaned[order] = tensor
        self.dimension = dimension
        self.components = dict(sorted(cleaned.items()))
        self._compiled: GaussianPolynomial | None = None

    @property
    def is_zero(self) -> bool:
        return not self.components

    def variance(self) -> Fraction:
        """E[X^2] = sum_p p! * |u_p|^2, exactly."""
        return sum(
            (math.factorial(p) * u.norm_sq() for p, u in self.components.items()),
            Fraction(0),
        )

    def compile(self) -> GaussianPolynomial:
        """Expand into an explicit polynomial of i.i.d. coordinates (cached)."""
        if self._compiled is None:
            poly = GaussianPolynomial(CovSpec.identity(self.dimension), {})
            for u in self.components.values():
                poly = poly + multiple_integral(u)
            self._compiled = poly
        return self._compiled

    def scale(self, factor: Union[Fraction, int]) -> "ChaosElement":
        return ChaosElement(
            self.dimension,
            {p: u.scale(factor) for p, u in self.components.items()},
        )

    def __add__(self, other: "ChaosElement") -> "ChaosElement":
        if not isinstance(other, ChaosElement):
            return NotImplemented
        if self.dimension != other.dimension:
            raise ValueError("sum needs matching dimensions")
        out = dict(self.components)
        for p, u in other.components.items():
            out[p] = out[p] + u if p in out else u
        return ChaosElement(self.dimension, out)

    def __repr__(self) -> str:
        orders = ", ".join(str(p) for p in self.components)
        return f"ChaosElement(d={self.dimension}, orders=[{orders}])"


@dataclass(frozen=True)
class HVector:
    """Coordinate vector of polynomial functionals (e.g. a Malliavin gradient)."""

    dimension: int
    entries: tuple[GaussianPolynomial, ...]

    def __post_init__(self):
        if len(self.entries) != self.dimension:
            raise ValueError("entry count must equal the dimension")


def multiple_integral(u: SymTensor) -> GaussianPolynomial:
    """I_p(u) as a polynomial of i.i.d. standard Gaussian coordinates.

    The coefficient of prod_i H_{a_i}(x_i) is the stored kernel value times
    the orbit size of its index, where a is the index multiplicity vector.
    """
    d = u.dimension
    cov = CovSpec.identity(d)
    acc: dict[tuple[int, ...], Fraction] = {}
    for idx, value in u.coeffs.items():
        mult = [0] * d
        for i in idx:
            mult[i] += 1
        coef = value * _orbit_size(idx)
        partial: list[tuple[dict[int, int], Fraction]] = [({}, coef)]
        for i, a in enumerate(mult):
            if not a:
                continue
            hcoeffs = hermite(a).coefficients
            grown = []
            for exps, c in partial:
                for k, hk in enumerate(hcoeffs):
                    if hk:
                        e = dict(exps)
                        if k:
                            e[i] = k
                        grown.append((e, c * hk))
            partial = grown
        for exps, c in partial:
            key = tuple(exps.get(j, 0) for j in range(d))
            acc[key] = acc.get(key, Fraction(0)) + c
    return GaussianPolynomial(cov, acc)


@dataclass(frozen=True)
class ProductExpansion:
    """I_p(u) * I_q(v) rewritten as chaos components plus an order-0 part."""

    element: ChaosElement
    constant: Fraction


def product_formula_expand(u: SymTensor, v: SymTensor) -> ProductExpansion:
    """Expand I_p(u) I_q(v) = sum_r r! C(p,r) C(q,r) I_{p+q-2r}(sym contraction).

    The r = p = q term is an order-0 constant and is reported separately.
    """
    if u.dimension != v.dimension:
        raise ValueError("product formula needs matching dimensions")
    p, q = u.order, v.order
    components: dict[int, SymTensor] = {}
    constant = Fraction(0)
    for r in range(0, min(p, q) + 1):
        coef = math.factorial(r) * math.comb(p, r) * math.comb(q, r)
        raw = contract(u, v, r)
        if raw.order == 0:
            constant += coef * raw.scalar_value()
            continue
        tensor = symmetrize(raw).scale(coef)
        if tensor.is_zero:
            continue
        components[raw.order] = (
            components[raw.order] + tensor if raw.order in components else tensor
        )
    return ProductExpansion(ChaosElement(u.dimension, components), constant)


# ---------------------------------------------------------------------------
# Malliavin-style operators.
# ---------------------------------------------------------------------------


def _coordinate_gradient(X: ChaosElement, weight) -> list[GaussianPolynomial]:
    """Per-coordinate gradient with an order-dependent scalar weight.

    weight(p) = p gives the derivative D; weight(p) = 1 gives -D L^{-1}.
    """
    d = X.dimension
    cov = CovSpec.identity(d)
    out = []
    for i in range(d):
        poly = GaussianPolynomial(cov, {})
        for p, u in X.components.items():
            w = weight(p)
            if p == 1:
                c = u.coeffs.get((i,))
                if c:
                    poly = poly + GaussianPolynomial.constant(cov, w * c)
            else:
                slot = u.slot(i)
                if not slot.is_zero:
                    poly = poly + multiple_integral(slot) * w
        out.append(poly)
    return out


def malliavin_derivative(X: ChaosElement) -> HVector:
    """The gradient D X; coordinate i is sum_p p * I_{p-1}(u_p(., e_i))."""
    return HVector(X.dimension, tuple(_coordinate_gradient(X, lambda p: p)))


def ou_apply(X: ChaosElement) -> ChaosElement:
    """Number operator: multiply the order-p component by p."""
    return ChaosElement(
        X.dimension, {p: u.scale(p) for p, u in X.components.items()}
    )


def ou_inverse(X: ChaosElement) -> ChaosElement:
    """Pseudo-inverse of the number operator on centered elements: scale by -1/p."""
    return ChaosElement(
        X.dimension,
        {p: u.scale(Fraction(-1, p)) for p, u in X.components.items()},
    )


def gamma(X: ChaosElement) -> GaussianPolynomial:
    """Carre-du-champ gamma(X) = <DX, -D L^{-1} X>, oriented so E[gamma] = Var X."""
    dx = _coordinate_gradient(X, lambda p: p)
    anti = _coordinate_gradient(X, lambda p: 1)
    cov = CovSpec.identity(X.dimension)
    total = GaussianPolynomial(cov, {})
    for a, b in zip(dx, anti):
        if a.is_zero or b.is_zero:
            continue
        total = total + a * b
    return total


def gamma_variance(X: ChaosElement) -> Fraction:
    """Var(gamma(X)), exactly."""
    g = gamma(X)
    mean = expectation(g).constant_value()
    second = expectation_of_product(g, g).constant_value()
    return second - mean * mean


def stein_bound(X: ChaosElement, which: str = "combined") -> float:
    """Distance bound to the centered Gaussian with the same variance.

    wasserstein: (1/sigma) * sqrt(Var gamma);  tv: (2/sigma^2) * sqrt(Var gamma);
    combined: 2 / min(sigma, sigma^2) * sqrt(Var gamma).
    """
    variance = float(X.variance())
    if variance <= 0:
        raise ValueError("stein_bound needs a non-degenerate element")
    sigma = math.sqrt(variance)
    spread = math.sqrt(float(gamma_variance(X)))
    if which == "wasserstein":
        return spread / sigma
    if which == "tv":
        return 2.0 * spread / variance
    if which == "combined":
        return 2.0 * spread / min(sigma, variance)
    raise ValueError(f"unknown bound kind {which!r}")


# ---------------------------------------------------------------------------
# Fourth-cumulant machinery.
# ---------------------------------------------------------------------------


def kappa4_exact(X: ChaosElement) -> Fraction:
    """The fourth cumulant of X, exactly."""
    return cumulant(X.compile(), 4).constant_value()


@dataclass(frozen=True)
class Kappa4Decomposition:
    k4x: Fraction
    k4y: Fraction
    k4z: Fraction
    cov_sq: Fraction


def kappa4_decomposition(Y: SymTensor, Z: SymTensor) -> Kappa4Decomposition:
    """Split kappa4(I_p(Y) + I_q(Z)) for kernels of different order parity.

    Returns the exact pieces and verifies, as hard invariants, that the odd
    cross moments vanish, that Cov(Y^2, Z^2) >= 0, and that
    k4x = k4y + k4z + 6 Cov(Y^2, Z^2).
    """
    if (Y.order - Z.order) % 2 == 0:
        raise ValueError("kernels must have orders of different parity")
    if Y.dimension != Z.dimension:
        raise ValueError("kernels must share a dimension")
    y = multiple_integral(Y)
    z = multiple_integral(Z)
    y2, z2 = y * y, z * z
    ey2 = expectation(y2).constant_value()
    ez2 = expectation(z2).constant_value()
    ey4 = expectation_of_product(y2, y2).constant_value()
    ez4 = expectation_of_product(z2, z2).constant_value()
    ey2z2 = expectation_of_product(y2, z2).constant_value()
    yz = y * z
    ey3z = expectation_of_product(y2, yz).constant_value()
    eyz3 = expectation_of_product(yz, z2).constant_value()
    if ey3z or eyz3:
        raise RuntimeError("odd cross moments failed to vanish; engine inconsistency")
    k4y = ey4 - 3 * ey2 * ey2
    k4z = ez4 - 3 * ez2 * ez2
    cov_sq = ey2z2 - ey2 * ez2
    if cov_sq < 0:
        raise RuntimeError("Cov(Y^2, Z^2) negative; engine inconsistency")
    x = y + z
    x2 = x * x
    ex2 = expectation(x2).constant_value()
    ex4 = expectation_of_product(x2, x2).constant_value()
    k4x = ex4 - 3 * ex2 * ex2
    if k4x != k4y + k4z + 6 * cov_sq:
        raise RuntimeError("fourth-cumulant split failed; engine inconsistency")
    return Kappa4Decomposition(k4x=k4x, k4y=k4y, k4z=k4z, cov_sq=cov_sq)


def max_contraction_norms(u: SymTensor) -> float:
    """max over r in 1..p-1 of |u (x)_r u| (0.0 when the order is 1)."""
    if u.order == 1:
        return 0.0
    return max(
        math.sqrt(float(contract(u, u, r).norm_sq())) for r in range(1, u.order)
    )


@dataclass(frozen=True)
class MixedTermBound:
    """Exact left side, float right side, and an exactly decided verdict."""

    lhs: Fraction
    rhs: float
    holds: bool


def mixed_term_bound_check(u: SymTensor, v: SymTensor) -> MixedTermBound:
    """Check the cross-term estimate for kernels of orders p < q.

    lhs = E[(q^{-1} <D I_p(u), D I_q(v)>)^2], computed exactly.  The bound is

        p!^2 C(q-1, p-1)^2 (q-p)! |u|^2 |v (x)_{q-p} v|
        + (p^2/2) sum_{r=1}^{p-1} (r-1)!^2 C(p-1, r-1)^2 C(q-1, r-1)^2
          (p+q-2r)! (|u (x)_{p-r} u|^2 + |v (x)_{p-r} v|^2).

    The verdict compares lhs with A*sqrt(B) + C using exact rational
    arithmetic (squaring out the single square root), so it never depends on
    floating-point rounding.
    """
    p, q = u.order, v.order
    if p >= q:
        raise ValueError(f"requires p < q, got p={p}, q={q}")
    if u.dimension != v.dimension:
        raise ValueError("kernels must share a dimension")
    d = u.dimension
    cov = CovSpec.identity(d)

    g = GaussianPolynomial(cov, {})
    for i in range(d):
        if p == 1:
            c = u.coeffs.get((i,))
            left = GaussianPolynomial.constant(cov, c) if c else None
        else:
            slot = u.slot(i)
            left = multiple_integral(slot) if not slot.is_zero else None
        if left is None:
            continue
        vslot = v.slot(i)
        if vslot.is_zero:
            continue
        g = g + left * multiple_integral(vslot)
    g = g * p
    lhs = expectation_of_product(g, g).constant_value()

    A = (
        Fraction(
            math.factorial(p) ** 2
            * math.comb(q - 1, p - 1) ** 2
            * math.factorial(q - p)
        )
        * u.norm_sq()
    )
    B = contract(v, v, q - p).norm_sq()
    S = Fraction(0)
    for r in range(1, p):
        coef = (
            math.factorial(r - 1) ** 2
            * math.comb(p - 1, r - 1) ** 2
            * math.comb(q - 1, r - 1) ** 2
            * math.factorial(p + q - 2 * r)
        )
        S += coef * (contract(u, u, p - r).norm_sq() + contract(v, v, p - r).norm_sq())
    C = Fraction(p * p, 2) * S

    slack = lhs - C
    holds = slack <= 0 or slack * slack <= A * A * B
    rhs = float(A) * math.sqrt(float(B)) + float(C)
    return MixedTermBound(lhs=lhs, rhs=rhs, holds=holds)
