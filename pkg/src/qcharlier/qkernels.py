"""q-calculus primitives on the exponential lattice x(s) = (q^s - 1)/(q - 1).

Everything here is generic over the scalar backend carried by `QContext`:
exact contexts hold `Fraction` values of t (with q = t**2 so that the
half-integer lattice powers q**(1/2) stay inside the rational field), while
approximate contexts hold floats.  The module provides q-integers,
q-factorials, q-Pochhammer symbols, Gaussian binomials, the numeric q-Gamma
function, the discrete weights, and the degree-triangular change of basis
between monomials in X = x(s) and the falling-factorial polynomials
[s]^(k) = x(s) x(s-1) ... x(s-k+1).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple

from .scalars import Scalar, parse_scalar

MONOMIAL = "monomial_x"
FALLING = "falling_factorial"

#: range of integer exponents k probed by the alpha_i/alpha_j != q^k guard
RATIO_GUARD_RANGE = 64

#: relative tolerance of the numeric q-Gamma evaluation
GAMMA_TOLERANCE = 1e-12


class ValidationError(ValueError):
    """Parameter bundle violates a named guard."""

    def __init__(self, guard: str, message: str):
        super().__init__(f"{guard}: {message}")
        self.guard = guard


@dataclass(frozen=True)
class QContext:
    """Validated parameter bundle shared by every construction.

    t is the square root of the deformation parameter (q = t**2); alphas are
    the r positive weight parameters.  `exact` tells which scalar backend the
    fields live in.  Instances are immutable and safe to share.
    """

    t: Scalar
    q: Scalar
    alphas: Tuple[Scalar, ...]
    exact: bool = True

    @property
    def r(self) -> int:
        return len(self.alphas)

    @classmethod
    def from_t(cls, t, alphas) -> "QContext":
        """Exact context from rational t (q = t**2)."""
        t = parse_scalar(t) if isinstance(t, str) else Fraction(t)
        parsed = tuple(parse_scalar(a) if isinstance(a, str) else Fraction(a) for a in alphas)
        ctx = cls(t=t, q=t * t, alphas=parsed, exact=True)
        ctx.validate()
        return ctx

    @classmethod
    def from_q_float(cls, q: float, alphas: Iterable[float]) -> "QContext":
        """Approximate context from q directly (t = sqrt(q) numerically)."""
        q = float(q)
        if q <= 0:
            raise ValidationError("positivity", f"q must be positive, got {q}")
        ctx = cls(t=math.sqrt(q), q=q, alphas=tuple(float(a) for a in alphas), exact=False)
        ctx.validate()
        return ctx

    def validate(self) -> None:
        if self.t <= 0:
            raise ValidationError("positivity", f"t must be positive, got {self.t}")
        if self.q == 1 or self.t == 1:
            raise ValidationError("positivity", "q must differ from 1")
        if not self.alphas:
            raise ValidationError("positivity", "at least one weight parameter required")
        for a in self.alphas:
            if a <= 0:
                raise ValidationError("positivity", f"weight parameter must be positive, got {a}")
        for i, j in itertools.combinations(range(self.r), 2):
            if self.alphas[i] == self.alphas[j]:
                raise ValidationError(
                    "distinctness", f"alpha_{i + 1} == alpha_{j + 1} == {self.alphas[i]}"
                )
        for i, j in itertools.combinations(range(self.r), 2):
            ratio = self.alphas[i] / self.alphas[j]
            power = self.q ** (-RATIO_GUARD_RANGE)
            for k in range(-RATIO_GUARD_RANGE, RATIO_GUARD_RANGE + 1):
                if ratio == power:
                    raise ValidationError(
                        "ratio",
                        f"alpha_{i + 1}/alpha_{j + 1} equals q**{k}",
                    )
                power = power * self.q

    def require_convergent_measures(self) -> None:
        """Guard for operations that sum the weights as infinite series.

        For 0 < q < 1 the term ratio of the weight series tends to
        alpha*q*(1-q), so convergence needs alpha_i*q*(1-q) < 1.  For q > 1
        the factorial denominator grows super-exponentially and no constraint
        is needed (measure semantics there are experimental).
        """
        if self.q < 1:
            for i, a in enumerate(self.alphas):
                if a * self.q * (1 - self.q) >= 1:
                    raise ValidationError(
                        "convergence",
                        f"alpha_{i + 1}*q*(1-q) = {a * self.q * (1 - self.q)} >= 1",
                    )

    def with_alpha(self, i: int, value: Scalar) -> "QContext":
        """New validated context with the i-th weight parameter replaced."""
        alphas = list(self.alphas)
        alphas[i] = value
        ctx = QContext(t=self.t, q=self.q, alphas=tuple(alphas), exact=self.exact)
        ctx.validate()
        return ctx

    def with_all_alphas(self, alphas: Iterable[Scalar]) -> "QContext":
        ctx = QContext(t=self.t, q=self.q, alphas=tuple(alphas), exact=self.exact)
        ctx.validate()
        return ctx

    def zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0.0

    def one(self) -> Scalar:
        return Fraction(1) if self.exact else 1.0

    def scalar(self, value) -> Scalar:
        return Fraction(value) if self.exact else float(value)


@dataclass(frozen=True)
class MultiIndex:
    """Multi-index n = (n_1, ..., n_r) of nonnegative integers."""

    parts: Tuple[int, ...]

    def __init__(self, parts: Iterable[int]):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"multi-index parts must be nonnegative, got {parts}")
        object.__setattr__(self, "parts", parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def prefix_weight(self, i: int) -> int:
        """n_1 + ... + n_{i-1} for 0-based component i (0 when i == 0)."""
        return sum(self.parts[:i])

    def suffix_weight(self, i: int) -> int:
        """n_i + n_{i+1} + ... + n_r for 0-based component i."""
        return sum(self.parts[i:])

    def up(self, i: int) -> "MultiIndex":
        parts = list(self.parts)
        parts[i] += 1
        return MultiIndex(parts)

    def down(self, i: int) -> "MultiIndex":
        if self.parts[i] == 0:
            raise ValueError(f"component {i} of {self.parts} is already zero")
        parts = list(self.parts)
        parts[i] -= 1
        return MultiIndex(parts)

    @classmethod
    def coerce(cls, value) -> "MultiIndex":
        if isinstance(value, MultiIndex):
            return value
        if isinstance(value, int):
            return cls((value,))
        return cls(tuple(value))


@dataclass(frozen=True)
class LatticePoly:
    """Polynomial in X = x(s), in the monomial or falling-factorial basis.

    Coefficients are indexed by degree and kept trimmed, so degree is
    len(coeffs) - 1 and the zero polynomial has an empty tuple.
    """

    basis: str
    coeffs: Tuple[Scalar, ...]

    def __init__(self, basis: str, coeffs: Iterable[Scalar]):
        if basis not in (MONOMIAL, FALLING):
            raise ValueError(f"unknown basis {basis!r}")
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def monomial(cls, coeffs: Iterable[Scalar]) -> "LatticePoly":
        return cls(MONOMIAL, coeffs)

    @classmethod
    def falling(cls, coeffs: Iterable[Scalar]) -> "LatticePoly":
        return cls(FALLING, coeffs)

    @classmethod
    def zero(cls, basis: str = MONOMIAL) -> "LatticePoly":
        return cls(basis, ())

    @classmethod
    def one(cls, basis: str = MONOMIAL) -> "LatticePoly":
        return cls(basis, (Fraction(1),))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Scalar:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    @property
    def leading(self) -> Scalar:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _check_same(self, other: "LatticePoly"):
        if self.basis != other.basis:
            raise ValueError(f"basis mismatch: {self.basis} vs {other.basis}")

    def __add__(self, other: "LatticePoly") -> "LatticePoly":
        self._check_same(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return LatticePoly(
            self.basis,
            [self.coefficient(i) + other.coefficient(i) for i in range(n)],
        )

    def __sub__(self, other: "LatticePoly") -> "LatticePoly":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "LatticePoly":
        return LatticePoly(self.basis, [c * v for v in self.coeffs])

    def __mul__(self, other: "LatticePoly") -> "LatticePoly":
        # plain convolution; only meaningful in the monomial basis
        self._check_same(other)
        if self.basis != MONOMIAL:
            raise ValueError("product only defined in the monomial basis")
        if self.is_zero or other.is_zero:
            return LatticePoly.zero()
        out = [self.coeffs[0] * 0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LatticePoly(MONOMIAL, out)

    def times_x(self) -> "LatticePoly":
        if self.basis != MONOMIAL:
            raise ValueError("times_x only defined in the monomial basis")
        return LatticePoly(MONOMIAL, (0,) + self.coeffs)

    def evaluate(self, x: Scalar) -> Scalar:
        if self.basis != MONOMIAL:
            raise ValueError("evaluation only defined in the monomial basis")
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


# ---------------------------------------------------------------------------
# q primitives
# ---------------------------------------------------------------------------

def x_of(s: int, ctx: QContext) -> Scalar:
    """Lattice value x(s) = (q^s - 1)/(q - 1); any integer s."""
    return (ctx.q ** s - 1) / (ctx.q - 1)


def q_number(k: int, ctx: QContext) -> Scalar:
    """[k]_q, identical to x_of(k)."""
    return x_of(k, ctx)


def q_factorial(k: int, ctx: QContext) -> Scalar:
    if k < 0:
        raise ValueError("q-factorial needs a nonnegative argument")
    out = ctx.one()
    for j in range(1, k + 1):
        out *= q_number(j, ctx)
    return out


def q_falling_number(n: int, k: int, ctx: QContext) -> Scalar:
    """[n]^(k) = x(n) x(n-1) ... x(n-k+1); vanishes for integer 0 <= n < k."""
    out = ctx.one()
    for j in range(k):
        out *= x_of(n - j, ctx)
    return out


def q_pochhammer(a: Scalar, k: int, ctx: QContext) -> Scalar:
    """(a; q)_k = prod_{j=0}^{k-1} (1 - a q^j)."""
    if k < 0:
        raise ValueError("q-Pochhammer needs a nonnegative order")
    out = ctx.one()
    power = ctx.one()
    for _ in range(k):
        out *= 1 - a * power
        power *= ctx.q
    return out


def q_binomial(m: int, k: int, ctx: QContext) -> Scalar:
    """Gaussian binomial coefficient, equal to [m]^(k)/[k]!."""
    if not 0 <= k <= m:
        raise ValueError(f"binomial index out of range: ({m}, {k})")
    return q_falling_number(m, k, ctx) / q_factorial(k, ctx)


def binom2(n: int) -> int:
    """Integer n*(n-1)/2 (second binomial coefficient)."""
    return n * (n - 1) // 2


# ---------------------------------------------------------------------------
# falling-factorial basis
# ---------------------------------------------------------------------------

def falling_factorial_poly(k: int, ctx: QContext) -> LatticePoly:
    """[s]^(k) as a monomial polynomial: prod_{j=0}^{k-1} (X - x(j))/q^j.

    The leading coefficient is q^(-k(k-1)/2).
    """
    if k < 0:
        raise ValueError("falling-factorial order must be nonnegative")
    p = LatticePoly.one()
    for j in range(k):
        shifted = LatticePoly.monomial((-x_of(j, ctx), ctx.one()))
        p = (p * shifted).scale(ctx.q ** (-j))
    return p


def falling_mul_x(p: LatticePoly, ctx: QContext) -> LatticePoly:
    """Multiply a falling-basis polynomial by X via
    X*[s]^(j) = q^j [s]^(j+1) + x(j) [s]^(j)."""
    if p.basis != FALLING:
        raise ValueError("falling_mul_x expects the falling basis")
    out = [ctx.zero()] * (len(p.coeffs) + 1)
    for j, c in enumerate(p.coeffs):
        out[j + 1] += c * ctx.q ** j
        out[j] += c * x_of(j, ctx)
    return LatticePoly.falling(out)


def falling_mul_falling(p: LatticePoly, k: int, ctx: QContext) -> LatticePoly:
    """Product of a falling-basis polynomial with [s]^(k), staying in basis.

    Uses the exact rewrite above iterated over the factors (X - x(j))/q^j,
    which keeps the expansion quadratic in the degree.
    """
    if p.basis != FALLING:
        raise ValueError("falling_mul_falling expects the falling basis")
    out = p
    for j in range(k):
        out = (falling_mul_x(out, ctx) - out.scale(x_of(j, ctx))).scale(ctx.q ** (-j))
    return out


def to_falling_basis(p: LatticePoly, ctx: QContext) -> LatticePoly:
    """Exact triangular conversion monomial -> falling."""
    if p.basis == FALLING:
        return p
    rest = list(p.coeffs)
    out = [ctx.zero()] * len(rest)
    for d in range(len(rest) - 1, -1, -1):
        basis_poly = falling_factorial_poly(d, ctx)
        c = rest[d] / basis_poly.coeffs[-1] if rest[d] != 0 else rest[d]
        out[d] = c
        if c != 0:
            for i, b in enumerate(basis_poly.coeffs):
                rest[i] -= c * b
        del rest[d]
    return LatticePoly.falling(out)


def from_falling_basis(p: LatticePoly, ctx: QContext) -> LatticePoly:
    if p.basis == MONOMIAL:
        return p
    out = LatticePoly.zero()
    for d, c in enumerate(p.coeffs):
        if c != 0:
            out = out + falling_factorial_poly(d, ctx).scale(c)
    return out


# ---------------------------------------------------------------------------
# weights and the numeric q-Gamma
# ---------------------------------------------------------------------------

def weight_eval(i: int, s: int, ctx: QContext) -> Scalar:
    """Discrete weight mass at integer s >= 0 for the i-th measure:
    alpha_i^s * q^(s - 1/2) / [s]_q!."""
    if s < 0:
        raise ValueError("weights live on nonnegative integers")
    a = ctx.alphas[i]
    return a ** s * ctx.q ** s / ctx.t / q_factorial(s, ctx)


def weight_partial_sums(i: int, m: int, ctx: QContext, tail_bound: float = 1e-14):
    """Truncated sums (sum_s [s]^(m) w_i(s), sum_s w_i(s)) for numeric checks.

    Truncates once the geometric tail estimate of the remaining terms drops
    below `tail_bound`; requires convergent measure semantics.
    """
    ctx.require_convergent_measures()
    q = float(ctx.q)
    a = float(ctx.alphas[i])
    if q >= 1:
        raise ValidationError("convergence", "partial-sum checks need 0 < q < 1")
    # on this lattice x(s) < 1/(1-q), so [s]^(m) is bounded by that power
    falling_bound = (1.0 / (1.0 - q)) ** m
    total_m = 0.0
    total_0 = 0.0
    s = 0
    term = 1.0 / float(ctx.t)  # weight at s = 0
    while True:
        fm = 1.0
        for j in range(m):
            fm *= (q ** (s - j) - 1) / (q - 1)
        total_m += fm * term
        total_0 += term
        ratio = a * q / ((q ** (s + 1) - 1) / (q - 1))
        next_term = term * ratio
        if s > m and ratio < 1 and next_term * falling_bound / (1 - ratio) < tail_bound:
            break
        term = next_term
        s += 1
        if s > 100_000:
            raise RuntimeError("weight series failed to reach the tail bound")
    return total_m, total_0


def q_gamma_numeric(s: float, ctx: QContext) -> float:
    """Numeric q-Gamma at real s (approximate backend).

    For 0 < q < 1 evaluates the infinite-product form truncated when the
    running factor is within GAMMA_TOLERANCE/10 of 1; for q > 1 uses the
    reflection to base 1/q with the q-power prefactor.  Poles at s = 0, -1,
    -2, ... are rejected.
    """
    q = float(ctx.q)
    if s <= 0 and float(s).is_integer():
        raise ValueError(f"q-Gamma pole at s = {s}")
    if q > 1:
        inv = 1.0 / q
        return q ** ((s - 1) * (s - 2) / 2.0) * _q_gamma_product(s, inv)
    return _q_gamma_product(s, q)


def _q_gamma_product(s: float, q: float) -> float:
    out = (1 - q) ** (1 - s)
    k = 0
    while True:
        factor = (1 - q ** (k + 1)) / (1 - q ** (s + k))
        out *= factor
        if abs(factor - 1) < GAMMA_TOLERANCE / 10:
            break
        k += 1
        if k > 10_000_000:
            raise RuntimeError("q-Gamma product did not converge")
    return out
