"""Four independent constructions of the monic q-deformed multiple Charlier
polynomial, plus the formal moment functional behind the linear-system oracle.

The defining data is a context (t, q = t^2, alpha_1..alpha_r) and a
multi-index n.  The polynomial C_n is monic of degree |n| in X = x(s) and
kills the functionals

    Lambda_i( C * [s]^(k) ) = 0   for 0 <= k < n_i, i = 1..r,

where Lambda_i maps [s]^(m) to the normalized moment (alpha_i q)^m.  That
moment value comes from telescoping the weighted sum of [s]^(m): substituting
s = m + u turns it into alpha^m q^(m-1/2) * E(alpha q) with
E(z) = sum_u z^u/[u]_q!, and dividing out the m-independent factor
q^(-1/2) E(alpha q) leaves (alpha q)^m, which is all the homogeneous
orthogonality conditions can see.

Construction routes:

* `build_linear_system` - ground truth; encodes only the definition above.
* `build_rodrigues` - weight-conjugated iterated differences with the
  closed-form normalizing constant.
* `build_explicit_r2` - finite double sum in the falling basis (r = 2).
* `build_recurrence` - iterates the nearest-neighbor relation from C_0 = 1.

All four agree coefficient-for-coefficient on exact contexts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .latticefn import WeightedLatticeFn, rodrigues_elementary
from .qkernels import (
    LatticePoly,
    MultiIndex,
    QContext,
    Scalar,
    binom2,
    falling_mul_falling,
    from_falling_basis,
    q_factorial,
    q_falling_number,
    to_falling_basis,
)

METHODS = ("rodrigues", "explicit_r2", "linear_system", "recurrence")


@dataclass(frozen=True)
class QCharlierPoly:
    """A constructed polynomial together with its provenance."""

    ctx: QContext
    index: MultiIndex
    poly: LatticePoly
    method: str

    @property
    def coefficients(self):
        return self.poly.coeffs

    @property
    def degree(self) -> int:
        return self.poly.degree

    def falling_coefficients(self):
        return to_falling_basis(self.poly, self.ctx).coeffs


class ConstructionError(RuntimeError):
    """A construction invariant (monicity, solvability, base bookkeeping) failed."""


def normalized_moment(i: int, m: int, ctx: QContext) -> Scalar:
    """m-th normalized moment of the i-th measure: (alpha_i q)^m."""
    if m < 0:
        raise ValueError("moment order must be nonnegative")
    return (ctx.alphas[i] * ctx.q) ** m


def moment_pairing(p: LatticePoly, k: int, i: int, ctx: QContext) -> Scalar:
    """Lambda_i( p * [s]^(k) ): expand the product in the falling basis and
    contract with the normalized moments."""
    fall = falling_mul_falling(to_falling_basis(p, ctx), k, ctx)
    nu = ctx.one()
    base = ctx.alphas[i] * ctx.q
    total = ctx.zero()
    for c in fall.coeffs:
        total += c * nu
        nu *= base
    return total


# ---------------------------------------------------------------------------
# linear-system construction (the oracle)
# ---------------------------------------------------------------------------

def build_linear_system(index, ctx: QContext) -> QCharlierPoly:
    index = MultiIndex.coerce(index)
    _check_index(index, ctx)
    poly = _linear_system_poly(ctx, index)
    return QCharlierPoly(ctx, index, poly, "linear_system")


@lru_cache(maxsize=None)
def _linear_system_poly(ctx: QContext, index: MultiIndex) -> LatticePoly:
    n = index.weight
    if n == 0:
        return LatticePoly.one()
    lead = ctx.q ** binom2(n)
    rows = []
    rhs = []
    for i, ni in enumerate(index):
        for k in range(ni):
            row = []
            for j in range(n):
                unit = LatticePoly.falling((ctx.zero(),) * j + (ctx.one(),))
                row.append(_falling_pairing(unit, k, i, ctx))
            top = LatticePoly.falling((ctx.zero(),) * n + (lead,))
            rows.append(row)
            rhs.append(-_falling_pairing(top, k, i, ctx))
    solution = _solve(rows, rhs, ctx)
    fall = LatticePoly.falling(tuple(solution) + (lead,))
    poly = from_falling_basis(fall, ctx)
    if ctx.exact and (poly.degree != n or poly.leading != 1):
        raise ConstructionError(f"solution for {index.parts} is not monic of degree {n}")
    return poly


def _falling_pairing(p: LatticePoly, k: int, i: int, ctx: QContext) -> Scalar:
    fall = falling_mul_falling(p, k, ctx)
    nu = ctx.one()
    base = ctx.alphas[i] * ctx.q
    total = ctx.zero()
    for c in fall.coeffs:
        total += c * nu
        nu *= base
    return total


def _solve(rows, rhs, ctx: QContext):
    """Dense Gaussian elimination; exact pivoting on rationals, partial
    pivoting by magnitude on floats.  Raises on a singular system."""
    n = len(rows)
    aug = [list(rows[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        if ctx.exact:
            pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        else:
            pivot = max(range(col, n), key=lambda r: abs(aug[r][col]))
            if aug[pivot][col] == 0:
                pivot = None
        if pivot is None:
            raise ConstructionError("singular orthogonality system (degenerate parameters)")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col] / aug[col][col]
                aug[r] = [aug[r][c] - factor * aug[col][c] for c in range(n + 1)]
    return [aug[i][n] / aug[i][i] for i in range(n)]


# ---------------------------------------------------------------------------
# Rodrigues-type construction
# ---------------------------------------------------------------------------

def rodrigues_constant(index, ctx: QContext) -> Scalar:
    """Closed-form normalizing constant
    (-1)^|n| q^(-|n|/2) prod_i alpha_i^(n_i) prod_i q^(n_i * (n_i+...+n_r))."""
    index = MultiIndex.coerce(index)
    n = index.weight
    value = (-1) ** n * ctx.t ** (-n)
    for i, ni in enumerate(index):
        value *= ctx.alphas[i] ** ni
        value *= ctx.q ** (ni * index.suffix_weight(i))
    return value


def build_rodrigues(index, ctx: QContext) -> QCharlierPoly:
    index = MultiIndex.coerce(index)
    _check_index(index, ctx)
    poly = _rodrigues_poly(ctx, index)
    return QCharlierPoly(ctx, index, poly, "rodrigues")


@lru_cache(maxsize=None)
def _rodrigues_poly(ctx: QContext, index: MultiIndex) -> LatticePoly:
    fn = WeightedLatticeFn(ctx.one(), LatticePoly.one(), factorial_denominator=True)
    for i, ni in enumerate(index):
        fn = rodrigues_elementary(fn, ctx.alphas[i], ni, ctx)
    if ctx.exact and fn.base != 1:
        raise ConstructionError(f"pipeline base drifted to {fn.base}")
    # multiplying by Gamma_q(s+1) clears the factorial denominator
    poly = fn.poly.scale(rodrigues_constant(index, ctx))
    if ctx.exact and (poly.degree != index.weight or poly.leading != 1):
        raise ConstructionError(f"pipeline result for {index.parts} is not monic")
    return poly


# ---------------------------------------------------------------------------
# explicit double sum (r = 2)
# ---------------------------------------------------------------------------

def build_explicit_r2(n1: int, n2: int, ctx: QContext) -> QCharlierPoly:
    """Finite double sum in the falling basis, r = 2 only:

        C = (-a1)^n1 (-a2)^n2 q^(n1^2+n1*n2+n2^2) *
            sum_{k,l} [n1]^(k) [n2]^(l) / ([k]! [l]!) q^(C(k,2)+C(l,2))
                      (-q^-n1/a1)^k (-q^-n2/a2)^l [s]^(k+l).

    The sum is assembled so every half-integer lattice power cancels; the
    result is exactly the degree-(n1+n2) monic polynomial of the other
    constructors.
    """
    if ctx.r != 2:
        raise ValueError(f"explicit double-sum construction needs r = 2, context has r = {ctx.r}")
    index = MultiIndex((n1, n2))
    a1, a2 = ctx.alphas
    prefactor = (
        (-a1) ** n1 * (-a2) ** n2 * ctx.q ** (n1 * n1 + n1 * n2 + n2 * n2)
    )
    fall = [ctx.zero()] * (n1 + n2 + 1)
    for k in range(n1 + 1):
        for l in range(n2 + 1):
            term = q_falling_number(n1, k, ctx) * q_falling_number(n2, l, ctx)
            term /= q_factorial(k, ctx) * q_factorial(l, ctx)
            term *= ctx.q ** (binom2(k) + binom2(l))
            term *= (-1) ** (k + l) * (ctx.q ** n1 * a1) ** (-k) * (ctx.q ** n2 * a2) ** (-l)
            fall[k + l] += term
    poly = from_falling_basis(LatticePoly.falling(fall), ctx).scale(prefactor)
    if ctx.exact and (poly.degree != index.weight or poly.leading != 1):
        raise ConstructionError(f"double sum for {index.parts} is not monic")
    return QCharlierPoly(ctx, index, poly, "explicit_r2")


# ---------------------------------------------------------------------------
# recurrence construction
# ---------------------------------------------------------------------------

def build_recurrence(index, ctx: QContext, path: Optional[Sequence[int]] = None) -> QCharlierPoly:
    """Iterate the nearest-neighbor relation from C_0 = 1 along `path`
    (a sequence of 0-based component indices; any order reaching `index`).

    Lower neighbors off the walked chain are built through the same
    recurrence (memoized per context), never through the linear system, so
    this route stays independent of the oracle.  The result is
    path-independent, exactly.
    """
    index = MultiIndex.coerce(index)
    _check_index(index, ctx)
    if path is None:
        return QCharlierPoly(ctx, index, _recurrence_poly(ctx, index), "recurrence")
    path = [int(k) for k in path]
    counts = [0] * ctx.r
    for k in path:
        if not 0 <= k < ctx.r:
            raise ValueError(f"path component {k} out of range for r = {ctx.r}")
        counts[k] += 1
    if tuple(counts) != index.parts:
        raise ValueError(f"path {path} does not lead from 0 to {index.parts}")
    current = MultiIndex((0,) * ctx.r)
    poly = LatticePoly.one()
    for k in path:
        poly = _recurrence_step(ctx, current, k, poly)
        current = current.up(k)
    return QCharlierPoly(ctx, index, poly, "recurrence")


@lru_cache(maxsize=None)
def _recurrence_poly(ctx: QContext, index: MultiIndex) -> LatticePoly:
    if index.weight == 0:
        return LatticePoly.one()
    k = next(i for i, ni in enumerate(index) if ni > 0)
    prev = index.down(k)
    return _recurrence_step(ctx, prev, k, _recurrence_poly(ctx, prev))


def _recurrence_step(ctx: QContext, prev: MultiIndex, k: int, prev_poly: LatticePoly) -> LatticePoly:
    # C_{m+e_k} = (X - b) C_m - sum_i d_i C_{m-e_i}
    from .relations import nn_recurrence_coeffs

    def recurrence_builder(m, c):
        m = MultiIndex.coerce(m)
        if m.parts == prev.parts:
            return prev_poly
        return _recurrence_poly(c, m)

    coeffs = nn_recurrence_coeffs(prev, k, ctx, builder=recurrence_builder)
    out = prev_poly.times_x() - prev_poly.scale(coeffs.b)
    for i, di in enumerate(coeffs.d):
        if di != 0:
            out = out - _recurrence_poly(ctx, prev.down(i)).scale(di)
    return out


def build(index, ctx: QContext, method: str = "linear_system", path=None) -> QCharlierPoly:
    """Dispatch by method name (the CLI entry point uses this)."""
    index = MultiIndex.coerce(index)
    if method == "linear_system":
        return build_linear_system(index, ctx)
    if method == "rodrigues":
        return build_rodrigues(index, ctx)
    if method == "recurrence":
        return build_recurrence(index, ctx, path=path)
    if method == "explicit_r2":
        if len(index) != 2:
            raise ValueError("explicit_r2 needs a two-component multi-index")
        return build_explicit_r2(index[0], index[1], ctx)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def _check_index(index: MultiIndex, ctx: QContext) -> None:
    if len(index) != ctx.r:
        raise ValueError(
            f"multi-index has {len(index)} components but the context has r = {ctx.r}"
        )
