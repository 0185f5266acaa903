"""Structural identities of the family, verified to literal equality.

Every verifier builds its operands with the linear-system constructor (the
oracle), so a defect in the operator pipelines cannot hide itself; an
optional `builder` hook swaps that source out (used by the recurrence
constructor, by independence experiments, and by the negative-control
machinery that corrupts one polynomial on purpose).  Each `verify_*` returns
a residual `LatticePoly` that must be identically zero.

Coefficient conventions.  The raising identity and the Rodrigues machinery
hold with simple closed-form constants.  The lowering expansion, the
difference equation built from it, and the down-neighbor coefficients of the
nearest-neighbor recurrence do not: for r >= 2 with two or more active
components the exact coefficients are rational functions of the weight
parameters, computed here as moment-functional ratios.  The classical-looking
product forms (exact for r = 1 and whenever at most one component of the
multi-index is positive, and the q -> 1 limits of the true values) are kept
as `*_product_form` variants; tests pin down exactly where they stop being
valid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .constructors import build_linear_system, moment_pairing
from .latticefn import delta_cov, raising_apply
from .qkernels import (
    LatticePoly,
    MultiIndex,
    QContext,
    Scalar,
    binom2,
    q_number,
    to_falling_basis,
    x_of,
)

Builder = Callable[[MultiIndex, QContext], LatticePoly]


def _oracle(index: MultiIndex, ctx: QContext) -> LatticePoly:
    return build_linear_system(index, ctx).poly


# ---------------------------------------------------------------------------
# nearest-neighbor recurrence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NNRecurrenceCoeffs:
    """Coefficients of x(s) C_n = C_{n+e_k} + b C_n + sum_i d_i C_{n-e_i}."""

    k: int
    b: Scalar
    d: Tuple[Scalar, ...]


def nn_recurrence_coeffs(
    index, k: int, ctx: QContext, builder: Optional[Builder] = None
) -> NNRecurrenceCoeffs:
    """Exact recurrence coefficients for stepping component k.

    b carries the closed form

        b = sum_i q^(n_1+..+n_{i-1}) x(n_i) [(q-1) alpha_i q^(n_i+..+n_r) + 1]
            + alpha_k q^(|n| + n_k + 1),

    while each d_i is the moment-functional ratio

        d_i = q^(n_i - 1) Lambda_i(C_n [s]^(n_i)) / Lambda_i(C_{n-e_i} [s]^(n_i - 1)),

    zero when n_i = 0.  Projecting the recurrence onto Lambda_i against
    [s]^(n_i - 1) isolates d_i because every other term is killed by
    orthogonality; the same projection argument shows these are the unique
    coefficients making the relation exact.
    """
    index = MultiIndex.coerce(index)
    if not 0 <= k < ctx.r:
        raise ValueError(f"component {k} out of range for r = {ctx.r}")
    build = builder or _oracle
    b = _nn_b_closed_form(index, k, ctx)
    poly = build(index, ctx)
    d = []
    for i, ni in enumerate(index):
        if ni == 0:
            d.append(ctx.zero())
            continue
        down = build(index.down(i), ctx)
        num = moment_pairing(poly, ni, i, ctx)
        den = moment_pairing(down, ni - 1, i, ctx)
        d.append(ctx.q ** (ni - 1) * num / den)
    return NNRecurrenceCoeffs(k=k, b=b, d=tuple(d))


def _nn_b_closed_form(index: MultiIndex, k: int, ctx: QContext) -> Scalar:
    b = ctx.alphas[k] * ctx.q ** (index.weight + index[k] + 1)
    for i, ni in enumerate(index):
        bracket = (ctx.q - 1) * ctx.alphas[i] * ctx.q ** index.suffix_weight(i) + 1
        b += ctx.q ** index.prefix_weight(i) * x_of(ni, ctx) * bracket
    return b


def nn_b_projection(index, k: int, ctx: QContext) -> Scalar:
    """b recomputed from moment projections alone, independent of the closed
    form (cross-check): project the recurrence onto Lambda_k against
    [s]^(n_k).  Only C_{n+e_k} drops out for free; every down neighbor still
    pairs nonzero at that degree and must be subtracted with its d_i."""
    index = MultiIndex.coerce(index)
    poly = _oracle(index, ctx)
    nk = index[k]
    denom = moment_pairing(poly, nk, k, ctx)
    value = ctx.q ** nk * moment_pairing(poly, nk + 1, k, ctx) + x_of(nk, ctx) * denom
    d = nn_recurrence_coeffs(index, k, ctx).d
    for i, ni in enumerate(index):
        if ni > 0:
            value -= d[i] * moment_pairing(_oracle(index.down(i), ctx), nk, k, ctx)
    return value / denom


def nn_recurrence_coeffs_product_form(index, k: int, ctx: QContext) -> NNRecurrenceCoeffs:
    """Product-form down coefficients
    d_i = q^(n_1+..+n_{i-1}) x(n_i) [(q-1) alpha_i q^(n_i+..+n_r) + 1] *
          alpha_i q^(|n| + n_i - 1).

    Exact only when at most one component of the multi-index is positive
    (in particular for r = 1); kept as a documented negative control."""
    index = MultiIndex.coerce(index)
    b = _nn_b_closed_form(index, k, ctx)
    d = []
    for i, ni in enumerate(index):
        bracket = (ctx.q - 1) * ctx.alphas[i] * ctx.q ** index.suffix_weight(i) + 1
        term = ctx.q ** index.prefix_weight(i) * x_of(ni, ctx) * bracket
        d.append(term * ctx.alphas[i] * ctx.q ** (index.weight + ni - 1))
    return NNRecurrenceCoeffs(k=k, b=b, d=tuple(d))


def verify_nn_recurrence(
    index, k: int, ctx: QContext, builder: Optional[Builder] = None
) -> LatticePoly:
    """Residual X C_n - C_{n+e_k} - b C_n - sum_i d_i C_{n-e_i} (zero expected)."""
    index = MultiIndex.coerce(index)
    build = builder or _oracle
    coeffs = nn_recurrence_coeffs(index, k, ctx, builder=builder)
    poly = build(index, ctx)
    residual = poly.times_x() - build(index.up(k), ctx) - poly.scale(coeffs.b)
    for i, di in enumerate(coeffs.d):
        if di != 0:
            residual = residual - build(index.down(i), ctx).scale(di)
    return residual


# ---------------------------------------------------------------------------
# raising
# ---------------------------------------------------------------------------

def verify_raising(
    index, i: int, ctx: QContext, builder: Optional[Builder] = None
) -> LatticePoly:
    """Residual of the raising identity

        raising_apply(C_n^(a), alpha_i, |n|) = -q^(1/2) C_{n+e_i}^(a with alpha_i/q),

    the target polynomial living in the context with alpha_i divided by q.
    A modified context that fails validation raises ValidationError."""
    index = MultiIndex.coerce(index)
    build = builder or _oracle
    lifted = raising_apply(build(index, ctx), ctx.alphas[i], index.weight, ctx)
    shifted_ctx = ctx.with_alpha(i, ctx.alphas[i] / ctx.q)
    target = build(index.up(i), shifted_ctx)
    return lifted + target.scale(ctx.t)


# ---------------------------------------------------------------------------
# lowering
# ---------------------------------------------------------------------------

def lowering_coeffs(index, ctx: QContext, builder: Optional[Builder] = None):
    """Exact expansion coefficients beta_i of

        Delta C_n^(a) = sum_i beta_i C_{n-e_i}^(q a)

    where every down neighbor lives in the context with ALL weight parameters
    multiplied by q.  That scaled family is forced: the forward difference
    satisfies the down-shifted orthogonality precisely with respect to the
    q-scaled weights, and the q-scaled neighbors are a basis of that
    subspace.  beta_i is the functional ratio

        beta_i = Lambda'_i(Delta C_n * [s]^(n_i - 1))
                 / Lambda'_i(C_{n-e_i}^(q a) * [s]^(n_i - 1)),

    with Lambda'_i the moment functional at parameter q*alpha_i; beta_i = 0
    when n_i = 0.  For r = 1, beta equals q^(|n| - n_1 + 1/2) [n_1]_q, and
    beta_i -> n_i as q -> 1.
    """
    index = MultiIndex.coerce(index)
    build = builder or _oracle
    scaled = ctx.with_all_alphas(a * ctx.q for a in ctx.alphas)
    diff = delta_cov(build(index, ctx), ctx)
    betas = []
    for i, ni in enumerate(index):
        if ni == 0:
            betas.append(ctx.zero())
            continue
        down = build(index.down(i), scaled)
        num = moment_pairing(diff, ni - 1, i, scaled)
        den = moment_pairing(down, ni - 1, i, scaled)
        betas.append(num / den)
    return tuple(betas)


def lowering_coeffs_product_form(index, ctx: QContext):
    """q^(|n| - n_i + 1/2) [n_i]_q; exact only when at most one component is
    positive (negative control elsewhere)."""
    index = MultiIndex.coerce(index)
    return tuple(
        ctx.q ** (index.weight - ni) * ctx.t * q_number(ni, ctx) if ni else ctx.zero()
        for ni in index
    )


def verify_lowering(index, ctx: QContext, builder: Optional[Builder] = None) -> LatticePoly:
    """Residual Delta C_n - sum_i beta_i C_{n-e_i}^(q a) (zero expected)."""
    index = MultiIndex.coerce(index)
    build = builder or _oracle
    scaled = ctx.with_all_alphas(a * ctx.q for a in ctx.alphas)
    residual = delta_cov(build(index, ctx), ctx)
    betas = lowering_coeffs(index, ctx, builder=builder)
    for i, beta in enumerate(betas):
        if beta != 0:
            residual = residual - build(index.down(i), scaled).scale(beta)
    return residual


# ---------------------------------------------------------------------------
# difference equation
# ---------------------------------------------------------------------------

def diff_eq_residual(index, ctx: QContext, builder: Optional[Builder] = None) -> LatticePoly:
    """Residual of the (r+1)-order difference identity

        prod_j D~_j [Delta C_n^(a)]
          + q^(1/2) sum_i beta_i prod_{j != i} D~_j [ C_n^(a(i)) ]  =  0,

    where D~_j is the raising action with parameter q*alpha_j and power
    |n| - 1, beta_i are the lowering coefficients, and a(i) is the parameter
    vector with every component scaled by q except the i-th.  Applying the
    full raising chain to the lowering expansion telescopes each term back to
    index n; for r = 1 the identity collapses to the single-weight
    second-order equation with coefficient q^(|n| - n_1 + 1) [n_1]_q.
    """
    index = MultiIndex.coerce(index)
    build = builder or _oracle
    power = index.weight - 1
    lifted = delta_cov(build(index, ctx), ctx)
    for j in range(ctx.r):
        lifted = raising_apply(lifted, ctx.q * ctx.alphas[j], power, ctx)
    residual = lifted
    betas = lowering_coeffs(index, ctx, builder=builder)
    for i, beta in enumerate(betas):
        if beta == 0:
            continue
        mixed = [a * ctx.q for a in ctx.alphas]
        mixed[i] = ctx.alphas[i]
        term = build(index, ctx.with_all_alphas(mixed))
        for j in range(ctx.r):
            if j != i:
                term = raising_apply(term, ctx.q * ctx.alphas[j], power, ctx)
        residual = residual + term.scale(ctx.t * beta)
    return residual


def diff_eq_residual_single_family(index, ctx: QContext) -> LatticePoly:
    """Equivalent form of the same identity with every operand in the original
    parameter vector:

        prod_j E_{q alpha_j} [Delta C_n]
          = (-1)^r q^(-r(|n|-1) - C(r,2)) sum_i beta_i C_{n + 1 - e_i},

    where E_a P = a P(X) - X P((X-1)/q) and 1 is the all-ones index.  Used as
    a cross-check of `diff_eq_residual`."""
    index = MultiIndex.coerce(index)
    n = index.weight
    lifted = delta_cov(_oracle(index, ctx), ctx)
    for j in range(ctx.r):
        # E without the power normalization: strip the q^power * t factor
        lifted = raising_apply(lifted, ctx.q * ctx.alphas[j], 0, ctx).scale(1 / ctx.t)
    scale = (-1) ** ctx.r * ctx.q ** (-(ctx.r * (n - 1) + binom2(ctx.r)))
    rhs = LatticePoly.zero()
    betas = lowering_coeffs(index, ctx)
    for i, beta in enumerate(betas):
        if beta == 0:
            continue
        up = index
        for j in range(ctx.r):
            if j != i:
                up = up.up(j)
        rhs = rhs + _oracle(up, ctx).scale(beta)
    return lifted - rhs.scale(scale)


# ---------------------------------------------------------------------------
# step-line recurrence (r = 2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SteplineCoeffs:
    """Coefficients of the 4-term relation along the second component,

        x P_{n1,n2} = q^(n1+n2) P_{n1,n2+1} + b P_{n1,n2}
                      + c P_{n1,n2-1} + d P_{n1-1,n2-1},

    stated for the leading-falling-normalized family P = q^(-C(N,2)) C
    (top falling coefficient 1; the q^N factor in front of the up neighbor
    is what that normalization forces)."""

    b: Scalar
    c: Scalar
    d: Scalar


def stepline_coeffs(n1: int, n2: int, ctx: QContext) -> SteplineCoeffs:
    """Coefficients computed from the normalized falling coefficients c^(j):

        b = q^N (q^-1 c^(N-1)_{n1,n2} - c^(N)_{n1,n2+1}) + x(N)
        c = q^N (q^-2 c^(N-2)_{n1,n2} + q^-N x(N-1) c^(N-1)_{n1,n2}
                 - q^-N b c^(N-1)_{n1,n2} - c^(N-1)_{n1,n2+1})
        d = q^N (q^-3 c^(N-3)_{n1,n2} + q^-N x(N-2) c^(N-2)_{n1,n2}
                 - q^-N c c^(N-2)_{n1,n2-1} - q^-N b c^(N-2)_{n1,n2}
                 - c^(N-2)_{n1,n2+1})

    with N = n1+n2 and out-of-range c^(j) read as zero.  These are exactly
    the top-four falling-coefficient matching rows of the relation."""
    if ctx.r != 2:
        raise ValueError(f"step-line relation needs r = 2, context has r = {ctx.r}")
    N = n1 + n2
    q = ctx.q

    here = _normalized_falling(MultiIndex((n1, n2)), ctx)
    up = _normalized_falling(MultiIndex((n1, n2 + 1)), ctx)
    down2 = _normalized_falling(MultiIndex((n1, n2 - 1)), ctx) if n2 > 0 else {}

    def g(table, j):
        return table.get(j, ctx.zero())

    b = q ** N * (g(here, N - 1) / q - g(up, N)) + x_of(N, ctx)
    c = q ** N * (
        g(here, N - 2) / q ** 2
        + g(here, N - 1) * x_of(N - 1, ctx) / q ** N
        - b * g(here, N - 1) / q ** N
        - g(up, N - 1)
    )
    d = q ** N * (
        g(here, N - 3) / q ** 3
        + g(here, N - 2) * x_of(N - 2, ctx) / q ** N
        - c * g(down2, N - 2) / q ** N
        - b * g(here, N - 2) / q ** N
        - g(up, N - 2)
    )
    return SteplineCoeffs(b=b, c=c, d=d)


def _normalized_falling(index: MultiIndex, ctx: QContext) -> dict:
    fall = to_falling_basis(build_linear_system(index, ctx).poly, ctx)
    scale = ctx.q ** (-binom2(index.weight))
    return {j: c * scale for j, c in enumerate(fall.coeffs)}


def stepline_valid(n1: int, n2: int) -> bool:
    """Domain where the 4-term relation is an identity.  Stepping the second
    component from (n1, 0) with n1 >= 1 has no valid 4-term span (the
    relation would need the absent (n1-1, 0) neighbor), so those cells are
    excluded; everywhere else the residual vanishes exactly."""
    return n2 >= 1 or n1 == 0


def verify_stepline(
    n1: int, n2: int, ctx: QContext, builder: Optional[Builder] = None
) -> LatticePoly:
    """Residual of the 4-term relation (zero expected on the valid domain;
    on the excluded cells it is a nonzero constant, kept as is)."""
    if ctx.r != 2:
        raise ValueError(f"step-line relation needs r = 2, context has r = {ctx.r}")
    build = builder or _oracle
    N = n1 + n2
    coeffs = stepline_coeffs(n1, n2, ctx)

    def p(m1, m2):
        if m1 < 0 or m2 < 0:
            return LatticePoly.zero()
        poly = build(MultiIndex((m1, m2)), ctx)
        return poly.scale(ctx.q ** (-binom2(m1 + m2)))

    residual = p(n1, n2).times_x() - p(n1, n2 + 1).scale(ctx.q ** N)
    residual = residual - p(n1, n2).scale(coeffs.b)
    residual = residual - p(n1, n2 - 1).scale(coeffs.c)
    residual = residual - p(n1 - 1, n2 - 1).scale(coeffs.d)
    return residual


# ---------------------------------------------------------------------------
# orthogonality
# ---------------------------------------------------------------------------

def orthogonality_residuals(index, ctx: QContext, builder: Optional[Builder] = None):
    """All defining functionals and the boundary values.

    Returns (defining, boundary): `defining[(i, k)]` for k < n_i must vanish;
    `boundary[i]` = Lambda_i(C * [s]^(n_i)) must be nonzero (that
    nonvanishing is what makes every multi-index here normal)."""
    index = MultiIndex.coerce(index)
    build = builder or _oracle
    poly = build(index, ctx)
    defining = {}
    boundary = {}
    for i, ni in enumerate(index):
        for k in range(ni):
            defining[(i, k)] = moment_pairing(poly, k, i, ctx)
        boundary[i] = moment_pairing(poly, ni, i, ctx)
    return defining, boundary
