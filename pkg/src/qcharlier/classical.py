"""Classical multiple Charlier polynomials on the unit lattice.

Reference implementation used as the q -> 1 limit target.  Construction goes
through the recurrence

    x C_n = C_{n+e_k} + (alpha_k + |n|) C_n + sum_i alpha_i n_i C_{n-e_i}

from C_0 = 1 (path-independent), and the module verifies the (r+1)-order
difference identity built from the weight-conjugated backward operator
L_i f = alpha_i f(x) - x f(x-1):

    prod_i L_i [forward_diff C] + sum_i n_i prod_{j != i} L_j [C] = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .qkernels import MultiIndex


@dataclass(frozen=True)
class ClassicalCharlierPoly:
    index: MultiIndex
    alphas: Tuple
    coeffs: Tuple  # monomial basis in x, degree-indexed, monic

    @property
    def degree(self):
        return len(self.coeffs) - 1


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _add(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _scale(a, c):
    return _trim([c * v for v in a])


def _shift(a, delta):
    # compose with x -> x + delta
    out = []
    for c in reversed(a):
        shifted = [0] * (len(out) + 1)
        for i, v in enumerate(out):
            shifted[i] += v * delta
            shifted[i + 1] += v
        shifted[0] += c
        out = _trim(shifted)
    return out


def classical_build(index, alphas, path: Optional[Sequence[int]] = None) -> ClassicalCharlierPoly:
    index = MultiIndex.coerce(index)
    alphas = tuple(alphas)
    if len(alphas) != len(index):
        raise ValueError("one weight parameter per multi-index component required")
    if len(set(alphas)) != len(alphas) or any(a <= 0 for a in alphas):
        raise ValueError("weight parameters must be positive and pairwise distinct")
    if path is None:
        path = [i for i, ni in enumerate(index) for _ in range(ni)]
    counts = [0] * len(index)
    for k in path:
        counts[k] += 1
    if tuple(counts) != index.parts:
        raise ValueError(f"path {list(path)} does not lead from 0 to {index.parts}")

    table = {(0,) * len(index): [Fraction(1) if isinstance(alphas[0], Fraction) else 1.0]}

    def get(parts):
        if parts not in table:
            # canonical fill for off-path lower neighbors
            k = next(i for i, p in enumerate(parts) if p > 0)
            prev = list(parts)
            prev[k] -= 1
            table[parts] = _step(tuple(prev), k)
        return table[parts]

    def _step(prev_parts, k):
        prev = get(prev_parts)
        weight = sum(prev_parts)
        b = alphas[k] + weight
        out = _add([0] + list(prev), _scale(prev, -b))
        for i, pi in enumerate(prev_parts):
            if pi > 0:
                down = list(prev_parts)
                down[i] -= 1
                out = _add(out, _scale(get(tuple(down)), -alphas[i] * pi))
        return out

    current = (0,) * len(index)
    for k in path:
        nxt = list(current)
        nxt[k] += 1
        table[tuple(nxt)] = _step(current, k)
        current = tuple(nxt)
    return ClassicalCharlierPoly(index=index, alphas=alphas, coeffs=tuple(table[index.parts]))


def classical_diffeq_residual(index, alphas):
    """Residual of the classical (r+1)-order identity (zero expected; the
    zero multi-index is degenerate and returns zero trivially)."""
    index = MultiIndex.coerce(index)
    poly = classical_build(index, alphas)
    coeffs = list(poly.coeffs)

    def lower_op(a, alpha):
        # alpha f(x) - x f(x-1)
        return _add(_scale(a, alpha), _scale([0] + _shift(a, -1), -1))

    forward = _add(_shift(coeffs, 1), _scale(coeffs, -1))
    lhs = forward
    for alpha in alphas:
        lhs = lower_op(lhs, alpha)
    residual = lhs
    for i, ni in enumerate(index):
        if ni == 0:
            continue
        term = coeffs
        for j, alpha in enumerate(alphas):
            if j != i:
                term = lower_op(term, alpha)
        residual = _add(residual, _scale(term, ni))
    return residual
