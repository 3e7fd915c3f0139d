"""Column-stochastic matrix machinery: validation, primitivity, stationary points.

Primitivity is decided on the zero pattern alone (entries above
``stochastic_tol`` count as positive) using 0/1 matrix products, so powers
of sub-stochastic entries can never underflow the test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (ColumnSumViolation, DimensionMismatch, NegativeEntry,
                     StationarySolveFailure)
from .linalg import DEFAULT_TOL, Tolerances


@dataclass(frozen=True)
class PrimitivityVerdict:
    """Outcome of the exact index-of-primitivity search.

    ``index`` is None exactly when the matrix is not primitive; when present
    it never exceeds ``wielandt_bound``.
    """

    primitive: bool
    index: int | None
    wielandt_bound: int


def wielandt_bound(r: int) -> int:
    """Classical upper bound r^2 - 2r + 2 on the primitivity index of an r x r matrix."""
    if r < 1:
        raise ValueError(f"dimension must be positive, got {r}")
    return r * r - 2 * r + 2


def make_stochastic(entries, tol: Tolerances = DEFAULT_TOL, *, r: int | None = None):
    """Validate a column-stochastic matrix and return it as a clean float array.

    ``entries`` is a square array, or a flat row-major sequence when ``r``
    is given; a given ``r`` is cross-checked against the shape either way.
    Entries in ``[-stochastic_tol, 0)`` are clamped to 0; more negative
    entries raise NegativeEntry. Every column must sum to 1 within
    ``stochastic_tol``.
    """
    arr = np.array(entries, dtype=np.float64)
    if arr.ndim == 1 and r is not None and arr.size == r * r:
        arr = arr.reshape(r, r)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionMismatch(f"expected a nonempty square matrix, got shape {arr.shape}")
    if r is not None and arr.shape[0] != r:
        raise DimensionMismatch(f"matrix is {arr.shape[0]} x {arr.shape[0]}, expected r = {r}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains NaN or infinite entries")
    low = float(arr.min())
    if low < -tol.stochastic_tol:
        i, j = np.unravel_index(int(np.argmin(arr)), arr.shape)
        raise NegativeEntry(f"entry ({i},{j}) = {low:.3e} is negative beyond tolerance")
    arr = np.where(arr < 0.0, 0.0, arr)
    sums = arr.sum(axis=0)
    worst = float(np.max(np.abs(sums - 1.0)))
    if worst > tol.stochastic_tol:
        j = int(np.argmax(np.abs(sums - 1.0)))
        raise ColumnSumViolation(f"column {j} sums to {sums[j]!r}, off by {worst:.3e}")
    arr.setflags(write=False)
    return arr


def _pattern(s, tol: Tolerances):
    return (np.asarray(s, dtype=np.float64) > tol.stochastic_tol).astype(np.uint8)


def _bool_matmul(a, b):
    # products are bounded by r before re-clamping, so uint64 cannot overflow
    return (a.astype(np.uint64) @ b.astype(np.uint64) > 0).astype(np.uint8)


def _bool_power(p, m):
    result = np.eye(p.shape[0], dtype=np.uint8)
    base = p
    while m > 0:
        if m & 1:
            result = _bool_matmul(result, base)
        base = _bool_matmul(base, base)
        m >>= 1
    return result


def is_primitive(s, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff some power of the nonnegative matrix is entrywise positive.

    Checking the zero pattern at the Wielandt bound suffices: a primitive
    matrix is already positive there, and positivity at any power implies
    primitivity by definition.
    """
    p = _pattern(s, tol)
    return bool(_bool_power(p, wielandt_bound(p.shape[0])).all())


def primitivity_index(s, tol: Tolerances = DEFAULT_TOL) -> PrimitivityVerdict:
    """Least m with S^m entrywise positive, searched incrementally up to the bound."""
    p = _pattern(s, tol)
    bound = wielandt_bound(p.shape[0])
    power = p
    for m in range(1, bound + 1):
        if power.all():
            return PrimitivityVerdict(primitive=True, index=m, wielandt_bound=bound)
        power = _bool_matmul(power, p)
    return PrimitivityVerdict(primitive=False, index=None, wielandt_bound=bound)


def stationary_distribution(s, tol: Tolerances = DEFAULT_TOL):
    """Probability vector pi with S pi = pi, plus a uniqueness flag.

    Solves the stacked least-squares system [(S - I); 1^T] pi = [0; 1] and
    clamps round-off negatives. ``unique`` reports whether the numerical
    eigenvalue-1 eigenspace of S (null space of S - I) is one-dimensional.
    """
    arr = make_stochastic(s, tol)
    r = arr.shape[0]
    lhs = np.vstack([arr - np.eye(r), np.ones((1, r))])
    rhs = np.zeros(r + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)

    if float(pi.min()) < -tol.zero_eig_tol:
        raise StationarySolveFailure(
            f"stationary solve produced entry {pi.min():.3e} below tolerance"
        )
    pi = np.where(pi < 0.0, 0.0, pi)
    total = float(pi.sum())
    if total <= 0.0:
        raise StationarySolveFailure("stationary solve produced a zero vector")
    pi = pi / total
    residual = float(np.max(np.abs(arr @ pi - pi)))
    if residual > 1e-10:
        raise StationarySolveFailure(f"stationary residual {residual:.3e} exceeds 1e-10")

    sigma = np.linalg.svd(arr - np.eye(r), compute_uv=False)
    null_dim = int(np.count_nonzero(sigma < tol.zero_eig_tol * max(1.0, float(sigma[0]))))
    return pi, null_dim == 1
