"""Entanglement breaking channels given as (effect, state) pair lists.

A channel here is a finite list of pairs (F_k, R_k) with the F_k forming a
POVM and each R_k a density matrix; it acts as

    rho  ->  sum_k  tr(F_k rho) R_k.

The module builds the four matrix pictures of such a channel (the n^2 x n^2
linear-action matrix, the Choi matrix, the tall/flat factorization A, B and
the induced r x r column-stochastic matrix), iterates the channel, computes
fixed points, and checks the nonzero-spectrum agreement between the channel
and its stochastic matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .errors import (
    ColumnSumViolation,
    DimensionMismatch,
    KrausRankTooHigh,
    NotDensity,
    NotPOVM,
    NotPSD,
    NotStochastic,
    TracePreservationViolation,
    ValidationError,
    ZeroEffect,
)
from .linalg import DEFAULT_TOL, Tolerances, as_square, eig_general, eig_hermitian, vec
from .stochastic import make_stochastic, stationary_distribution


@dataclass(frozen=True)
class HolevoForm:
    """Validated channel data: system dimension plus matched effect/state lists.

    Construct through :func:`make_holevo_form`; the fields are read-only
    arrays and every operation on the form is pure.
    """

    n: int
    effects: tuple  # F_k, POVM effects, each n x n PSD, summing to I
    states: tuple   # R_k, density matrices, one per effect

    @property
    def r(self) -> int:
        return len(self.effects)

    def pairs(self):
        return list(zip(self.effects, self.states))


def _freeze(arr):
    out = np.array(arr, dtype=np.complex128)
    out.setflags(write=False)
    return out


def _build_form(n, effects, states) -> HolevoForm:
    # internal: callers guarantee validity (or deliberately relax it, see
    # iterated_form, whose derived effects may vanish for some indices)
    return HolevoForm(n=int(n), effects=tuple(map(_freeze, effects)),
                      states=tuple(map(_freeze, states)))


def require_density(rho, n=None, tol: Tolerances = DEFAULT_TOL, name="rho", pair_index=None):
    """Validate a density matrix (PSD, unit trace) and return it as an array."""
    arr = as_square(rho, name)
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatch(f"{name} must be {n}x{n}, got {arr.shape[0]}x{arr.shape[1]}",
                                pair_index=pair_index)
    try:
        w, _ = eig_hermitian(arr, tol)
    except ValidationError as exc:
        raise NotDensity(f"{name} is not Hermitian: {exc}", pair_index=pair_index) from exc
    if w[-1] < -tol.psd_tol * max(1.0, w[0]):
        raise NotDensity(f"{name} is not PSD: lambda_min = {w[-1]:.3e}", pair_index=pair_index)
    trace = complex(np.trace(arr))
    if abs(trace - 1.0) > tol.stochastic_tol:
        raise NotDensity(f"{name} has trace {trace}, expected 1", pair_index=pair_index)
    return arr


def make_holevo_form(n, pairs, tol: Tolerances = DEFAULT_TOL) -> HolevoForm:
    """Validate (F_k, R_k) pairs and assemble the channel.

    Checks, in order: shapes, each F_k PSD and nonzero, each R_k a density
    matrix, and POVM closure sum_k F_k = I within ``stochastic_tol``.
    """
    n = int(n)
    if n < 1:
        raise DimensionMismatch(f"system dimension must be positive, got {n}")
    pairs = list(pairs)
    if not pairs:
        raise ValidationError("a channel needs at least one (F, R) pair")

    effects, states = [], []
    for k, (f, r) in enumerate(pairs):
        f = as_square(f, f"F[{k}]")
        if f.shape[0] != n:
            raise DimensionMismatch(f"F[{k}] must be {n}x{n}, got {f.shape[0]}x{f.shape[1]}",
                                    pair_index=k)
        try:
            w, _ = eig_hermitian(f, tol)
        except ValidationError as exc:
            raise NotPSD(f"F[{k}] is not Hermitian: {exc}", pair_index=k) from exc
        if w[-1] < -tol.psd_tol * max(1.0, w[0]):
            raise NotPSD(f"F[{k}] is not PSD: lambda_min = {w[-1]:.3e}", pair_index=k)
        if w[0] <= tol.stochastic_tol:
            raise ZeroEffect(f"F[{k}] is numerically zero", pair_index=k)
        effects.append(f)
        states.append(require_density(r, n, tol, name=f"R[{k}]", pair_index=k))

    closure = sum(effects) - np.eye(n)
    defect = float(np.max(np.abs(closure)))
    if defect > tol.stochastic_tol:
        raise NotPOVM(f"effects sum to I only within {defect:.3e}, tolerance "
                      f"{tol.stochastic_tol:.1e}")
    return _build_form(n, effects, states)


# ---------------------------------------------------------------------------
# channel action and matrix pictures

def apply_linear(form: HolevoForm, x):
    """Linear extension of the channel to arbitrary square matrices."""
    x = as_square(x, "x")
    if x.shape[0] != form.n:
        raise DimensionMismatch(f"operand must be {form.n}x{form.n}, got {x.shape}")
    out = np.zeros((form.n, form.n), dtype=np.complex128)
    for f, r in zip(form.effects, form.states):
        out += np.trace(f @ x) * r
    return out


def apply(form: HolevoForm, rho):
    """Channel action sum_k tr(F_k rho) R_k on a density matrix."""
    return apply_linear(form, rho)


def natural_rep(form: HolevoForm):
    """n^2 x n^2 matrix of the channel on row-major vectorized operators.

    Column (i, j) is the vectorized image of the matrix unit E_ij, so
    ``vec(channel(X)) == natural_rep @ vec(X)`` for every X.
    """
    n = form.n
    rep = np.zeros((n * n, n * n), dtype=np.complex128)
    unit = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            unit[i, j] = 1.0
            rep[:, i * n + j] = apply_linear(form, unit).reshape(-1)
            unit[i, j] = 0.0
    return rep


def choi(form: HolevoForm):
    """Choi matrix: block (i, j) of the n^2 x n^2 result is the image of E_ij."""
    n = form.n
    j_mat = np.zeros((n * n, n * n), dtype=np.complex128)
    unit = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            unit[i, j] = 1.0
            j_mat[i * n:(i + 1) * n, j * n:(j + 1) * n] = apply_linear(form, unit)
            unit[i, j] = 0.0
    return j_mat


def choi_pair_sum(form: HolevoForm):
    """Alternative Choi assembly sum_k transpose(F_k) (x) R_k."""
    return sum(np.kron(f.T, r) for f, r in zip(form.effects, form.states))


def factorization(form: HolevoForm):
    """Tall/flat factors (A, B): column k of A is vec(R_k), row k of B is vec(F_k^T).

    A @ B reproduces the linear-action matrix and B @ A the stochastic
    matrix of the form.
    """
    a = np.column_stack([vec(r) for r in form.states])
    b = np.vstack([vec(f.T) for f in form.effects])
    return a, b


def stochastic_rep(form: HolevoForm, tol: Tolerances = DEFAULT_TOL):
    """Induced r x r column-stochastic matrix with entries tr(F_i R_j)."""
    fs = np.stack(form.effects)
    rs = np.stack(form.states)
    s = np.einsum("iab,jba->ij", fs, rs).real
    try:
        return make_stochastic(s, tol)
    except ColumnSumViolation as exc:
        raise ColumnSumViolation(f"induced matrix is not column-stochastic "
                                 f"(corrupted form?): {exc}") from exc


def iterated_form(form: HolevoForm, m: int, tol: Tolerances = DEFAULT_TOL) -> HolevoForm:
    """Holevo form of the m-th iterate: effects sum_j (S^{m-1})_{kj} F_j, states unchanged.

    Powers of S are taken by repeated multiplication. The derived effects
    are PSD and sum to the identity, but individual ones may vanish when
    S^{m-1} has a zero row, so this constructor bypasses the zero-effect
    check that applies to externally supplied forms.
    """
    if m < 1:
        raise ValueError(f"iteration count must be >= 1, got {m}")
    if m == 1:
        return form
    s = stochastic_rep(form, tol)
    power = np.eye(form.r)
    for _ in range(m - 1):
        power = s @ power
    fs = np.stack(form.effects)
    effects = np.einsum("kj,jab->kab", power, fs)
    return _build_form(form.n, list(effects), list(form.states))


@dataclass(frozen=True)
class FixedPoint:
    """A stationary density matrix of the channel.

    ``unique`` is False when the eigenvalue-1 eigenspace of the stochastic
    matrix has dimension above one, in which case other fixed points exist.
    ``residual`` is the max-entry norm of channel(rho) - rho.
    """

    rho: np.ndarray
    unique: bool
    residual: float


def fixed_point(form: HolevoForm, tol: Tolerances = DEFAULT_TOL) -> FixedPoint:
    """Density-matrix fixed point sum_k pi_k R_k from a stationary pi of S."""
    s = stochastic_rep(form, tol)
    pi, unique = stationary_distribution(s, tol)
    rho = sum(p * r for p, r in zip(pi, form.states))
    residual = float(np.max(np.abs(apply_linear(form, rho) - rho)))
    return FixedPoint(rho=_freeze(rho), unique=unique, residual=residual)


# ---------------------------------------------------------------------------
# spectrum comparison

@dataclass(frozen=True)
class SpectrumComparison:
    """Nonzero eigenvalues of the channel and of its stochastic matrix, paired up."""

    channel_nonzero: np.ndarray
    matrix_nonzero: np.ndarray
    max_pair_distance: float
    matched: bool


_ASSIGNMENT_CAP = 32


def _pair_distance(a, b):
    """Max distance under a minimal-cost pairing of two complex multisets."""
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0:
        return float("inf")
    cost = np.abs(a[:, None] - b[None, :])
    if max(a.size, b.size) <= _ASSIGNMENT_CAP:
        rows, cols = scipy.optimize.linear_sum_assignment(cost)
        return float(cost[rows, cols].max())
    # greedy nearest-neighbour fallback for oversized spectra
    order = np.lexsort((-a.imag, -a.real))
    used = np.zeros(b.size, dtype=bool)
    worst = 0.0
    for i in order[: min(a.size, b.size)]:
        row = np.where(used, np.inf, cost[i])
        j = int(np.argmin(row))
        used[j] = True
        worst = max(worst, float(row[j]))
    return worst


def compare_nonzero_spectrum(form: HolevoForm,
                             tol: Tolerances = DEFAULT_TOL) -> SpectrumComparison:
    """Check that channel and stochastic matrix share their nonzero spectrum.

    Eigenvalues with modulus below ``zero_eig_tol`` are discarded on both
    sides; the remainders are paired by minimal-distance assignment.
    """
    lam_chan = eig_general(natural_rep(form))
    lam_mat = eig_general(stochastic_rep(form, tol)).astype(np.complex128)
    chan_nz = lam_chan[np.abs(lam_chan) >= tol.zero_eig_tol]
    mat_nz = lam_mat[np.abs(lam_mat) >= tol.zero_eig_tol]
    dist = _pair_distance(chan_nz, mat_nz)
    matched = chan_nz.size == mat_nz.size and dist <= tol.match_tol
    return SpectrumComparison(channel_nonzero=chan_nz, matrix_nonzero=mat_nz,
                              max_pair_distance=dist, matched=matched)


# ---------------------------------------------------------------------------
# builders

def depolarizing(n: int) -> HolevoForm:
    """Channel sending every state to I/n, as the single pair (I, I/n)."""
    eye = np.eye(n, dtype=np.complex128)
    return make_holevo_form(n, [(eye, eye / n)])


def map_to_diagonal(n: int) -> HolevoForm:
    """Channel zeroing all off-diagonal entries: pairs (|k><k|, |k><k|)."""
    pairs = []
    for k in range(n):
        proj = np.zeros((n, n), dtype=np.complex128)
        proj[k, k] = 1.0
        pairs.append((proj, proj))
    return make_holevo_form(n, pairs)


def qc_from_stochastic(s, tol: Tolerances = DEFAULT_TOL) -> HolevoForm:
    """Quantum-classical channel whose induced stochastic matrix is exactly ``s``.

    Effect k is the diagonal matrix holding row k of ``s``; state k is the
    basis projection |k><k|.
    """
    try:
        arr = make_stochastic(s, tol)
    except ValidationError as exc:
        raise NotStochastic(f"not a column-stochastic matrix: {exc}") from exc
    n = arr.shape[0]
    pairs = []
    for k in range(n):
        proj = np.zeros((n, n), dtype=np.complex128)
        proj[k, k] = 1.0
        pairs.append((np.diag(arr[k].astype(np.complex128)), proj))
    return make_holevo_form(n, pairs, tol)


def holevo_from_rank_one_kraus(operators, tol: Tolerances = DEFAULT_TOL) -> HolevoForm:
    """Build the pair form from rank-one operators V_k = |a_k><b_k|.

    Pair k is (V_k* V_k, V_k V_k* / tr(V_k V_k*)); the operators must each
    have numerical rank one and satisfy sum_k V_k* V_k = I.
    """
    ops = [as_square(v, f"V[{k}]") for k, v in enumerate(operators)]
    if not ops:
        raise ValidationError("need at least one operator")
    n = ops[0].shape[0]
    pairs = []
    for k, v in enumerate(ops):
        if v.shape[0] != n:
            raise DimensionMismatch(f"V[{k}] must be {n}x{n}, got {v.shape}", pair_index=k)
        sigma = np.linalg.svd(v, compute_uv=False)
        rank = int(np.count_nonzero(sigma > tol.zero_eig_tol * max(1.0, float(sigma[0]))))
        if rank != 1:
            raise KrausRankTooHigh(f"V[{k}] has numerical rank {rank}, expected 1",
                                   pair_index=k)
        gram = v.conj().T @ v
        image = v @ v.conj().T
        pairs.append((gram, image / np.trace(image).real))
    closure = sum(f for f, _ in pairs) - np.eye(n)
    defect = float(np.max(np.abs(closure)))
    if defect > tol.stochastic_tol:
        raise TracePreservationViolation(
            f"sum_k V_k* V_k differs from I by {defect:.3e}")
    return make_holevo_form(n, pairs, tol)
