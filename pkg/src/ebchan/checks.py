"""Cross-validation suite for channels in Holevo form.

Every check recomputes a quantity along two independent routes and compares,
so a bug in either route surfaces as a mismatch rather than silently
propagating.  Used by the ``verify`` CLI command and by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import (HolevoForm, apply_linear, choi, choi_pair_sum,
                      compare_nonzero_spectrum, factorization, fixed_point,
                      iterated_form, natural_rep, stochastic_rep)
from .linalg import DEFAULT_TOL, Tolerances, unvec, vec
from .primitivity import (SUBSET_CAP, channel_primitivity_index,
                          strictly_positive_at, sum_R_positive_definite,
                          sweep_positive_iterate)
from .stochastic import primitivity_index

ROUTE_TOL = 1e-10
WITNESS_TOL = 1e-8
CONVERGENCE_TOL = 1e-6

# 2**SWEEP_CAP subset kernels per iterate is the practical limit for the
# definition-level oracle; beyond it only the structural route is checked.
SWEEP_CAP = 12


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str

    def __bool__(self) -> bool:
        return self.ok


def _result(name: str, ok, detail: str) -> CheckResult:
    return CheckResult(name, bool(ok), detail)


def run_channel_checks(form: HolevoForm, tol: Tolerances = DEFAULT_TOL,
                       rng=None) -> list:
    """Run the full invariant suite on one channel; returns all results."""
    if rng is None:
        rng = np.random.default_rng(0)
    n, r = form.n, form.r
    out = []

    closure = np.eye(n, dtype=np.complex128)
    for f in form.effects:
        closure -= f
    defect = float(np.max(np.abs(closure)))
    out.append(_result("povm_closure", defect <= tol.stochastic_tol,
                       f"max |sum F - I| = {defect:.3e}"))

    rep = natural_rep(form)
    worst = 0.0
    for _ in range(50):
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        direct = apply_linear(form, x)
        via_rep = unvec(rep @ vec(x))
        scale = 1.0 + float(np.max(np.abs(x)))
        worst = max(worst, float(np.max(np.abs(direct - via_rep))) / scale)
    out.append(_result("linear_extension", worst <= ROUTE_TOL,
                       f"max relative action mismatch = {worst:.3e}"))

    choi_defect = float(np.max(np.abs(choi(form) - choi_pair_sum(form))))
    out.append(_result("choi_two_routes", choi_defect <= ROUTE_TOL,
                       f"max |Choi route difference| = {choi_defect:.3e}"))

    a, b = factorization(form)
    s = stochastic_rep(form, tol)
    ab_defect = float(np.max(np.abs(rep - a @ b)))
    ba_defect = float(np.max(np.abs(s - (b @ a).real)))
    imag_leak = float(np.max(np.abs((b @ a).imag)))
    out.append(_result("factorization", max(ab_defect, ba_defect, imag_leak) <= ROUTE_TOL,
                       f"|rep - AB| = {ab_defect:.3e}, |S - BA| = {ba_defect:.3e}"))

    worst_iter = 0.0
    for m in (2, 3):
        iterated = iterated_form(form, m, tol)
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        composed = x
        for _ in range(m):
            composed = apply_linear(form, composed)
        at_once = apply_linear(iterated, x)
        scale = 1.0 + float(np.max(np.abs(x)))
        worst_iter = max(worst_iter, float(np.max(np.abs(composed - at_once))) / scale)
    out.append(_result("iterated_form", worst_iter <= ROUTE_TOL,
                       f"max m-fold composition mismatch = {worst_iter:.3e}"))

    spec = compare_nonzero_spectrum(form, tol)
    out.append(_result("nonzero_spectrum", spec.matched,
                       f"{len(spec.channel_nonzero)} vs {len(spec.matrix_nonzero)} eigenvalues, "
                       f"max pair distance = {spec.max_pair_distance:.3e}"))

    verdict = primitivity_index(s, tol)
    fp = fixed_point(form, tol)
    out.append(_result("fixed_point_residual", fp.residual <= ROUTE_TOL,
                       f"|apply(rho*) - rho*| = {fp.residual:.3e}"))
    if verdict.primitive:
        # primitive channels forget their input; the spectral gap of S sets
        # the pace (nonzero spectra of S and the channel action agree), so
        # budget iterations from the second-largest eigenvalue modulus
        moduli = np.sort(np.abs(np.linalg.eigvals(s)))[::-1]
        lam2 = float(moduli[1]) if moduli.size > 1 else 0.0
        rho = np.eye(n, dtype=np.complex128)
        rho[0, 0] += 1.0
        rho /= np.trace(rho).real
        dist = float(np.max(np.abs(rho - fp.rho)))
        cap = 10 * verdict.index + 200
        if 0.0 < lam2 < 1.0:
            needed = np.log(1e-3 * CONVERGENCE_TOL / max(dist, 1e-15)) / np.log(lam2)
            cap = max(cap, int(needed) + 1)
        cap = min(cap, 200_000)
        v = vec(rho)
        target = vec(fp.rho)
        steps = 0
        while dist > CONVERGENCE_TOL and steps < cap:
            v = rep @ v
            dist = float(np.max(np.abs(v - target)))
            steps += 1
        out.append(_result("fixed_point_convergence", dist <= CONVERGENCE_TOL,
                           f"distance {dist:.3e} after {steps} iterations "
                           f"(|lambda_2| = {lam2:.4f})"))

    report = channel_primitivity_index(form, tol)
    structural = report.channel_primitive
    if r <= min(SUBSET_CAP, SWEEP_CAP):
        swept, swept_index = sweep_positive_iterate(form, tol)
        agree = (structural == swept) and (report.q_index == swept_index)
        out.append(_result("primitivity_two_routes", agree,
                           f"structural: primitive={structural} q={report.q_index}; "
                           f"sweep: primitive={swept} q={swept_index}"))
    if report.q_index is not None and report.p_index is not None:
        out.append(_result("index_gap", report.bound_abs_diff_ok,
                           f"|q - p| = |{report.q_index} - {report.p_index}|"))
        out.append(_result("index_bound", report.holevo_rank_bound_ok,
                           f"q = {report.q_index} vs r^2 - 2r + 3 = {r * r - 2 * r + 3}"))

    if r <= SUBSET_CAP:
        probe_m = report.q_index if report.q_index is not None else 1
        res = strictly_positive_at(form, probe_m, tol)
        if not res.holds and res.state is not None:
            leak = abs(res.value)
            out.append(_result("witness_soundness", leak <= WITNESS_TOL,
                               f"claimed-zero matrix element = {leak:.3e} at m = {res.m}"))
        elif not res.holds:
            out.append(_result("witness_soundness", False,
                               f"negative verdict at m = {res.m} carries no witness"))

    if not sum_R_positive_definite(form, tol) and structural:
        out.append(_result("report_consistency", False,
                           "channel flagged primitive with singular sum of states"))
    return out


def all_passed(results) -> bool:
    return all(res.ok for res in results)
