"""Discrimination aided by post-measurement information (PI).

The measurement is performed first and the subensemble index b (0 for
labels {0,1}, 1 for {+,-}) is revealed afterwards.  Outcomes therefore
carry a pair (w0, w1) with w0 in {0,1,?} and w1 in {+,-,?}: once b is
known, component w_b is announced.  The error-free condition forbids each
effect from touching states it could misannounce.

This module provides the 9-outcome POVM formalism, the optimal success
probability with PI (an SDP), the pairwise "tilde" rewriting of the
objective, the product-vector obstruction behind the LOCC upper bound,
and minimum-error discrimination (p_guess) with an optimality certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from . import linalg
from .config import default_tol
from .ensembles import A0, A1, Ensemble, INCONCLUSIVE, LABELS
from .linalg import IDENTITY_4, outer
from .oud import SolverError

OMEGA = tuple(
    (w0, w1)
    for w0 in A0 + (INCONCLUSIVE,)
    for w1 in A1 + (INCONCLUSIVE,)
)

CONCLUSIVE_PAIRS = tuple((w0, w1) for w0 in A0 for w1 in A1)


def forbidden_states(omega: tuple[str, str]) -> tuple[str, ...]:
    """Labels whose states the effect M_omega must annihilate.

    Announcing w_b != ? while the prepared state is the other member of the
    same subensemble would be an error, so that state must get probability
    zero on this effect.
    """
    w0, w1 = omega
    out = []
    if w0 != INCONCLUSIVE:
        out.append(A0[1 - A0.index(w0)])
    if w1 != INCONCLUSIVE:
        out.append(A1[1 - A1.index(w1)])
    return tuple(out)


@dataclass(frozen=True)
class PiPovm:
    """9-outcome measurement indexed by (w0, w1) pairs."""

    effects: dict[tuple[str, str], np.ndarray]

    def effect(self, omega) -> np.ndarray:
        return self.effects.get(tuple(omega), np.zeros((4, 4), dtype=complex))


@dataclass(frozen=True)
class PiVerdict:
    accepted: bool
    completeness_residual: float
    psd_residual: float                       # most negative effect eigenvalue
    error_free_residuals: dict[tuple[str, str], float]


def verify_pi_unambiguous(
    povm: PiPovm, e: Ensemble, tol: float | None = None
) -> PiVerdict:
    """Check completeness, positivity, and the PI error-free condition."""
    if tol is None:
        tol = default_tol()
    total = np.zeros((4, 4), dtype=complex)
    psd_floor = 0.0
    for omega in OMEGA:
        m = linalg.require_hermitian(povm.effect(omega))
        total += m
        psd_floor = min(psd_floor, linalg.min_eigenvalue(m))
    completeness = float(np.max(np.abs(total - IDENTITY_4)))
    residuals = {}
    for omega in OMEGA:
        m = povm.effect(omega)
        worst = 0.0
        for j in forbidden_states(omega):
            worst = max(worst, abs(np.trace(e.density(j) @ m).real))
        residuals[omega] = worst
    accepted = (
        completeness <= max(tol, 1e-10)
        and psd_floor >= -tol
        and all(r <= max(tol, 1e-10) for r in residuals.values())
    )
    return PiVerdict(
        accepted=accepted,
        completeness_residual=completeness,
        psd_residual=float(psd_floor),
        error_free_residuals=residuals,
    )


@dataclass(frozen=True)
class TildePair:
    """Pairwise average of one state from each subensemble."""

    omega: tuple[str, str]
    weight: float           # (eta_w0 + eta_w1) / 2
    density: np.ndarray     # (eta_w0 rho_w0 + eta_w1 rho_w1) / (eta_w0 + eta_w1)


def tilde_ensemble(e: Ensemble) -> list[TildePair]:
    """The four pairwise-averaged states over {0,1} x {+,-}."""
    pairs = []
    for w0, w1 in CONCLUSIVE_PAIRS:
        total = e.priors[w0] + e.priors[w1]
        if total <= 0:
            raise ValueError(f"pair ({w0},{w1}) has zero combined prior")
        rho = (e.priors[w0] * e.density(w0) + e.priors[w1] * e.density(w1)) / total
        pairs.append(TildePair(omega=(w0, w1), weight=total / 2, density=rho))
    return pairs


def pi_success_probability(povm: PiPovm, e: Ensemble) -> float:
    """Average success probability of an unambiguous PI measurement.

    Objective: sum over b and i in A_b of eta_i Tr[rho_i sum_{w_b = i} M_w].
    Cross-checked against the pairwise rewriting
        2 sum_pairs weight Tr(rho_pair M_pair) + boundary (i,?) / (?,j) terms,
    which must agree to 1e-12.  (Each fully conclusive effect is counted
    once for b=0 and once for b=1, hence the factor 2 on the paired term.)
    """
    value = 0.0
    for i in A0:
        acc = sum(povm.effect((i, w1)) for w1 in A1 + (INCONCLUSIVE,))
        value += e.priors[i] * np.trace(e.density(i) @ acc).real
    for j in A1:
        acc = sum(povm.effect((w0, j)) for w0 in A0 + (INCONCLUSIVE,))
        value += e.priors[j] * np.trace(e.density(j) @ acc).real

    alt = 0.0
    for pair in tilde_ensemble(e):
        alt += 2 * pair.weight * np.trace(pair.density @ povm.effect(pair.omega)).real
    for i in A0:
        alt += e.priors[i] * np.trace(e.density(i) @ povm.effect((i, INCONCLUSIVE))).real
    for j in A1:
        alt += e.priors[j] * np.trace(e.density(j) @ povm.effect((INCONCLUSIVE, j))).real
    if abs(value - alt) > 1e-12:
        raise AssertionError(
            f"PI objective cross-check failed: {value} vs {alt}"
        )
    return float(value)


def _admissible_subspace(e: Ensemble, omega) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of the forbidden states."""
    forbidden = [e.states[j] for j in forbidden_states(omega)]
    if not forbidden:
        return IDENTITY_4.copy()
    span = np.column_stack(forbidden)
    q, _ = np.linalg.qr(span)
    proj = IDENTITY_4 - q @ q.conj().T
    w, v = linalg.hermitian_eig(proj)
    return v[:, w > 0.5]


def solve_oud_pi(e: Ensemble, solver: str = "CLARABEL") -> tuple[PiPovm, float]:
    """Maximize the PI success probability over unambiguous 9-outcome POVMs.

    Each constrained effect is parametrized on the orthogonal complement of
    its forbidden states' span, which enforces the error-free condition
    exactly; the remaining problem (PSD blocks summing to the identity,
    linear objective) is solved as an SDP.
    """
    bases = {omega: _admissible_subspace(e, omega) for omega in OMEGA}
    variables = {
        omega: cp.Variable(
            (bases[omega].shape[1], bases[omega].shape[1]), hermitian=True
        )
        for omega in OMEGA
    }

    def compiled(omega):
        v = bases[omega]
        return v @ variables[omega] @ v.conj().T

    constraints = [variables[omega] >> 0 for omega in OMEGA]
    constraints.append(
        sum(compiled(omega) for omega in OMEGA) == np.eye(4)
    )

    objective = 0
    for i in A0:
        weighted = e.priors[i] * e.density(i)
        for w1 in A1 + (INCONCLUSIVE,):
            objective += cp.real(cp.trace(weighted @ compiled((i, w1))))
    for j in A1:
        weighted = e.priors[j] * e.density(j)
        for w0 in A0 + (INCONCLUSIVE,):
            objective += cp.real(cp.trace(weighted @ compiled((w0, j))))

    problem = cp.Problem(cp.Maximize(objective), constraints)
    problem.solve(solver=solver)
    if problem.status not in ("optimal", "optimal_inaccurate"):
        raise SolverError(f"PI solver finished with status {problem.status}")

    effects = {}
    for omega in OMEGA:
        v = bases[omega]
        block = np.asarray(variables[omega].value)
        effects[omega] = linalg.project_psd(v @ block @ v.conj().T)
    # Absorb the rounding slack into the doubly inconclusive effect, which
    # carries no error-free constraint and no objective weight.
    slack = IDENTITY_4 - sum(effects.values())
    effects[(INCONCLUSIVE, INCONCLUSIVE)] = linalg.project_psd(
        effects[(INCONCLUSIVE, INCONCLUSIVE)] + slack
    )
    povm = PiPovm(effects=effects)
    verdict = verify_pi_unambiguous(povm, e, tol=1e-6)
    if not verdict.accepted:
        raise SolverError("PI solver returned an infeasible measurement")
    return povm, pi_success_probability(povm, e)


def product_vector_obstruction(e: Ensemble, pair, tol: float = 1e-10):
    """Witness product vector for a conclusive pair, or None if obstructed.

    A witness v = a (x) b overlaps both states of the pair but is orthogonal
    to the other two ensemble states.  Each orthogonality constraint on a
    product state c (x) d forces a _|_ c or b _|_ d; with single-qubit
    factors each branch fixes a and/or b up to phase, so the four branch
    combinations can be enumerated exactly.
    """
    pair = tuple(pair)
    if pair not in CONCLUSIVE_PAIRS:
        raise ValueError(f"pair must lie in {CONCLUSIVE_PAIRS}, got {pair}")
    excluded = [j for j in LABELS if j not in pair]
    # Normalized local factors keep the overlap thresholds scale-free.
    c = {j: e.factors[j][0] / np.linalg.norm(e.factors[j][0]) for j in LABELS}
    d = {j: e.factors[j][1] / np.linalg.norm(e.factors[j][1]) for j in LABELS}

    def perp(u):
        # The unique (up to phase) single-qubit vector orthogonal to u.
        return np.array([-u[1].conj(), u[0].conj()])

    def generic_candidates():
        return (
            np.array([1, 0], dtype=complex),
            np.array([0, 1], dtype=complex),
            np.array([1, 1], dtype=complex) / np.sqrt(2),
            np.array([1, 1j], dtype=complex) / np.sqrt(2),
        )

    j1, j2 = excluded
    for a_choice in ("perp1", "perp2", "free"):
        if a_choice == "perp1":
            a_candidates = (perp(c[j1]),)
            b_must_kill = [j2]
        elif a_choice == "perp2":
            a_candidates = (perp(c[j2]),)
            b_must_kill = [j1]
        else:
            a_candidates = generic_candidates()
            b_must_kill = [j1, j2]
        for a in a_candidates:
            # Residual orthogonality goes to b; drop constraints already
            # satisfied on the a side.
            forced = [j for j in b_must_kill if abs(np.vdot(c[j], a)) > tol]
            if len(forced) == 2:
                if abs(abs(np.vdot(d[forced[0]], d[forced[1]]))
                       - np.linalg.norm(d[forced[0]]) * np.linalg.norm(d[forced[1]])) > tol:
                    continue  # two independent constraints kill b
                b_candidates = (perp(d[forced[0]]),)
            elif len(forced) == 1:
                b_candidates = (perp(d[forced[0]]),)
            else:
                b_candidates = generic_candidates()
            for b in b_candidates:
                v = linalg.kron_vec(a / np.linalg.norm(a), b / np.linalg.norm(b))
                ok = all(
                    abs(np.vdot(e.states[j], v)) <= tol for j in excluded
                ) and all(abs(np.vdot(e.states[w], v)) > tol for w in pair)
                if ok:
                    return v
    return None


@dataclass(frozen=True)
class MeCertificate:
    """Hermitized sum_i eta_i M_i rho_i at a minimum-error optimum."""

    K: np.ndarray


@dataclass(frozen=True)
class MeVerdict:
    accepted: bool
    p_guess: float
    dominance_residual: float    # most negative eigenvalue over K - eta_i rho_i
    tightness_residual: float    # |Tr K - solver value|


def verify_me_certificate(
    cert: MeCertificate,
    e: Ensemble,
    tol: float = 1e-6,
    solver_value: float | None = None,
) -> MeVerdict:
    """Accept iff K - eta_i rho_i is PSD for all i; then p_guess = Tr K.

    A trivially loose K (e.g. the identity) passes the dominance test, so
    when the solver's value is supplied the certificate must also be tight:
    Tr K has to match it within tol.
    """
    K = linalg.require_hermitian(cert.K)
    worst = min(
        linalg.min_eigenvalue(K - e.priors[i] * e.density(i)) for i in LABELS
    )
    trace_k = float(np.trace(K).real)
    tightness = 0.0 if solver_value is None else abs(trace_k - solver_value)
    accepted = worst >= -tol and tightness <= tol
    return MeVerdict(
        accepted=accepted,
        p_guess=trace_k,
        dominance_residual=float(worst),
        tightness_residual=float(tightness),
    )


def solve_me(
    e: Ensemble, labels: tuple[str, ...] = LABELS
) -> tuple[dict[str, np.ndarray], float]:
    """Minimum-error discrimination: maximize sum eta_i Tr(rho_i M_i).

    Fixed-point iteration on the square-root rebalancing map
        M_i <- Rinv_sqrt (eta_i rho_i) M_i (eta_i rho_i) Rinv_sqrt,
        R = sum_j (eta_j rho_j) M_j (eta_j rho_j),
    which preserves completeness on the states' support and converges to
    the optimum for this problem size.  Optimality is audited through
    `verify_me_certificate`; non-convergence raises SolverError.

    `labels` restricts the problem to a subset of states (priors are used
    unrenormalized, so the value is comparable across subsets only after
    the caller renormalizes).
    """
    weighted = {i: e.priors[i] * e.density(i) for i in labels}
    support = sum(e.density(i) for i in labels)
    w, v = linalg.hermitian_eig(support)
    supp_cols = v[:, w > 1e-12]
    proj = supp_cols @ supp_cols.conj().T
    complement = IDENTITY_4 - proj

    effects = {i: proj / len(labels) for i in labels}
    prev = -np.inf
    for iteration in range(10000):
        r = sum(weighted[i] @ effects[i] @ weighted[i] for i in labels)
        r = (r + r.conj().T) / 2
        wr, vr = linalg.hermitian_eig(r)
        inv_sqrt = np.zeros_like(r)
        for k in range(wr.size):
            if wr[k] > 1e-15:
                inv_sqrt += np.outer(vr[:, k], vr[:, k].conj()) / np.sqrt(wr[k])
        new = {
            i: inv_sqrt @ weighted[i] @ effects[i] @ weighted[i] @ inv_sqrt
            for i in labels
        }
        # Renormalize exactly onto the support projector.
        total = sum(new.values())
        total = (total + total.conj().T) / 2
        correction = proj - total
        for i in labels:
            new[i] = linalg.project_psd(new[i] + correction / len(labels))
        effects = new
        value = sum(
            np.trace(weighted[i] @ effects[i]).real for i in labels
        )
        if abs(value - prev) < 1e-14 and iteration > 10:
            break
        prev = value
    else:
        raise SolverError("minimum-error fixed point did not converge")

    # Spread the support complement uniformly so the effects sum to 1.
    out = {}
    for i in labels:
        out[i] = effects[i] + complement / len(labels)
    value = float(sum(np.trace(weighted[i] @ out[i]).real for i in labels))
    return out, value


def me_certificate_from_solution(
    e: Ensemble, effects: dict[str, np.ndarray], labels: tuple[str, ...] = LABELS
) -> MeCertificate:
    K = sum(e.priors[i] * effects[i] @ e.density(i) for i in labels)
    return MeCertificate(K=(K + K.conj().T) / 2)


def lemma2_upper_bound(e: Ensemble) -> float | None:
    """p_guess as an upper bound on the LOCC PI success probability.

    Valid only when no conclusive pair admits a product witness vector: the
    paired terms of the objective then vanish for every separable
    measurement, and the remainder is dominated by minimum-error guessing.
    Returns None when some pair has a witness (the premise fails).
    """
    for pair in CONCLUSIVE_PAIRS:
        if product_vector_obstruction(e, pair) is not None:
            return None
    _, value = solve_me(e)
    return value


def helstrom_two_state(eta_a: float, rho_a, eta_b: float, rho_b) -> float:
    """Closed-form two-state minimum-error value (priors need not be normalized)."""
    return 0.5 * (eta_a + eta_b) + 0.5 * linalg.trace_norm(
        eta_a * np.asarray(rho_a) - eta_b * np.asarray(rho_b)
    )
