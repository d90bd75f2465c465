"""Globally optimal unambiguous discrimination (no post-measurement information).

An unambiguous POVM for a four-state product basis ensemble is parametrized
by four nonnegative coefficients s_i: the conclusive effects are
M_i = s_i |phitilde_i><phitilde_i| built on the reciprocal basis, and
M_? = 1 - sum_j M_j must stay positive semidefinite.  The optimal success
probability p_G maximizes sum_i eta_i s_i over that convex set; optimality
is certified by a PSD operator K satisfying the complementary-slackness
conditions checked in `verify_certificate`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .config import default_tol
from .ensembles import (
    BELL_PHI_MINUS,
    BELL_PSI_MINUS,
    Ensemble,
    KET_MINUS,
    LABELS,
    ReciprocalBasis,
    reciprocal_basis,
)
from .linalg import IDENTITY_4, outer


@dataclass(frozen=True)
class UnambiguousPovm:
    """Coefficients s_i >= 0 over labels, compiled against a reciprocal basis."""

    s: dict[str, float]
    basis: ReciprocalBasis

    def effect(self, label: str) -> np.ndarray:
        if label == "?":
            return self.inconclusive_effect()
        return self.s[label] * outer(self.basis.vectors[label])

    def inconclusive_effect(self) -> np.ndarray:
        m = IDENTITY_4.copy()
        for i in LABELS:
            m -= self.effect(i)
        return m

    def effects(self) -> dict[str, np.ndarray]:
        out = {i: self.effect(i) for i in LABELS}
        out["?"] = self.inconclusive_effect()
        return out


def compile_povm(s, rb: ReciprocalBasis, tol: float | None = None) -> UnambiguousPovm:
    """Build the unambiguous POVM for coefficients s, verifying feasibility.

    Raises ValueError if any s_i < 0 or the inconclusive effect fails the
    PSD check (infeasible coefficients).
    """
    if tol is None:
        tol = default_tol()
    s = {i: float(s[i]) for i in LABELS}
    if any(v < -tol for v in s.values()):
        raise ValueError("coefficients must be nonnegative")
    s = {i: max(v, 0.0) for i, v in s.items()}
    povm = UnambiguousPovm(s=s, basis=rb)
    if not linalg.psd_check(povm.inconclusive_effect(), tol=tol):
        raise ValueError("inconclusive effect is not PSD: infeasible coefficients")
    return povm


def error_free_residual(povm: UnambiguousPovm, e: Ensemble) -> float:
    """Largest |Tr(rho_i M_j)| over conclusive j != i."""
    worst = 0.0
    for i in LABELS:
        rho = e.density(i)
        for j in LABELS:
            if j == i:
                continue
            worst = max(worst, abs(np.trace(rho @ povm.effect(j)).real))
    return worst


def success_probability(povm: UnambiguousPovm, e: Ensemble) -> float:
    """Average conclusive success probability sum_i eta_i Tr(rho_i M_i).

    Computed both as sum_i eta_i s_i (exact, since <phi_i|phitilde_i> = 1)
    and by explicit traces; the two must agree to 1e-12.
    """
    rb = reciprocal_basis(e)
    for i in LABELS:
        if np.linalg.norm(rb.vectors[i] - povm.basis.vectors[i]) > 1e-10:
            raise ValueError("POVM was compiled against a different ensemble")
    direct = sum(e.priors[i] * povm.s[i] for i in LABELS)
    via_trace = sum(
        e.priors[i] * np.trace(e.density(i) @ povm.effect(i)).real for i in LABELS
    )
    if abs(direct - via_trace) > 1e-12:
        raise AssertionError(
            f"success probability cross-check failed: {direct} vs {via_trace}"
        )
    return float(direct)


class SolverError(RuntimeError):
    """Raised when an optimizer fails to converge to the requested accuracy."""


def solve_oud(e: Ensemble) -> tuple[UnambiguousPovm, float]:
    """Maximize sum_i eta_i s_i subject to s >= 0 and M_? PSD.

    Interior-point method: maximize the log-barrier surrogate
        eta . s + mu * (sum_i log s_i + log det M_?(s))
    by damped Newton steps in the 4 coefficients, shrinking mu
    geometrically.  The feasible set is convex (nonnegative orthant
    intersected with a spectrahedron slice), so the barrier central path
    converges to the global optimum; the final duality gap is bounded by
    8 * mu_final, well below the 1e-6 contract.
    """
    rb = reciprocal_basis(e)
    eta = np.array([e.priors[i] for i in LABELS])
    proj = np.stack([outer(rb.vectors[i]) for i in LABELS])  # (4,4,4)

    def m_inconclusive(s):
        return IDENTITY_4 - np.tensordot(s, proj, axes=1)

    def in_domain(s):
        if np.any(s <= 0):
            return False
        return linalg.min_eigenvalue((m_inconclusive(s) + m_inconclusive(s).conj().T) / 2) > 0

    def barrier_grad_hess(s, mu):
        m = m_inconclusive(s)
        minv = np.linalg.inv(m)
        # d/ds_i log det M = -Tr(Minv P_i);  d2/ds_i ds_j = -Tr(Minv P_i Minv P_j)
        mp = np.einsum("ab,kbc->kac", minv, proj)  # Minv P_k
        grad = eta + mu * (1.0 / s - np.einsum("kaa->k", mp).real)
        hess = -mu * (
            np.diag(1.0 / s**2)
            + np.einsum("iab,jba->ij", mp, mp).real
        )
        return grad, hess

    # Strictly feasible start: small coefficients keep M_? well conditioned.
    s = np.full(4, 1e-3)
    scale = max(np.linalg.norm(outer(rb.vectors[i])) for i in LABELS)
    s /= scale

    mu = 1.0
    mu_final = 1e-10
    total_iters = 0
    while mu > mu_final:
        for _ in range(200):
            total_iters += 1
            grad, hess = barrier_grad_hess(s, mu)
            try:
                step = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError:
                step = grad
            # Backtrack into the domain, then require surrogate increase.
            t = 1.0
            f0 = _barrier_value(eta, s, mu, m_inconclusive)
            while t > 1e-14:
                cand = s + t * step
                if in_domain(cand) and _barrier_value(
                    eta, cand, mu, m_inconclusive
                ) > f0:
                    break
                t *= 0.5
            else:
                break
            s = s + t * step
            if np.linalg.norm(grad @ np.linalg.solve(hess, grad)) < 1e-14:
                break
        mu *= 0.1
        if total_iters > 100000:
            raise SolverError("unambiguous-discrimination solver did not converge")

    # Snap negligible coefficients to zero and recompile with verification.
    s = np.where(s < 1e-9, 0.0, s)
    povm = compile_povm(dict(zip(LABELS, s)), rb, tol=1e-8)
    return povm, success_probability(povm, e)


def _barrier_value(eta, s, mu, m_inconclusive):
    m = m_inconclusive(s)
    sign, logdet = np.linalg.slogdet(m)
    if sign.real <= 0:
        return -np.inf
    return float(eta @ s + mu * (np.sum(np.log(s)) + logdet))


@dataclass(frozen=True)
class OudCertificate:
    """PSD operator K certifying global optimality of an unambiguous POVM."""

    K: np.ndarray


@dataclass(frozen=True)
class CertificateVerdict:
    accepted: bool
    p_G: float
    dual_feasibility_residual: float      # min_i <phitilde_i|K|phitilde_i> - eta_i
    slackness_residual: float             # max_i |Tr[M_i (K - eta_i rho_i)]|
    inconclusive_residual: float          # |Tr(M_? K)|
    cross_check_residual: float           # |Tr K - success probability|


def verify_certificate(
    cert: OudCertificate,
    povm: UnambiguousPovm,
    e: Ensemble,
    tol: float = 1e-6,
) -> CertificateVerdict:
    """Check the optimality conditions linking K, the POVM, and the ensemble.

    Accepted iff K is PSD, <phitilde_i|K|phitilde_i> >= eta_i for all i,
    Tr[M_i (K - eta_i rho_i)] = 0 for all i, and Tr(M_? K) = 0, all within
    tol.  On acceptance p_G = Tr K, which must also match the POVM's success
    probability within tol.
    """
    K = linalg.require_hermitian(cert.K)
    rb = povm.basis
    dual = min(
        (rb.vectors[i].conj() @ K @ rb.vectors[i]).real - e.priors[i] for i in LABELS
    )
    slack = max(
        abs(np.trace(povm.effect(i) @ (K - e.priors[i] * e.density(i))).real)
        for i in LABELS
    )
    inconclusive = abs(np.trace(povm.inconclusive_effect() @ K).real)
    trace_k = float(np.trace(K).real)
    cross = abs(trace_k - success_probability(povm, e))
    accepted = (
        linalg.psd_check(K, tol=tol)
        and dual >= -tol
        and slack <= tol
        and inconclusive <= tol
        and cross <= tol
    )
    return CertificateVerdict(
        accepted=accepted,
        p_G=trace_k,
        dual_feasibility_residual=float(dual),
        slackness_residual=float(slack),
        inconclusive_residual=float(inconclusive),
        cross_check_residual=float(cross),
    )


def closed_form_certificate(example: str, gamma: float) -> OudCertificate:
    """The known optimality certificate K for the built-in example families.

    lock:   K = g/(4(1+g)) (|PhiMinus><PhiMinus| + |PsiMinus><PsiMinus|)
    unlock: K = g/(4(1+g)) |-><-| (x) 1_2
    Both are rank 2 with Tr K = g/(2(1+g)).
    """
    if gamma < 2:
        raise ValueError(f"gamma must be >= 2, got {gamma}")
    c = gamma / (4 * (1 + gamma))
    if example == "lock":
        K = c * (outer(BELL_PHI_MINUS) + outer(BELL_PSI_MINUS))
    elif example == "unlock":
        K = c * linalg.kron(outer(KET_MINUS), np.eye(2))
    else:
        raise ValueError(f"unknown example {example!r}")
    return OudCertificate(K=K)


def closed_form_optimal_povm(example: str, gamma: float) -> UnambiguousPovm:
    """The known optimal unambiguous POVM for the built-in examples.

    Both families: conclusive weight 1/2 on labels 0 and 1 (the reciprocal
    vectors have norm sqrt(2), so the effects are unit-rank projectors),
    nothing on + and -.
    """
    if example == "lock":
        from .ensembles import make_lock_example

        e = make_lock_example(gamma)
    elif example == "unlock":
        from .ensembles import make_unlock_example

        e = make_unlock_example(gamma)
    else:
        raise ValueError(f"unknown example {example!r}")
    rb = reciprocal_basis(e)
    return compile_povm({"0": 0.5, "1": 0.5, "+": 0.0, "-": 0.0}, rb)


def solve_oud_dual(e: Ensemble, solver: str = "CLARABEL") -> OudCertificate:
    """Minimal-trace certificate: min Tr K over PSD K with
    <phitilde_i|K|phitilde_i> >= eta_i.

    This is the dual of the unambiguous-discrimination maximization, so by
    strong duality Tr K equals p_G; solved through an off-the-shelf convex
    solver, it provides a certificate route independent of the primal
    interior-point iteration.
    """
    import cvxpy as cp

    rb = reciprocal_basis(e)
    K = cp.Variable((4, 4), hermitian=True)
    constraints = [K >> 0]
    for i in LABELS:
        v = rb.vectors[i]
        constraints.append(cp.real(cp.quad_form(v, K)) >= e.priors[i])
    problem = cp.Problem(cp.Minimize(cp.real(cp.trace(K))), constraints)
    problem.solve(solver=solver)
    if problem.status not in ("optimal", "optimal_inaccurate"):
        raise SolverError(f"dual solver finished with status {problem.status}")
    return OudCertificate(K=linalg.project_psd(np.asarray(K.value)))
