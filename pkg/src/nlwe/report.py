"""Gap analysis: assemble the six probabilities and classify the PI effect.

For a given ensemble, `analyze` computes the globally optimal unambiguous
success probability with and without post-measurement information, brackets
the LOCC-restricted values between the best supplied protocol and the best
valid upper-bound certificate, computes the guessing probability, and
classifies whether PI locks, unlocks, or leaves unchanged the gap between
global and LOCC performance (nonlocality without entanglement).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ensembles import Ensemble
from .locc import BoundCertificateH, LoccProtocol, lemma1_upper_bound, locc_success
from .oud import OudCertificate, SolverError, solve_oud, verify_certificate
from .postinfo import (
    lemma2_upper_bound,
    me_certificate_from_solution,
    solve_me,
    solve_oud_pi,
    verify_me_certificate,
)

GAP_THRESHOLD = 1e-6

YES = "yes"
NO = "no"
UNDETERMINED = "undetermined"

LOCKED_BY_PI = "LockedByPI"
UNLOCKED_BY_PI = "UnlockedByPI"
NO_EFFECT = "NoEffect"
CLASS_UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper + 1e-9:
            raise AssertionError(
                f"crossed interval [{self.lower}, {self.upper}]"
            )


@dataclass(frozen=True)
class GapReport:
    p_G: float
    p_L: Interval
    p_G_PI: float
    p_L_PI: Interval
    p_guess: float | None
    nlwe_without_pi: str
    nlwe_with_pi: str
    classification: str
    diagnostics: dict = field(default_factory=dict)


def _gap_flag(interval: Interval, global_value: float) -> str:
    """yes / no / undetermined verdict for one NLWE gap."""
    if interval.upper < global_value - GAP_THRESHOLD:
        return YES
    if abs(interval.lower - global_value) <= GAP_THRESHOLD and abs(
        interval.upper - global_value
    ) <= GAP_THRESHOLD:
        return NO
    return UNDETERMINED


def classify(nlwe_without_pi: str, nlwe_with_pi: str) -> str:
    """Map the two gap flags to the PI-effect classification."""
    if UNDETERMINED in (nlwe_without_pi, nlwe_with_pi):
        return CLASS_UNDETERMINED
    if nlwe_without_pi == YES and nlwe_with_pi == NO:
        return LOCKED_BY_PI
    if nlwe_without_pi == NO and nlwe_with_pi == YES:
        return UNLOCKED_BY_PI
    # (no, no) and (yes, yes): PI does not change the verdict.
    return NO_EFFECT


def analyze(
    e: Ensemble,
    protocols: list[LoccProtocol] = (),
    certificates: list = (),
    compute_p_guess: bool = True,
) -> GapReport:
    """Full gap report for an ensemble.

    `protocols` supply LOCC lower bounds (plain or PI mode, detected from
    their label alphabet); protocols that are not unambiguous for this
    ensemble are skipped.  `certificates` may mix global-optimality
    certificates (used to audit the solver) and LOCC upper-bound
    certificates.  Solver failures are recorded and the affected flags
    degrade to "undetermined" rather than aborting the report.
    """
    diagnostics: dict = {"skipped_protocols": 0}

    try:
        povm, p_g = solve_oud(e)
    except SolverError as err:
        diagnostics["oud_error"] = str(err)
        povm, p_g = None, float("nan")

    for cert in certificates:
        if isinstance(cert, OudCertificate) and povm is not None:
            verdict = verify_certificate(cert, povm, e)
            diagnostics["oud_certificate_accepted"] = verdict.accepted
            diagnostics["oud_certificate_p_G"] = verdict.p_G

    plain_lower = 0.0
    pi_lower = 0.0
    for p in protocols:
        try:
            value = locc_success(p, e, mode=p.mode)
        except ValueError:
            diagnostics["skipped_protocols"] += 1
            continue
        if p.mode == "plain":
            plain_lower = max(plain_lower, value)
        else:
            pi_lower = max(pi_lower, value)

    plain_upper = p_g
    for cert in certificates:
        if isinstance(cert, BoundCertificateH):
            bound = lemma1_upper_bound(cert, e)
            if bound is not None:
                plain_upper = min(plain_upper, bound)

    try:
        _, p_g_pi = solve_oud_pi(e)
        p_g_pi = min(p_g_pi, 1.0)
    except SolverError as err:
        diagnostics["pi_error"] = str(err)
        p_g_pi = float("nan")

    p_guess = None
    if compute_p_guess:
        try:
            effects, p_guess = solve_me(e)
            me_verdict = verify_me_certificate(
                me_certificate_from_solution(e, effects), e, solver_value=p_guess
            )
            diagnostics["me_certificate_accepted"] = me_verdict.accepted
        except SolverError as err:
            diagnostics["me_error"] = str(err)

    pi_upper = p_g_pi
    lemma2 = lemma2_upper_bound(e)
    diagnostics["lemma2_applies"] = lemma2 is not None
    if lemma2 is not None and not np.isnan(p_g_pi):
        pi_upper = min(pi_upper, lemma2)
        if p_guess is None:
            p_guess = lemma2

    if np.isnan(p_g):
        flag_plain = UNDETERMINED
        p_l = Interval(plain_lower, 1.0)
    else:
        p_l = Interval(plain_lower, max(plain_lower, plain_upper))
        flag_plain = _gap_flag(p_l, p_g)
    if np.isnan(p_g_pi):
        flag_pi = UNDETERMINED
        p_l_pi = Interval(pi_lower, 1.0)
    else:
        p_l_pi = Interval(pi_lower, max(pi_lower, pi_upper))
        flag_pi = _gap_flag(p_l_pi, p_g_pi)

    return GapReport(
        p_G=float(p_g),
        p_L=p_l,
        p_G_PI=float(p_g_pi),
        p_L_PI=p_l_pi,
        p_guess=p_guess,
        nlwe_without_pi=flag_plain,
        nlwe_with_pi=flag_pi,
        classification=classify(flag_plain, flag_pi),
        diagnostics=diagnostics,
    )


def report_to_dict(r: GapReport) -> dict:
    return {
        "p_G": r.p_G,
        "p_L": {"lower": r.p_L.lower, "upper": r.p_L.upper},
        "p_G_PI": r.p_G_PI,
        "p_L_PI": {"lower": r.p_L_PI.lower, "upper": r.p_L_PI.upper},
        "p_guess": r.p_guess,
        "nlwe_without_pi": r.nlwe_without_pi,
        "nlwe_with_pi": r.nlwe_with_pi,
        "classification": r.classification,
        "diagnostics": {
            k: v for k, v in r.diagnostics.items() if not isinstance(v, np.ndarray)
        },
    }
