"""Optimal unambiguous discrimination of two-qubit product ensembles,
with and without post-measurement information, including LOCC protocol
evaluation, optimality certificates, and gap classification."""

from .ensembles import (
    Ensemble,
    ensemble_from_json,
    ensemble_to_json,
    eta0_to_gamma,
    gamma_to_eta0,
    make_ensemble,
    make_lock_example,
    make_unlock_example,
    reciprocal_basis,
)
from .oud import solve_oud, solve_oud_dual, verify_certificate
from .postinfo import solve_me, solve_oud_pi
from .report import GapReport, analyze

__all__ = [
    "Ensemble",
    "GapReport",
    "analyze",
    "ensemble_from_json",
    "ensemble_to_json",
    "eta0_to_gamma",
    "gamma_to_eta0",
    "make_ensemble",
    "make_lock_example",
    "make_unlock_example",
    "reciprocal_basis",
    "solve_me",
    "solve_oud",
    "solve_oud_dual",
    "solve_oud_pi",
    "verify_certificate",
]

__version__ = "0.1.0"
