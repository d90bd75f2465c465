"""Finite-round LOCC protocols over two qubits.

A protocol here is one local measurement by the first party followed by a
second-party measurement that may depend on the first outcome, with every
outcome pair mapped to a conclusive/inconclusive label.  Compiling a
protocol multiplies out the tensor products, which yields a global POVM
whose effects are automatically separable.

Also provided: the built-in protocols and bound certificates for the two
example families, the partial-transpose separability screen (exact for
two qubits), and the upper-bound certificate check for LOCC unambiguous
discrimination.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .config import default_tol
from .ensembles import (
    Ensemble,
    INCONCLUSIVE,
    KET_0,
    KET_1,
    KET_MINUS,
    KET_PLUS,
    LABELS,
    reciprocal_basis,
)
from .linalg import IDENTITY_2, IDENTITY_4, outer
from .postinfo import OMEGA, PiPovm, pi_success_probability, verify_pi_unambiguous


@dataclass(frozen=True)
class LocalMeasurement:
    """A POVM on one qubit: effects summing to the single-qubit identity."""

    party: str                       # "A" (first factor) or "B" (second)
    effects: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.party not in ("A", "B"):
            raise ValueError("party must be 'A' or 'B'")
        total = np.zeros((2, 2), dtype=complex)
        for m in self.effects:
            m = linalg.require_hermitian(np.asarray(m))
            if not linalg.psd_check(m):
                raise ValueError("local effect is not PSD")
            total += m
        if np.max(np.abs(total - IDENTITY_2)) > 1e-10:
            raise ValueError("local effects do not sum to the identity")


@dataclass(frozen=True)
class LoccProtocol:
    """Two-round protocol: round 2 is conditioned on the round-1 outcome.

    `labels` maps (round1 outcome index, round2 outcome index) to either a
    plain outcome in {0,1,+,-,?} or a PI outcome pair (w0, w1).  The label
    alphabet fixes the mode; a protocol cannot be reinterpreted silently.
    """

    round1: LocalMeasurement
    round2: dict[int, LocalMeasurement]
    labels: dict[tuple[int, int], object]

    def __post_init__(self):
        other = "B" if self.round1.party == "A" else "A"
        for k in range(len(self.round1.effects)):
            if k not in self.round2:
                raise ValueError(f"round-1 outcome {k} has no round-2 measurement")
            if self.round2[k].party != other:
                raise ValueError("round 2 must act on the other party")
            for j in range(len(self.round2[k].effects)):
                if (k, j) not in self.labels:
                    raise ValueError(f"leaf ({k},{j}) is unlabeled")

    @property
    def mode(self) -> str:
        """'plain' for {0,1,+,-,?} labels, 'pi' for (w0,w1) pair labels."""
        sample = next(iter(self.labels.values()))
        return "pi" if isinstance(sample, tuple) else "plain"


def compile_protocol(p: LoccProtocol) -> dict:
    """Aggregate leaf tensor-product effects by label.

    The returned effects sum to the two-qubit identity.
    """
    out: dict = {}
    for k, m1 in enumerate(p.round1.effects):
        for j, m2 in enumerate(p.round2[k].effects):
            if p.round1.party == "A":
                eff = linalg.kron(m1, m2)
            else:
                eff = linalg.kron(m2, m1)
            label = p.labels[(k, j)]
            if isinstance(label, tuple):
                label = tuple(label)
            out[label] = out.get(label, np.zeros((4, 4), dtype=complex)) + eff
    total = sum(out.values())
    if np.max(np.abs(total - IDENTITY_4)) > 1e-10:
        raise AssertionError("compiled protocol effects do not sum to the identity")
    return out


def locc_success(
    p: LoccProtocol, e: Ensemble, mode: str, tol: float | None = None
) -> float:
    """Success probability of a compiled protocol, after error-free checks.

    plain mode: sum_i eta_i Tr(rho_i M_i) after verifying Tr(rho_i M_j) = 0
    for conclusive j != i.  pi mode: the PI objective after verifying the
    PI error-free condition.  Raises ValueError when the protocol is not
    unambiguous for this ensemble or its label alphabet mismatches mode.
    """
    if tol is None:
        tol = default_tol()
    if p.mode != mode:
        raise ValueError(f"protocol labels are for mode {p.mode!r}, not {mode!r}")
    compiled = compile_protocol(p)
    if mode == "plain":
        for lbl in compiled:
            if lbl not in LABELS + (INCONCLUSIVE,):
                raise ValueError(f"unexpected plain-mode label {lbl!r}")
        for i in LABELS:
            rho = e.density(i)
            for j in LABELS:
                if j == i or j not in compiled:
                    continue
                r = abs(np.trace(rho @ compiled[j]).real)
                if r > max(tol, 1e-10):
                    raise ValueError(
                        f"protocol is not unambiguous: Tr(rho_{i} M_{j}) = {r:g}"
                    )
        return float(
            sum(
                e.priors[i] * np.trace(e.density(i) @ compiled[i]).real
                for i in LABELS
                if i in compiled
            )
        )
    if mode == "pi":
        for lbl in compiled:
            if lbl not in OMEGA:
                raise ValueError(f"unexpected pi-mode label {lbl!r}")
        povm = PiPovm(effects={omega: compiled.get(omega, np.zeros((4, 4), dtype=complex))
                               for omega in OMEGA})
        verdict = verify_pi_unambiguous(povm, e, tol=tol)
        if not verdict.accepted:
            raise ValueError("protocol is not unambiguous for this ensemble (PI mode)")
        return pi_success_probability(povm, e)
    raise ValueError(f"unknown mode {mode!r}")


def is_separable_effect(m, tol: float | None = None) -> bool:
    """Partial-transpose separability test, exact for two qubits."""
    if tol is None:
        tol = default_tol()
    m = linalg.require_hermitian(np.asarray(m))
    if not linalg.psd_check(m, tol=tol):
        raise ValueError("separability test expects a PSD operator")
    return linalg.psd_check(linalg.partial_transpose(m), tol=tol)


@dataclass(frozen=True)
class BoundCertificateH:
    """PSD operator whose trace upper-bounds the LOCC success probability."""

    H: np.ndarray


def lemma1_upper_bound(
    cert: BoundCertificateH, e: Ensemble, tol: float | None = None
) -> float | None:
    """Tr H as an upper bound on unambiguous LOCC discrimination.

    Requires H PSD and <phitilde_i|H|phitilde_i> >= eta_i for every label
    whose reciprocal vector is a product vector (separable effects cannot
    use the entangled ones at all).  Returns None when the premise fails.
    """
    if tol is None:
        tol = default_tol()
    H = linalg.require_hermitian(cert.H)
    if not linalg.psd_check(H, tol=tol):
        return None
    rb = reciprocal_basis(e)
    for i in LABELS:
        if not rb.is_product[i]:
            continue
        quad = (rb.vectors[i].conj() @ H @ rb.vectors[i]).real
        if quad < e.priors[i] - tol:
            return None
    return float(np.trace(H).real)


def lock_upper_certificate(gamma: float) -> BoundCertificateH:
    """H = 1/(4(1+g)) |1><1| (x) 1_2, closing the lock-example upper bound."""
    if gamma < 2:
        raise ValueError(f"gamma must be >= 2, got {gamma}")
    return BoundCertificateH(
        H=linalg.kron(outer(KET_1), IDENTITY_2) / (4 * (1 + gamma))
    )


# --- built-in protocols -------------------------------------------------

def _projective(u, v, party):
    return LocalMeasurement(party=party, effects=(outer(u), outer(v)))


def lock_locc_protocol() -> LoccProtocol:
    """Measure {|0>,|1>} on A then {|+>,|->} on B; conclude +/- only on A=1.

    Compiles to M_+ = |1><1| (x) |+><+|, M_- = |1><1| (x) |-><-|,
    M_? = |0><0| (x) 1.
    """
    mb = _projective(KET_PLUS, KET_MINUS, "B")
    return LoccProtocol(
        round1=_projective(KET_0, KET_1, "A"),
        round2={0: mb, 1: mb},
        labels={(0, 0): "?", (0, 1): "?", (1, 0): "+", (1, 1): "-"},
    )


def unlock_locc_protocol() -> LoccProtocol:
    """Measure {|+>,|->} on A then {|0>,|1>} on B; conclude 0/1 only on A=-.

    Compiles to M_0 = |-><-| (x) |0><0|, M_1 = |-><-| (x) |1><1|,
    M_? = |+><+| (x) 1.
    """
    mb = _projective(KET_0, KET_1, "B")
    return LoccProtocol(
        round1=_projective(KET_PLUS, KET_MINUS, "A"),
        round2={0: mb, 1: mb},
        labels={(0, 0): "?", (0, 1): "?", (1, 0): "0", (1, 1): "1"},
    )


def lock_pi_protocol() -> LoccProtocol:
    """Product PI measurement discriminating the lock example perfectly.

    Measure {|+>,|->} on A and {|0>,|1>} on B; outcome (x, y) is announced
    as y if the first subensemble was prepared and as x otherwise.
    """
    mb = _projective(KET_0, KET_1, "B")
    return LoccProtocol(
        round1=_projective(KET_PLUS, KET_MINUS, "A"),
        round2={0: mb, 1: mb},
        labels={
            (0, 0): ("0", "+"),
            (0, 1): ("1", "+"),
            (1, 0): ("0", "-"),
            (1, 1): ("1", "-"),
        },
    )


def nu_vectors(gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """The rotated first-party basis used by the unlock PI protocol.

    nu_pm = sqrt(1/2 -+ g / (2 sqrt(1+g^2))) |0> +- sqrt(1/2 +- g / (2 sqrt(1+g^2))) |1>
    """
    if gamma < 2:
        raise ValueError(f"gamma must be >= 2, got {gamma}")
    t = gamma / (2 * np.sqrt(1 + gamma**2))
    nu_plus = np.array([np.sqrt(0.5 - t), np.sqrt(0.5 + t)], dtype=complex)
    nu_minus = np.array([np.sqrt(0.5 + t), -np.sqrt(0.5 - t)], dtype=complex)
    return nu_plus, nu_minus


def unlock_pi_protocol(gamma: float) -> LoccProtocol:
    """Optimal LOCC PI protocol for the unlock example.

    Measure {|nu+>,|nu->} on A; after nu+ measure {|+>,|->} on B and
    announce the second-subensemble label, after nu- measure {|0>,|1>}
    and announce the first-subensemble label.
    """
    nu_plus, nu_minus = nu_vectors(gamma)
    return LoccProtocol(
        round1=LocalMeasurement(party="A", effects=(outer(nu_plus), outer(nu_minus))),
        round2={
            0: _projective(KET_PLUS, KET_MINUS, "B"),
            1: _projective(KET_0, KET_1, "B"),
        },
        labels={
            (0, 0): ("?", "+"),
            (0, 1): ("?", "-"),
            (1, 0): ("0", "?"),
            (1, 1): ("1", "?"),
        },
    )


def builtin_protocols(example: str, gamma: float) -> list[LoccProtocol]:
    """The known-good protocols for a built-in example family."""
    if example == "lock":
        return [lock_locc_protocol(), unlock_locc_protocol(), lock_pi_protocol()]
    if example == "unlock":
        return [unlock_locc_protocol(), lock_locc_protocol(), unlock_pi_protocol(gamma)]
    raise ValueError(f"unknown example {example!r}")


def builtin_bound_certificates(example: str, gamma: float) -> list[BoundCertificateH]:
    if example == "lock":
        return [lock_upper_certificate(gamma)]
    if example == "unlock":
        return []
    raise ValueError(f"unknown example {example!r}")
