"""Four-state two-qubit product ensembles and their reciprocal bases.

An ensemble holds four labeled product pure states |phi_i> = |a_i> (x) |b_i>
with prior probabilities eta_i over the label set {0, 1, +, -}, split into
the subensembles A0 = {0, 1} and A1 = {+, -}.  The two built-in families
("lock" and "unlock") are parametrized by gamma >= 2, equivalently by
eta_0 = gamma / (2 (1 + gamma)) in [1/3, 1/2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import kron_vec, ket, outer, schmidt_rank_one

LABELS = ("0", "1", "+", "-")
A0 = ("0", "1")
A1 = ("+", "-")
INCONCLUSIVE = "?"

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)

BELL_PHI_PLUS = (kron_vec(KET_0, KET_0) + kron_vec(KET_1, KET_1)) / np.sqrt(2)
BELL_PHI_MINUS = (kron_vec(KET_0, KET_0) - kron_vec(KET_1, KET_1)) / np.sqrt(2)
BELL_PSI_PLUS = (kron_vec(KET_0, KET_1) + kron_vec(KET_1, KET_0)) / np.sqrt(2)
BELL_PSI_MINUS = (kron_vec(KET_0, KET_1) - kron_vec(KET_1, KET_0)) / np.sqrt(2)


def gamma_to_eta0(gamma: float) -> float:
    if gamma < 2:
        raise ValueError(f"gamma must be >= 2, got {gamma}")
    return gamma / (2 * (1 + gamma))


def eta0_to_gamma(eta0: float) -> float:
    """Inverse of gamma_to_eta0 on [1/3, 1/2)."""
    if not (1 / 3 - 1e-12 <= eta0 < 1 / 2):
        raise ValueError(f"eta0 must lie in [1/3, 1/2), got {eta0}")
    gamma = 2 * eta0 / (1 - 2 * eta0)
    # Guard against eta0 = 1/3 rounding to gamma just below 2.
    return max(gamma, 2.0) if gamma > 2 - 1e-9 else gamma


@dataclass(frozen=True)
class Ensemble:
    """Four product states with priors; local factors are retained."""

    priors: dict[str, float]
    factors: dict[str, tuple[np.ndarray, np.ndarray]]
    states: dict[str, np.ndarray] = field(init=False)

    def __post_init__(self):
        if set(self.priors) != set(LABELS) or set(self.factors) != set(LABELS):
            raise ValueError(f"labels must be exactly {LABELS}")
        if any(p < -1e-15 for p in self.priors.values()):
            raise ValueError("priors must be nonnegative")
        if abs(sum(self.priors.values()) - 1.0) > 1e-12:
            raise ValueError("priors must sum to 1 within 1e-12")
        states = {}
        for i in LABELS:
            a, b = self.factors[i]
            a, b = ket(a), ket(b)
            if a.size != 2 or b.size != 2:
                raise ValueError("local factors must be single-qubit kets")
            v = kron_vec(a, b)
            n = np.linalg.norm(v)
            if abs(n - 1.0) > 1e-12:
                raise ValueError(f"state {i!r} is not normalized")
            states[i] = v
        phi = np.column_stack([states[i] for i in LABELS])
        if abs(np.linalg.det(phi)) < 1e-12:
            raise ValueError("the four states do not form a basis")
        object.__setattr__(self, "states", states)

    def density(self, label: str) -> np.ndarray:
        """rho_i = |phi_i><phi_i|."""
        return outer(self.states[label])

    def state_matrix(self) -> np.ndarray:
        """4x4 matrix whose columns are the states in label order."""
        return np.column_stack([self.states[i] for i in LABELS])


def make_ensemble(priors, factors) -> Ensemble:
    priors = {i: float(priors[i]) for i in LABELS}
    factors = {i: (ket(factors[i][0]), ket(factors[i][1])) for i in LABELS}
    return Ensemble(priors=priors, factors=factors)


def _example_priors(gamma: float) -> dict[str, float]:
    if gamma < 2:
        raise ValueError(f"gamma must be >= 2, got {gamma}")
    z = 2 * (1 + gamma)
    return {"0": gamma / z, "1": gamma / z, "+": 1 / z, "-": 1 / z}


def make_lock_example(gamma: float) -> Ensemble:
    """States |00>, |01>, |++>, |--> with priors (g, g, 1, 1)/(2(1+g))."""
    return make_ensemble(
        _example_priors(gamma),
        {
            "0": (KET_0, KET_0),
            "1": (KET_0, KET_1),
            "+": (KET_PLUS, KET_PLUS),
            "-": (KET_MINUS, KET_MINUS),
        },
    )


def make_unlock_example(gamma: float) -> Ensemble:
    """States |00>, |01>, |++>, |+-> with priors (g, g, 1, 1)/(2(1+g))."""
    return make_ensemble(
        _example_priors(gamma),
        {
            "0": (KET_0, KET_0),
            "1": (KET_0, KET_1),
            "+": (KET_PLUS, KET_PLUS),
            "-": (KET_PLUS, KET_MINUS),
        },
    )


@dataclass(frozen=True)
class ReciprocalBasis:
    """Dual vectors with <phi_i|phitilde_j> = delta_ij; not necessarily unit."""

    vectors: dict[str, np.ndarray]
    is_product: dict[str, bool]


def reciprocal_basis(e: Ensemble, product_tol: float = 1e-8) -> ReciprocalBasis:
    """The unique dual basis of the ensemble's states.

    Computed by inverting the 4x4 matrix of state columns; column j of the
    inverse's conjugate transpose is the dual vector of state j.
    """
    phi = e.state_matrix()
    dual = np.linalg.inv(phi).conj().T
    vectors = {i: dual[:, k].copy() for k, i in enumerate(LABELS)}
    is_product = {
        i: schmidt_rank_one(vectors[i], tol=product_tol) is not None for i in LABELS
    }
    return ReciprocalBasis(vectors=vectors, is_product=is_product)


@dataclass(frozen=True)
class Subensemble:
    labels: tuple[str, ...]
    priors: dict[str, float]          # normalized within the subensemble
    preparation_probability: float


def split_subensembles(e: Ensemble) -> tuple[Subensemble, Subensemble]:
    """Split into E0 over {0,1} and E1 over {+,-}."""
    out = []
    for part in (A0, A1):
        prep = sum(e.priors[i] for i in part)
        out.append(
            Subensemble(
                labels=part,
                priors={i: e.priors[i] / prep for i in part},
                preparation_probability=prep,
            )
        )
    return out[0], out[1]


def _vec_to_json(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in v]


def _vec_from_json(data) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data])


def ensemble_to_json(e: Ensemble) -> str:
    doc = {
        "labels": list(LABELS),
        "priors": [e.priors[i] for i in LABELS],
        "states": [
            {"a": _vec_to_json(e.factors[i][0]), "b": _vec_to_json(e.factors[i][1])}
            for i in LABELS
        ],
    }
    return json.dumps(doc, indent=2)


def ensemble_from_json(text: str) -> Ensemble:
    doc = json.loads(text)
    if list(doc.get("labels", [])) != list(LABELS):
        raise ValueError(f"labels must be exactly {list(LABELS)}")
    priors = dict(zip(LABELS, doc["priors"]))
    factors = {
        i: (_vec_from_json(s["a"]), _vec_from_json(s["b"]))
        for i, s in zip(LABELS, doc["states"])
    }
    return make_ensemble(priors, factors)
