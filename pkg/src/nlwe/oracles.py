"""Independent oracles used to audit the solvers.

These deliberately avoid the code paths they check: the unambiguous
discrimination oracle is a refined exhaustive grid search over the four
POVM coefficients, and the product-witness oracle sweeps a dense Bloch
grid on the first party and solves the second party exactly per grid
point.  Both are used by the verification suite and the tests only.
"""

from __future__ import annotations

import numpy as np

from .ensembles import Ensemble, LABELS, make_ensemble, reciprocal_basis
from .linalg import IDENTITY_4, outer
from .postinfo import CONCLUSIVE_PAIRS


def random_product_ensemble(rng: np.random.Generator) -> Ensemble:
    """Random four-state product-basis ensemble with random priors."""
    while True:
        factors = {}
        for i in LABELS:
            a = rng.normal(size=2) + 1j * rng.normal(size=2)
            b = rng.normal(size=2) + 1j * rng.normal(size=2)
            factors[i] = (a / np.linalg.norm(a), b / np.linalg.norm(b))
        pri = rng.dirichlet(np.ones(4))
        pri = pri / pri.sum()
        try:
            return make_ensemble(dict(zip(LABELS, pri)), factors)
        except ValueError:
            continue  # rejected: states happened not to form a basis


def grid_search_oud(e: Ensemble, final_step: float = 1e-5) -> float:
    """Best unambiguous success probability by refined grid search.

    The feasible coefficient set is star-shaped from the origin, so the
    optimum can be written as a search over directions u >= 0 with the
    radial extent handled exactly: the largest feasible multiple of u is
    1 / lambda_max(sum_i u_i |phitilde_i><phitilde_i|).  The resulting
    objective (eta . u) / lambda_max is quasi-concave on the sphere patch
    (its superlevel sets are convex cones), so refining an angular grid
    around the best point converges to the global optimum.  `final_step`
    is the final angular resolution in radians.
    """
    rb = reciprocal_basis(e)
    eta = np.array([e.priors[i] for i in LABELS])
    proj = np.stack([outer(rb.vectors[i]) for i in LABELS])

    def evaluate(angles: np.ndarray) -> np.ndarray:
        t1, t2, t3 = angles[:, 0], angles[:, 1], angles[:, 2]
        u = np.stack(
            [
                np.cos(t1),
                np.sin(t1) * np.cos(t2),
                np.sin(t1) * np.sin(t2) * np.cos(t3),
                np.sin(t1) * np.sin(t2) * np.sin(t3),
            ],
            axis=-1,
        )
        a = np.einsum("ki,iab->kab", u, proj)
        lam = np.linalg.eigvalsh(a)[:, -1]
        return (u @ eta) / np.maximum(lam, 1e-300)

    points_per_axis = 17
    centers = np.full(3, np.pi / 4)
    half = np.full(3, np.pi / 4)
    best_val = 0.0
    best_angles = centers.copy()

    def sweep(centers, half):
        axes = [
            np.clip(
                np.linspace(centers[k] - half[k], centers[k] + half[k], points_per_axis),
                0.0,
                np.pi / 2,
            )
            for k in range(3)
        ]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
        values = evaluate(grid)
        k = int(np.argmax(values))
        return float(values[k]), grid[k]

    for _ in range(100):
        for _ in range(100):
            val, angles = sweep(centers, half)
            if val > best_val + 1e-15:
                best_val, best_angles = val, angles
                centers = best_angles
            else:
                break
        spacing = 2 * half / (points_per_axis - 1)
        if np.all(spacing <= final_step):
            return best_val
        centers = best_angles
        half = spacing  # next grid spans one old cell around the best point
    return best_val


_BLOCH_CACHE: dict[int, np.ndarray] = {}


def _bloch_grid(n: int) -> np.ndarray:
    """(n*n, 2) array of single-qubit kets covering the Bloch sphere."""
    cached = _BLOCH_CACHE.get(n)
    if cached is not None:
        return cached
    theta = np.linspace(0.0, np.pi, n)
    phi = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    grid = np.stack(
        [np.cos(tt / 2) * np.ones_like(pp), np.exp(1j * pp) * np.sin(tt / 2)],
        axis=-1,
    ).reshape(-1, 2)
    _BLOCH_CACHE[n] = grid
    return grid


def _perp(u: np.ndarray) -> np.ndarray:
    return np.array([-u[1].conj(), u[0].conj()])


_GENERIC_B = (
    np.array([1, 0], dtype=complex),
    np.array([0, 1], dtype=complex),
    np.array([1, 1], dtype=complex) / np.sqrt(2),
    np.array([1, 1j], dtype=complex) / np.sqrt(2),
)


def bloch_search_obstruction(
    e: Ensemble, pair, n: int = 400, tol: float = 1e-6
) -> bool:
    """True iff a product witness exists for the pair, by dense search.

    Sweeps first-party vectors |a> over an n x n Bloch grid (plus the two
    exactly-orthogonal critical directions); for each |a>, the second-party
    constraints are linear and are solved exactly rather than gridded,
    since a witness set has measure zero on any product grid.
    """
    pair = tuple(pair)
    excluded = [j for j in LABELS if j not in pair]
    j1, j2 = excluded
    c = {j: e.factors[j][0] / np.linalg.norm(e.factors[j][0]) for j in LABELS}
    d = {j: e.factors[j][1] / np.linalg.norm(e.factors[j][1]) for j in LABELS}

    base = _bloch_grid(n)
    criticals = np.vstack([_perp(c[j1])[None, :], _perp(c[j2])[None, :]])
    cols = np.column_stack([c[j] for j in LABELS])
    overlaps = np.abs(
        np.vstack([base @ cols.conj(), criticals @ cols.conj()])
    )
    ov = {j: overlaps[:, k] for k, j in enumerate(LABELS)}

    def witness_with_b(a_mask: np.ndarray, b: np.ndarray) -> bool:
        bn = b / np.linalg.norm(b)
        # b must still kill any excluded state it is responsible for.
        for j in excluded:
            bad = (ov[j] > tol) & (abs(np.vdot(d[j], bn)) > tol)
            a_mask = a_mask & ~bad
        for w in pair:
            a_mask = a_mask & (ov[w] * abs(np.vdot(d[w], bn)) > tol)
        return bool(a_mask.any())

    everything = np.ones(overlaps.shape[0], dtype=bool)
    candidates = [_perp(d[j1]), _perp(d[j2])] + list(_GENERIC_B)
    return any(witness_with_b(everything, b) for b in candidates)
