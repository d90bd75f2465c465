import numpy as np
import pytest

from nlwe import linalg, oud
from nlwe.ensembles import (
    LABELS,
    make_lock_example,
    make_unlock_example,
    reciprocal_basis,
)
from nlwe.oracles import grid_search_oud, random_product_ensemble


def closed_form(gamma):
    return gamma / (2 * (1 + gamma))


def test_compile_povm_rejects_negative(lock2):
    rb = reciprocal_basis(lock2)
    with pytest.raises(ValueError):
        oud.compile_povm({"0": -0.1, "1": 0, "+": 0, "-": 0}, rb)


def test_compile_povm_rejects_infeasible(lock2):
    rb = reciprocal_basis(lock2)
    with pytest.raises(ValueError):
        oud.compile_povm({i: 1.0 for i in LABELS}, rb)


def test_povm_completeness_and_error_free(lock2):
    povm = oud.closed_form_optimal_povm("lock", 2.0)
    total = sum(povm.effects().values())
    assert np.allclose(total, np.eye(4), atol=1e-12)
    assert oud.error_free_residual(povm, lock2) < 1e-12


def test_closed_form_povm_value():
    for gamma in (2.0, 3.0, 10.0):
        for name, maker in (("lock", make_lock_example), ("unlock", make_unlock_example)):
            povm = oud.closed_form_optimal_povm(name, gamma)
            value = oud.success_probability(povm, maker(gamma))
            assert value == pytest.approx(closed_form(gamma), abs=1e-12)


def test_solve_oud_examples():
    for gamma in (2.0, 5.0, 100.0):
        for maker in (make_lock_example, make_unlock_example):
            _, value = oud.solve_oud(maker(gamma))
            assert value == pytest.approx(closed_form(gamma), abs=1e-6)


def test_solve_oud_orthonormal(orthonormal_ensemble):
    povm, value = oud.solve_oud(orthonormal_ensemble)
    assert value == pytest.approx(1.0, abs=1e-6)
    assert oud.error_free_residual(povm, orthonormal_ensemble) < 1e-8


def test_certificates_accept(lock2, unlock2):
    for name, e in (("lock", lock2), ("unlock", unlock2)):
        povm, _ = oud.solve_oud(e)
        verdict = oud.verify_certificate(
            oud.closed_form_certificate(name, 2.0), povm, e, tol=1e-6
        )
        assert verdict.accepted
        assert verdict.p_G == pytest.approx(1 / 3, abs=1e-12)


def test_certificate_rejects_wrong_scale(lock2):
    povm, _ = oud.solve_oud(lock2)
    bad = oud.OudCertificate(K=2 * oud.closed_form_certificate("lock", 2.0).K)
    assert not oud.verify_certificate(bad, povm, lock2, tol=1e-6).accepted


def test_certificate_rejects_identity(lock2):
    # Identity is dual-feasible but fails slackness: guards against loose K.
    povm, _ = oud.solve_oud(lock2)
    verdict = oud.verify_certificate(
        oud.OudCertificate(K=np.eye(4, dtype=complex)), povm, lock2, tol=1e-6
    )
    assert not verdict.accepted


def test_dual_solver_certificate(lock2, rng):
    for e in (lock2, random_product_ensemble(rng)):
        povm, value = oud.solve_oud(e)
        cert = oud.solve_oud_dual(e)
        verdict = oud.verify_certificate(cert, povm, e, tol=1e-6)
        assert verdict.accepted
        assert verdict.p_G == pytest.approx(value, abs=1e-6)


def test_solver_matches_grid_oracle(rng):
    for _ in range(5):
        e = random_product_ensemble(rng)
        _, value = oud.solve_oud(e)
        assert value == pytest.approx(grid_search_oud(e), abs=2e-3)


def test_success_probability_rejects_foreign_basis(lock2, unlock2):
    povm, _ = oud.solve_oud(lock2)
    with pytest.raises(ValueError):
        oud.success_probability(povm, unlock2)


def test_pg_monotone_in_eta0():
    from nlwe.ensembles import eta0_to_gamma

    values = []
    for eta0 in np.linspace(0.34, 0.48, 6):
        _, v = oud.solve_oud(make_lock_example(eta0_to_gamma(float(eta0))))
        values.append(v)
    assert all(b > a for a, b in zip(values, values[1:]))
