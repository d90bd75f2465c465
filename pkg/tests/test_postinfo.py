import numpy as np
import pytest

from nlwe import linalg, postinfo
from nlwe.ensembles import (
    LABELS,
    make_lock_example,
    make_unlock_example,
)
from nlwe.linalg import kron_vec, outer
from nlwe.locc import compile_protocol, lock_pi_protocol
from nlwe.oracles import bloch_search_obstruction, random_product_ensemble


def test_omega_layout():
    assert len(postinfo.OMEGA) == 9
    assert postinfo.CONCLUSIVE_PAIRS == (("0", "+"), ("0", "-"), ("1", "+"), ("1", "-"))


def test_forbidden_states():
    assert set(postinfo.forbidden_states(("0", "+"))) == {"1", "-"}
    assert set(postinfo.forbidden_states(("0", "?"))) == {"1"}
    assert set(postinfo.forbidden_states(("?", "-"))) == {"+"}
    assert postinfo.forbidden_states(("?", "?")) == ()


def test_tilde_ensemble_frozen_point(lock2):
    # At gamma=2 the (0,+) pair has weight 1/4 and density (2 rho_0 + rho_+)/3.
    pairs = {p.omega: p for p in postinfo.tilde_ensemble(lock2)}
    p = pairs[("0", "+")]
    assert p.weight == pytest.approx(0.25, abs=1e-15)
    expected = (2 * lock2.density("0") + lock2.density("+")) / 3
    assert np.allclose(p.density, expected, atol=1e-15)


def test_lock_product_pi_measurement_is_perfect(lock2):
    effects = compile_protocol(lock_pi_protocol())
    povm = postinfo.PiPovm(
        effects={
            omega: effects.get(omega, np.zeros((4, 4), dtype=complex))
            for omega in postinfo.OMEGA
        }
    )
    verdict = postinfo.verify_pi_unambiguous(povm, lock2, tol=1e-12)
    assert verdict.accepted
    assert postinfo.pi_success_probability(povm, lock2) == pytest.approx(1.0, abs=1e-12)


def test_verify_pi_rejects_error(lock2):
    # Putting all weight on a single conclusive pair misannounces the others.
    effects = {omega: np.zeros((4, 4), dtype=complex) for omega in postinfo.OMEGA}
    effects[("0", "+")] = np.eye(4, dtype=complex)
    verdict = postinfo.verify_pi_unambiguous(postinfo.PiPovm(effects=effects), lock2)
    assert not verdict.accepted


def test_solve_oud_pi_examples():
    for gamma in (2.0, 5.0):
        for maker in (make_lock_example, make_unlock_example):
            _, value = postinfo.solve_oud_pi(maker(gamma))
            assert value == pytest.approx(1.0, abs=1e-5)


def test_solve_oud_pi_orthonormal(orthonormal_ensemble):
    _, value = postinfo.solve_oud_pi(orthonormal_ensemble)
    assert value == pytest.approx(1.0, abs=1e-5)


def test_obstruction_unlock_all_empty(unlock2):
    for pair in postinfo.CONCLUSIVE_PAIRS:
        assert postinfo.product_vector_obstruction(unlock2, pair) is None


def test_obstruction_lock_has_witness(lock2):
    v = postinfo.product_vector_obstruction(lock2, ("0", "+"))
    assert v is not None
    # Witness must be orthogonal to the excluded states and see the pair.
    for j in ("1", "-"):
        assert abs(np.vdot(lock2.states[j], v)) < 1e-10
    for w in ("0", "+"):
        assert abs(np.vdot(lock2.states[w], v)) > 1e-10
    assert linalg.schmidt_rank_one(v) is not None


def test_obstruction_matches_bloch_oracle(lock2, unlock2, rng):
    ensembles = [lock2, unlock2] + [random_product_ensemble(rng) for _ in range(10)]
    for e in ensembles:
        for pair in postinfo.CONCLUSIVE_PAIRS:
            exact = postinfo.product_vector_obstruction(e, pair) is not None
            assert exact == bloch_search_obstruction(e, pair)


def test_lemma2_applies_only_without_witnesses(lock2, unlock2):
    assert postinfo.lemma2_upper_bound(lock2) is None
    bound = postinfo.lemma2_upper_bound(unlock2)
    assert bound == pytest.approx(0.5 * (1 + np.sqrt(5) / 3), abs=1e-6)


def test_solve_me_closed_form(unlock2):
    _, value = postinfo.solve_me(unlock2)
    assert value == pytest.approx(0.8726779962, abs=1e-6)


def test_me_certificate(unlock2):
    effects, value = postinfo.solve_me(unlock2)
    cert = postinfo.me_certificate_from_solution(unlock2, effects)
    verdict = postinfo.verify_me_certificate(cert, unlock2, solver_value=value)
    assert verdict.accepted
    assert verdict.p_guess == pytest.approx(value, abs=1e-9)


def test_me_certificate_rejects_identity(unlock2):
    # K = identity dominates trivially but Tr K = 4 is not tight.
    _, value = postinfo.solve_me(unlock2)
    verdict = postinfo.verify_me_certificate(
        postinfo.MeCertificate(K=np.eye(4, dtype=complex)),
        unlock2,
        solver_value=value,
    )
    assert not verdict.accepted
    assert verdict.p_guess == pytest.approx(4.0)


def test_me_orthonormal(orthonormal_ensemble):
    _, value = postinfo.solve_me(orthonormal_ensemble)
    assert value == pytest.approx(1.0, abs=1e-9)


def test_helstrom_agreement(lock2, rng):
    for e in (lock2, random_product_ensemble(rng)):
        for a, b in (("0", "1"), ("0", "+"), ("+", "-")):
            _, value = postinfo.solve_me(e, labels=(a, b))
            closed = postinfo.helstrom_two_state(
                e.priors[a], e.density(a), e.priors[b], e.density(b)
            )
            assert value == pytest.approx(closed, abs=1e-8)
