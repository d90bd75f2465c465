import numpy as np
import pytest

from nlwe import locc
from nlwe.ensembles import (
    KET_0,
    KET_1,
    KET_MINUS,
    KET_PLUS,
    make_lock_example,
    make_unlock_example,
)
from nlwe.linalg import IDENTITY_2, kron, outer


def test_local_measurement_validation():
    with pytest.raises(ValueError):
        locc.LocalMeasurement(party="A", effects=(outer(KET_0),))  # incomplete
    with pytest.raises(ValueError):
        locc.LocalMeasurement(party="C", effects=(outer(KET_0), outer(KET_1)))


def test_protocol_mode_detection():
    assert locc.lock_locc_protocol().mode == "plain"
    assert locc.lock_pi_protocol().mode == "pi"
    assert locc.unlock_pi_protocol(2.0).mode == "pi"


def test_compile_lock_protocol():
    compiled = locc.compile_protocol(locc.lock_locc_protocol())
    assert np.allclose(compiled["+"], kron(outer(KET_1), outer(KET_PLUS)), atol=1e-14)
    assert np.allclose(compiled["-"], kron(outer(KET_1), outer(KET_MINUS)), atol=1e-14)
    assert np.allclose(compiled["?"], kron(outer(KET_0), IDENTITY_2), atol=1e-14)


def test_compiled_effects_separable():
    for p in (
        locc.lock_locc_protocol(),
        locc.unlock_locc_protocol(),
        locc.lock_pi_protocol(),
        locc.unlock_pi_protocol(3.0),
    ):
        for effect in locc.compile_protocol(p).values():
            assert locc.is_separable_effect(effect, tol=1e-10)


def test_lock_protocol_value():
    for gamma in (2.0, 5.0, 100.0):
        e = make_lock_example(gamma)
        value = locc.locc_success(locc.lock_locc_protocol(), e, "plain")
        assert value == pytest.approx(1 / (2 * (1 + gamma)), abs=1e-12)


def test_unlock_protocol_value():
    for gamma in (2.0, 5.0, 100.0):
        e = make_unlock_example(gamma)
        value = locc.locc_success(locc.unlock_locc_protocol(), e, "plain")
        assert value == pytest.approx(gamma / (2 * (1 + gamma)), abs=1e-12)


def test_lock_pi_protocol_perfect(lock2):
    assert locc.locc_success(locc.lock_pi_protocol(), lock2, "pi") == pytest.approx(
        1.0, abs=1e-12
    )


def test_unlock_pi_protocol_closed_form():
    for gamma in (2.0, 3.0, 10.0):
        e = make_unlock_example(gamma)
        value = locc.locc_success(locc.unlock_pi_protocol(gamma), e, "pi")
        closed = 0.5 * (1 + np.sqrt(1 + gamma**2) / (1 + gamma))
        assert value == pytest.approx(closed, abs=1e-12)


def test_nu_vectors_limit():
    # As gamma grows, nu_minus approaches |0> (the first-party state of
    # every high-prior state), so the protocol almost always announces 0/1.
    nu_plus, nu_minus = locc.nu_vectors(1e6)
    assert abs(np.vdot(KET_0, nu_minus)) ** 2 == pytest.approx(1.0, abs=1e-3)
    assert abs(np.vdot(nu_plus, nu_minus)) < 1e-12


def test_mode_mismatch_raises(lock2):
    with pytest.raises(ValueError):
        locc.locc_success(locc.lock_pi_protocol(), lock2, "plain")
    with pytest.raises(ValueError):
        locc.locc_success(locc.lock_locc_protocol(), lock2, "pi")


def test_ambiguous_protocol_rejected(orthonormal_ensemble):
    # M_+ = |1><1| (x) |+><+| overlaps the state |11>, so the lock-family
    # protocol misidentifies it and must be rejected as ambiguous.
    with pytest.raises(ValueError):
        locc.locc_success(locc.lock_locc_protocol(), orthonormal_ensemble, "plain")


def test_lemma1_bound_lock():
    for gamma in (2.0, 10.0):
        e = make_lock_example(gamma)
        bound = locc.lemma1_upper_bound(locc.lock_upper_certificate(gamma), e)
        assert bound == pytest.approx(1 / (2 * (1 + gamma)), abs=1e-12)


def test_lemma1_identity_and_zero(lock2):
    # Identity always satisfies the premise but gives the trivial bound 4.
    loose = locc.lemma1_upper_bound(
        locc.BoundCertificateH(H=np.eye(4, dtype=complex)), lock2
    )
    assert loose == pytest.approx(4.0)
    # The zero operator fails the quadratic-form premise.
    assert (
        locc.lemma1_upper_bound(
            locc.BoundCertificateH(H=np.zeros((4, 4), dtype=complex)), lock2
        )
        is None
    )


def test_is_separable_effect_detects_entanglement():
    from nlwe.ensembles import BELL_PHI_MINUS

    assert not locc.is_separable_effect(outer(BELL_PHI_MINUS), tol=1e-10)
    assert locc.is_separable_effect(kron(outer(KET_0), IDENTITY_2), tol=1e-10)


def test_orthonormal_plain_protocol(orthonormal_ensemble):
    # Fully conclusive local protocol: measure both parties in the
    # computational basis and read the label off the outcome pair.
    mb = locc._projective(KET_0, KET_1, "B")
    p = locc.LoccProtocol(
        round1=locc._projective(KET_0, KET_1, "A"),
        round2={0: mb, 1: mb},
        labels={(0, 0): "0", (0, 1): "1", (1, 0): "+", (1, 1): "-"},
    )
    assert locc.locc_success(p, orthonormal_ensemble, "plain") == pytest.approx(
        1.0, abs=1e-12
    )


def test_orthonormal_pi_protocol(orthonormal_ensemble):
    mb = locc._projective(KET_0, KET_1, "B")
    p = locc.LoccProtocol(
        round1=locc._projective(KET_0, KET_1, "A"),
        round2={0: mb, 1: mb},
        labels={
            (0, 0): ("0", "+"),
            (0, 1): ("1", "-"),
            (1, 0): ("0", "+"),
            (1, 1): ("1", "-"),
        },
    )
    assert locc.locc_success(p, orthonormal_ensemble, "pi") == pytest.approx(
        1.0, abs=1e-12
    )
