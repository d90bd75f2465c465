import numpy as np
import pytest

from nlwe import locc, oud, report
from nlwe.ensembles import KET_0, KET_1, make_lock_example, make_unlock_example


def test_gap_flag_logic():
    assert report._gap_flag(report.Interval(0.1, 0.1), 0.3) == report.YES
    assert report._gap_flag(report.Interval(0.3, 0.3), 0.3) == report.NO
    assert report._gap_flag(report.Interval(0.1, 0.3), 0.3) == report.UNDETERMINED


def test_classify_table():
    assert report.classify("yes", "no") == "LockedByPI"
    assert report.classify("no", "yes") == "UnlockedByPI"
    assert report.classify("no", "no") == "NoEffect"
    assert report.classify("yes", "yes") == "NoEffect"
    assert report.classify("undetermined", "no") == "Undetermined"


def test_interval_rejects_crossed():
    with pytest.raises(AssertionError):
        report.Interval(0.5, 0.2)


def _full_report(name, gamma):
    maker = make_lock_example if name == "lock" else make_unlock_example
    return report.analyze(
        maker(gamma),
        locc.builtin_protocols(name, gamma),
        [oud.closed_form_certificate(name, gamma)]
        + locc.builtin_bound_certificates(name, gamma),
    )


def test_lock_report():
    r = _full_report("lock", 2.0)
    assert r.classification == "LockedByPI"
    assert r.p_G == pytest.approx(1 / 3, abs=1e-6)
    assert r.p_L.lower == pytest.approx(1 / 6, abs=1e-12)
    assert r.p_L.upper == pytest.approx(1 / 6, abs=1e-12)
    assert r.p_G_PI == pytest.approx(1.0, abs=1e-5)
    assert r.p_L_PI.lower == pytest.approx(1.0, abs=1e-12)
    assert r.diagnostics["oud_certificate_accepted"]
    assert not r.diagnostics["lemma2_applies"]


def test_unlock_report():
    r = _full_report("unlock", 2.0)
    assert r.classification == "UnlockedByPI"
    assert r.p_G == pytest.approx(1 / 3, abs=1e-6)
    assert r.p_L.lower == pytest.approx(1 / 3, abs=1e-12)
    closed = 0.5 * (1 + np.sqrt(5) / 3)
    assert r.p_L_PI.lower == pytest.approx(closed, abs=1e-12)
    assert r.p_L_PI.upper == pytest.approx(closed, abs=1e-6)
    assert r.p_guess == pytest.approx(closed, abs=1e-6)
    assert r.diagnostics["lemma2_applies"]
    assert r.diagnostics["me_certificate_accepted"]


def test_orthonormal_no_effect(orthonormal_ensemble):
    # Perfectly distinguishable locally: every value is 1, no gap anywhere.
    mb = locc._projective(KET_0, KET_1, "B")
    plain = locc.LoccProtocol(
        round1=locc._projective(KET_0, KET_1, "A"),
        round2={0: mb, 1: mb},
        labels={(0, 0): "0", (0, 1): "1", (1, 0): "+", (1, 1): "-"},
    )
    pi = locc.LoccProtocol(
        round1=locc._projective(KET_0, KET_1, "A"),
        round2={0: mb, 1: mb},
        labels={
            (0, 0): ("0", "+"),
            (0, 1): ("1", "-"),
            (1, 0): ("0", "+"),
            (1, 1): ("1", "-"),
        },
    )
    r = report.analyze(orthonormal_ensemble, [plain, pi])
    assert r.classification == "NoEffect"
    assert r.p_G == pytest.approx(1.0, abs=1e-6)
    assert r.p_L.lower == pytest.approx(1.0, abs=1e-12)
    assert r.p_G_PI == pytest.approx(1.0, abs=1e-5)
    assert r.p_L_PI.lower == pytest.approx(1.0, abs=1e-12)
    assert r.p_guess == pytest.approx(1.0, abs=1e-6)


def test_inapplicable_protocols_are_skipped(orthonormal_ensemble):
    # A protocol that is ambiguous for the ensemble is skipped, not fatal.
    r = report.analyze(
        orthonormal_ensemble, [locc.lock_locc_protocol()], compute_p_guess=False
    )
    assert r.diagnostics["skipped_protocols"] == 1
    assert r.p_L.lower == 0.0


def test_report_to_dict_round_trip():
    d = report.report_to_dict(_full_report("lock", 2.5))
    assert d["classification"] == "LockedByPI"
    assert set(d) >= {"p_G", "p_L", "p_G_PI", "p_L_PI", "p_guess"}
    import json

    json.dumps(d)  # must be serializable
