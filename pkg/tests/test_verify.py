"""Certificate re-checking, tamper detection, involution oracles, surveys."""

import json

import pytest

from invofactor import (
    BudgetExceededError,
    CHECK_NAMES,
    FactorCert,
    VerificationError,
    check_cert,
    core_checks,
    factor,
    field_make,
    group_enumerate,
    hermitian_form,
    oracle_involution_set,
    orthogonal_minus_form,
    orthogonal_plus_form,
    standard_reverser,
    survey,
    symplectic_form,
    verify_certificate,
)
from invofactor.linalg import Mat

F3 = field_make(3)
F5 = field_make(5)
E9 = field_make(3, 1, "quadratic")


def _tamper(cert, attr, new):
    return FactorCert(
        cert.form,
        cert.g,
        new if attr == "beta" else cert.beta,
        new if attr == "h1" else cert.h1,
        new if attr == "h2" else cert.h2,
        cert.det_refined,
        cert.blocks,
    )


def test_fresh_certificate_reports_all_pass():
    sp = symplectic_form(F3, 2)
    g = Mat.from_rows(F3, [[1, 1], [0, 1]])
    cert = factor(sp, g)
    report = verify_certificate(sp, g, cert)
    assert report.passed
    assert [name for name, _, _ in report.checks] == list(CHECK_NAMES[:-1])
    assert all(wit is None for _, _, wit in report.checks)
    assert report.seconds >= 0
    doc = report.serialize()
    assert doc["passed"] is True and "seconds" not in doc
    assert all(set(c) == {"name", "passed"} for c in doc["checks"])
    assert [(n, ok) for n, ok, _ in report.checks] == core_checks(
        sp, g, cert.beta, cert.h1, cert.h2
    )


def test_tampered_h2_fails_by_name():
    sp = symplectic_form(F3, 2)
    g = Mat.from_rows(F3, [[1, 1], [0, 1]])
    cert = factor(sp, g)
    bad = cert.h2 + Mat.from_rows(F3, [[0, 1], [0, 0]])
    report = verify_certificate(sp, g, _tamper(cert, "h2", bad))
    assert not report.passed
    failed = {name for name, wit in report.failures()}
    assert failed <= {"h2_twist1_ratio_beta", "h2_square_is_beta", "h1_h2_product_is_g"}
    assert failed
    # witnesses carry the recomputed offending objects
    name, wit = report.failures()[0]
    assert isinstance(wit, dict) and wit
    json.dumps(report.serialize())  # JSON-ready

    with pytest.raises(VerificationError) as info:
        check_cert(_tamper(cert, "h2", bad))
    assert info.value.check in failed


def test_tampered_h1_and_beta_fail():
    sp = symplectic_form(F3, 2)
    g = Mat.from_rows(F3, [[1, 1], [0, 1]])
    cert = factor(sp, g)
    report = verify_certificate(sp, g, _tamper(cert, "h1", cert.h1 * F3.scalar(2)))
    assert not report.passed
    report = verify_certificate(sp, g, _tamper(cert, "beta", F3.scalar(2)))
    assert {n for n, _ in report.failures()} >= {"g_is_similitude_of_beta"}
    # a zero beta must be reported, not raised
    report = verify_certificate(sp, g, _tamper(cert, "beta", F3.zero))
    assert not report.passed


def test_mismatched_instance_reports_shape_check():
    sp3 = symplectic_form(F3, 2)
    sp5 = symplectic_form(F5, 2)
    cert = factor(sp3, Mat.from_rows(F3, [[1, 1], [0, 1]]))
    report = verify_certificate(sp5, Mat.identity(F5, 2), cert)
    assert not report.passed
    assert report.checks[0][0] == "shapes_match_the_space"
    assert "GF(5)" in report.checks[0][2]["space"]
    assert "GF(3)" in report.checks[0][2]["h1"]


def test_refined_flag_adds_det_check():
    op = orthogonal_plus_form(F3, 2)
    g = Mat.identity(F3, 2)
    plain = factor(op, g)
    report = verify_certificate(op, g, plain, det_refined=True)
    names = [n for n, _, _ in report.checks]
    assert names[-1] == "h1_det_sign"
    refined = factor(op, g, det_refined=True)
    assert verify_certificate(op, g, refined).passed


def test_oracle_involution_set_contents():
    sp = symplectic_form(F3, 2)
    sset = oracle_involution_set(sp)
    assert len(sset) == 12
    eye = Mat.identity(F3, 2)
    for A in sset:
        assert sp.anti_ratio(A) == F3.one
        assert A @ A.conj() == eye
    assert any(A == standard_reverser(sp) for A in sset)

    op = orthogonal_plus_form(F3, 2)
    assert any(A == Mat.from_rows(F3, [[0, 1], [1, 0]]) for A in oracle_involution_set(op))

    hm = hermitian_form(E9, 2)
    assert any(A == Mat.identity(E9, 2) for A in oracle_involution_set(hm))

    with pytest.raises(BudgetExceededError):
        oracle_involution_set(sp, budget=5)


def test_constructed_h1_is_in_the_oracle_set():
    for form in (symplectic_form(F3, 2), orthogonal_minus_form(F3, 2)):
        members = {repr(A.serialize()) for A in oracle_involution_set(form)}
        for g in group_enumerate(form):
            assert repr(factor(form, g).h1.serialize()) in members


def test_survey_exhaustive_summary():
    sp = symplectic_form(F3, 2)
    summary = survey(sp)
    assert summary == {
        "beta": [1],
        "cases": {"cyclic": 22, "cyclic_pair": 2},
        "dets": {"-1": 24},
        "failures": 0,
        "mode": "exhaustive",
        "refined": False,
        "total": 24,
    }


def test_survey_sampled_is_reproducible():
    sp = symplectic_form(F5, 4)
    one = survey(sp, beta=2, sample=15, seed=21)
    two = survey(sp, beta=2, sample=15, seed=21)
    assert one == two
    assert one["total"] == 15 and one["mode"] == {"sample": 15, "seed": 21}
    other = survey(sp, beta=2, sample=15, seed=22)
    assert other["total"] == 15  # different seed may or may not change the histogram


def test_survey_refined_orthogonal():
    om = orthogonal_minus_form(F3, 2)
    summary = survey(om, refined=True)
    assert summary["total"] == 8 and summary["dets"] == {"-1": 8}
    assert summary["refined"] is True
