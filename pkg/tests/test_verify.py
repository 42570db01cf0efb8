import json
from fractions import Fraction

import jsonschema
import mpmath
import pytest

from halfint4 import lfunction, verify
from halfint4.forms import DomainError


@pytest.fixture(scope="module")
def small_report():
    return verify.full_report(k_max=3, bits=128, prec=300, timings=False)


def test_small_report_validates(small_report):
    jsonschema.validate(small_report, verify.REPORT_SCHEMA)
    assert small_report["summary"]["fail"] == 0
    assert small_report["parameters"] == {"k_max": 3, "bits": 128, "prec": 300}


def test_theorems_skipped_for_trivial_spaces(small_report):
    skipped = [c for c in small_report["checks"] if c["status"] == "skipped"]
    assert {c["check_id"] for c in skipped} == {"theorem-i", "theorem-ii"}
    assert all("spaces trivial" in c["detail"] for c in skipped)


def test_report_is_deterministic_without_timings(small_report):
    again = verify.full_report(k_max=3, bits=128, prec=300, timings=False)
    assert json.dumps(again) == json.dumps(small_report)


def test_every_check_carries_a_known_anchor(small_report):
    assert all(c["paper_anchor"] in verify.ANCHORS for c in small_report["checks"])
    with pytest.raises(ValueError):
        verify.CheckResult("x", "pass", "no-such-anchor")
    with pytest.raises(ValueError):
        verify.CheckResult("x", "maybe", "functional-equation")


def test_identity_suite_covers_the_required_checks(small_report):
    ids = [c["check_id"] for c in small_report["checks"]]
    for prefix in ("transformation/f2/", "transformation/delta4/", "transformation/d2/",
                   "transformation/theta/", "special-value/theta4-minus-32f2", "special-value/d2-at-i/2",
                   "delta4/q-product/", "positivity/delta4/", "positivity/d2/", "w4/involution",
                   "dimension/k=30", "isomorphism/theta-delta4/"):
        assert any(i.startswith(prefix) for i in ids), prefix


def test_transformation_laws_tight():
    r = verify.transformation_residuals("1.0", prec=300, bits=128)
    assert max(r.values()) < 1e-25


def test_wrong_sign_of_f2_law_is_detected():
    # the law with the opposite sign convention, evaluated with real factors, fails
    from halfint4.forms import F2, THETA
    with mpmath.workprec(152):
        t = mpmath.mpf("0.6")
        ev = lambda e, at: verify._value(e, 2, at, 300, 128).value
        lhs = (2 * t) ** -2 * ev(F2, 1 / (4 * t))
        wrong = ev(F2, t) - ev(THETA ** 4, t) / 16
        right = ev(THETA ** 4, t) / 16 - ev(F2, t)
        assert abs(lhs - right) < 1e-25 and abs(lhs - wrong) > 1e-3


def test_hecke_suite_small_weight():
    rs = verify.verify_hecke(6)
    assert rs and all(r.passed for r in rs)


def test_theorem_domains():
    with pytest.raises(DomainError):
        verify.verify_theorem_i(3)
    with pytest.raises(DomainError):
        verify.verify_theorem_ii(5)


def test_theorem_ii_marks_forced_zero():
    grid = [Fraction(3), Fraction(13, 4), Fraction(7, 2)]
    rs = verify.verify_theorem_ii(6, grid)
    assert [r.passed for r in rs] == [True, True, True]
    assert rs[1].paper_anchor == "central-zero-minus-forms" and rs[1].detail == "forced zero"


def test_theorem_i_reports_witness():
    rs = verify.verify_theorem_i(5, [Fraction(-2), Fraction(1, 2)])
    assert all(r.passed and "witness f0" in r.detail for r in rs)


def test_no_pass_inside_error_budget(monkeypatch):
    real = lfunction.lstar_eigen

    def shrunk(f, weight, sign, s, bits=128, target=None, _n_terms=None):
        lv = real(f, weight, sign, s, bits, target, _n_terms)
        # value shrunk below its own error budget
        return lfunction.LValue(lv.s, lv.error_budget / 2, lv.tail_bound, lv.method_error,
                                lv.terms_used, lv.method, lv.form_id, lv.bits, lv.scale)

    monkeypatch.setattr(verify, "lstar_eigen", shrunk)
    rs = verify.verify_theorem_i(4, [Fraction(1)])
    assert [r.status for r in rs] == ["fail"]


def test_dual_method_check_flags_disagreement(monkeypatch):
    from halfint4.forms import DELTA4, THETA, Weight, w4
    e = THETA * DELTA4
    f, g = e.series(200), w4(e).series(200)
    assert verify.dual_method_check(f, g, Weight(9), Fraction(1), 128, "f1").passed
    real = lfunction.lstar_quadrature

    def off(*args, **kw):
        lv = real(*args, **kw)
        return lfunction.LValue(lv.s, lv.value * (1 + mpmath.mpf(10) ** -12), lv.tail_bound,
                                lv.method_error, lv.terms_used, lv.method, lv.form_id, lv.bits, lv.scale)

    monkeypatch.setattr(verify, "lstar_quadrature", off)
    assert not verify.dual_method_check(f, g, Weight(9), Fraction(1), 128, "f1").passed


def test_fmt_number():
    assert verify.fmt_number(Fraction(3, 4), 128) == "3/4"
    assert verify.fmt_number(Fraction(5), 128) == "5"
    with mpmath.workprec(128):
        assert len(verify.fmt_number(mpmath.pi, 128).replace(".", "")) == 38
