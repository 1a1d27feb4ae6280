import math

from adsmodes import verify as V


def test_checker_statuses():
    ck = V.Checker(scale=0.5)
    assert ck.upper("a", 0.4, 1.0).status == "pass"
    assert ck.upper("b", 0.6, 1.0).status == "fail"
    assert ck.lower("c", 2.0, 1.0).status == "pass"
    assert ck.upper("d", math.inf, 1.0).residual < math.inf
    assert ck.record("e", -1.0).status == "warn"


def test_report_sorted_and_summarized():
    cases = [V.Case("z", "pass", 0.0, 1.0), V.Case("a", "fail", 2.0, 1.0), V.Case("m", "warn", 0.0, 0.0)]
    rep = V.VerificationReport("specfun", cases, [])
    d = rep.to_dict()
    assert [c["name"] for c in d["cases"]] == ["a", "m", "z"]
    assert d["summary"] == {"total": 3, "passed": 1, "failed": 1, "warnings": 1, "ok": False}
    assert not rep.passed


def test_errata_table_keys():
    keys = {e["key"] for e in V.errata_table()}
    assert {"singleton_limit_prefactor", "log_solution_digamma", "two_d_neumann_neumann_normalization",
            "quartic_block"} <= keys


def test_errata_evidence_is_populated():
    for e in V.build_errata():
        assert e.evidence, e.key


def test_every_suite_passes_at_default_tolerance():
    for name in V.SUITES:
        bad = [c for c in V.run_suite(name) if c.status == "fail"]
        assert not bad, bad
