import math

import pytest

from src.configuration import MockConfigProvider
from src.verify import COMPOSITION_PAIRS, MULTIPLIER_CORPUS, POSITIVITY_DEPTH, PSI_CORPUS, TRACE_PAIRS, CheckResult, SuiteOptions, SuiteReport, Suites, run_suite
from tests.decorators import with_test_config

# pylint: disable=unused-argument


class TestCheckResult:
    """Pass/fail semantics of a single check"""

    def test_threshold(self):
        assert CheckResult("a", 1e-12, 1e-10).passed
        assert not CheckResult("a", 1e-8, 1e-10).passed
        assert CheckResult("exact", 0.0, 0.0).passed

    def test_non_finite_defect_fails(self):
        assert not CheckResult("nan", math.nan, 1.0).passed
        assert not CheckResult("inf", math.inf, math.inf).passed

    def test_to_dict(self):
        record = CheckResult("a", 0.5, 1.0, window=[0, 1], detail={"relative": True}).to_dict()
        assert record == {"name": "a", "defect": 0.5, "threshold": 1.0, "passed": True, "window": [0, 1], "detail": {"relative": True}}

    def test_report_sorts_checks(self):
        report = SuiteReport("s", [CheckResult("b", 0.0, 0.0), CheckResult("a", 1.0, 0.0)])
        assert not report.passed
        assert [c["name"] for c in report.to_dict()["checks"]] == ["a", "b"]


class TestSuiteOptions:
    """Options resolved from configuration"""

    @with_test_config
    def test_from_config(self, test_provider: MockConfigProvider):
        options = SuiteOptions.from_config()
        assert options == SuiteOptions(seed=7, samples=5, truncation=4, trials=20, amplification=2)

    @with_test_config
    def test_overrides(self, test_provider: MockConfigProvider):
        options = SuiteOptions.from_config(seed=11, samples=None)
        assert options.seed == 11
        assert options.samples == 5

    def test_defaults_without_config(self):
        assert SuiteOptions.from_config() == SuiteOptions()


class TestSuites:
    """Registered invariant suites"""

    def test_registered(self):
        assert Suites.keys() == ["amalgam", "coxeter", "finvn", "fock", "multiplier", "radial", "wick"]

    def test_corpora(self):
        assert len(PSI_CORPUS) == 10
        assert "alternating_1" in MULTIPLIER_CORPUS

    def test_sampling_depths(self):
        """Suites sample at least these depths whatever the configured truncation"""
        assert POSITIVITY_DEPTH >= 5
        assert COMPOSITION_PAIRS >= 50
        assert TRACE_PAIRS >= 100

    def test_unknown_suite(self):
        with pytest.raises(KeyError, match="verification suite"):
            run_suite("nothing", SuiteOptions())

    @pytest.mark.parametrize("name", ["coxeter", "finvn", "radial"])
    def test_suite_passes(self, name):
        reports = run_suite(name, SuiteOptions(seed=3, samples=3))
        assert len(reports) == 1
        failed = [c.name for c in reports[0].checks if not c.passed]
        assert not failed
        assert reports[0].suite == name
