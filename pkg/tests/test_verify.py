"""Verification-suite plumbing with reduced workloads (the acceptance tests
run the full-size configurations)."""

import pytest
from mpmath import mp

from p2airy.errors import UsageError
from p2airy.precision import PrecCtx
from p2airy.verify import (
    DEFAULT_SUITES,
    SUITES,
    CheckResult,
    run_suites,
    suite_bridges,
    suite_negative_control,
    suite_route_agreement,
    suite_scaling,
    suite_strings,
)


def test_suite_registry():
    assert set(DEFAULT_SUITES) <= set(SUITES)
    for heavy in ("scaling", "pole-zero", "monotonicity"):
        assert heavy in SUITES and heavy not in DEFAULT_SUITES


def test_run_suites_selection_errors():
    with pytest.raises(UsageError):
        run_suites(["no-such-suite"])
    with pytest.raises(UsageError):
        run_suites([])


def test_route_agreement_reduced():
    checks = suite_route_agreement(PrecCtx(30), n_max=3, samples=3)
    assert len(checks) == 5  # one per lambda class
    for c in checks:
        assert isinstance(c, CheckResult)
        assert c.suite == "route-agreement"
        assert c.passed and c.residual <= c.tolerance
        assert c.tolerance == mp.mpf(10) ** -15


def test_bridges_reduced():
    checks = suite_bridges(PrecCtx(30), n_max=2)
    assert all(c.passed for c in checks)
    names = {c.name for c in checks}
    # residual checks per lambda plus the pinned spot values
    assert {"q1(0;0)", "p1(0;0)", "sigma1(0;0)", "q2(0;0)"} <= names


def test_strings_reduced():
    checks = suite_strings(PrecCtx(30), n_max=3)
    assert checks and all(c.passed for c in checks)


def test_scaling_reduced():
    checks = suite_scaling(ts=("0", "1"), ns=(12, 24))
    assert checks and all(c.passed for c in checks), [
        (c.name, c.detail) for c in checks if not c.passed
    ]
    assert any("t=0 rescaled data near targets" in c.name for c in checks)


def test_negative_control_fails_route_agreement():
    checks = suite_negative_control(PrecCtx(30))
    assert checks and all(c.passed for c in checks)
    # the control passes exactly when the variant chain disagrees by > 1e-6
    for c in checks:
        assert c.residual > mp.mpf("1e-6")


def test_run_suites_collects():
    checks = run_suites(["strings", "negative-control"], PrecCtx(30))
    suites = {c.suite for c in checks}
    assert suites == {"strings", "negative-control"}
    assert all(c.passed for c in checks)
