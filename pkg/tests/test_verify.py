"""Best-response verifier built on the balance-equation oracle."""

import json

import pytest

from clearbalk import (
    AlwaysBalk,
    AlwaysJoin,
    MixedThreshold,
    PureThreshold,
    ReverseThreshold,
    RewardCost,
    validate_params,
    verify_equilibrium,
)
from clearbalk.oracle.verify import verification_from_dict
from conftest import PB, PSTAR


def test_equilibrium_threshold_passes(pstar):
    report = verify_equilibrium(pstar.model, pstar.rc, PureThreshold(2))
    assert report.passed
    assert report.failures() == ()
    assert [c.level for c in report.checks] == [0, 1, 2]
    assert report.strategy == "threshold:2"


def test_too_low_threshold_fails_above(pstar):
    report = verify_equilibrium(pstar.model, pstar.rc, PureThreshold(1))
    assert not report.passed
    assert [c.level for c in report.failures()] == [1]
    # at the threshold level the strategy balks but joining would pay
    record = report.failures()[0]
    assert record.join_prob == 0.0
    assert record.net_benefit > 0.0
    assert record.margin < 0.0


def test_threshold_fails_when_joining_dominates():
    model = validate_params(PSTAR, RewardCost(0.8, 1.0))
    report = verify_equilibrium(model, RewardCost(0.8, 1.0), PureThreshold(5))
    assert not report.passed
    assert [c.level for c in report.failures()] == [5]


def test_always_join_fails_outside_its_subcase(pstar):
    report = verify_equilibrium(pstar.model, pstar.rc, AlwaysJoin())
    assert not report.passed
    failing = [c.level for c in report.failures()]
    assert min(failing) == 3
    for c in report.checks:
        assert c.join_prob == 1.0
        assert c.margin == pytest.approx(c.net_benefit + report.tolerance, abs=1e-15)


def test_mixed_threshold_interior_margin(pstar):
    report = verify_equilibrium(pstar.model, pstar.rc, MixedThreshold(2, 6.0 / 7.0))
    assert report.passed
    interior = [c for c in report.checks if 0.0 < c.join_prob < 1.0]
    assert len(interior) == 1
    c = interior[0]
    assert c.level == 2
    assert abs(c.net_benefit) <= report.tolerance
    assert c.margin == pytest.approx(report.tolerance - abs(c.net_benefit), abs=1e-15)


def test_reverse_mixed_passes(pb):
    report = verify_equilibrium(pb.model, pb.rc, ReverseThreshold(0, 11.0 / 24.0))
    assert report.passed
    zero = report.checks[0]
    assert zero.level == 0
    assert abs(zero.net_benefit) <= report.tolerance
    # above the mixing level everybody joins and the benefit is positive
    for c in report.checks[1:]:
        assert c.join_prob == 1.0
        assert c.net_benefit > 0.0


def test_balk_checks_only_empty_level():
    model = validate_params(PB, RewardCost(0.46, 1.0))
    report = verify_equilibrium(model, RewardCost(0.46, 1.0), AlwaysBalk())
    assert report.passed
    assert [c.level for c in report.checks] == [0]
    c = report.checks[0]
    assert c.join_prob == 0.0
    assert c.net_benefit < 0.0
    assert c.margin == pytest.approx(report.tolerance - c.net_benefit, abs=1e-15)


def test_mass_floor_skips_unreachable(pstar):
    report = verify_equilibrium(pstar.model, pstar.rc, PureThreshold(2))
    assert all(c.mass >= report.mass_floor for c in report.checks)


def test_report_round_trips(pstar):
    report = verify_equilibrium(pstar.model, pstar.rc, PureThreshold(2))
    blob = json.dumps(report.to_dict(), sort_keys=True)
    assert verification_from_dict(json.loads(blob)) == report


def test_custom_tolerance_loosens_verdict(pstar):
    strict = verify_equilibrium(pstar.model, pstar.rc, PureThreshold(1))
    assert not strict.passed
    loose = verify_equilibrium(pstar.model, pstar.rc, PureThreshold(1), tol=1.0)
    assert loose.passed
