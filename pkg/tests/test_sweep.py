import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfcoin import ScriptedOracle, SweepPolicy
from sfcoin.errors import DuplicateSweep, NotOnPeriodBoundary, SweepTimeMismatch

from conftest import PARCEL, make_engine


@pytest.fixture
def holder():
    e = make_engine(investors=("investorA",), landowners=("lo1",))
    e.buy("investorA", 12000)
    return e


def test_two_annual_sweeps(holder):
    holder.advance_clock(365)
    r1 = holder.run_annual_sweep()
    assert [(x.account, x.balance_before, x.amount_swept) for x in r1.entries] == [("investorA", 12000, 600)]
    assert holder.balance_of("investorA") == 11400
    holder.advance_clock(365)
    r2 = holder.run_annual_sweep(730)
    assert r2.entries[0].amount_swept == 570
    assert holder.balance_of("investorA") == 10830
    assert holder.balance_of("fund") == 400000 - 12000 + 600 + 570


def test_one_unit_rounds_to_nothing():
    e = make_engine(investors=("dust",))
    e.buy("dust", 1)
    e.advance_clock(365)
    n = len(e.log)
    r = e.run_annual_sweep()
    assert r.entries == ()
    assert len(e.log) == n
    assert e.balance_of("dust") == 1


def test_duplicate_and_boundary(holder):
    holder.advance_clock(365)
    holder.run_annual_sweep()
    with pytest.raises(DuplicateSweep):
        holder.run_annual_sweep()
    holder.advance_clock(1)
    with pytest.raises(NotOnPeriodBoundary):
        holder.run_annual_sweep()


def test_day_zero_is_not_a_sweep_day(holder):
    with pytest.raises(NotOnPeriodBoundary):
        holder.run_annual_sweep()


def test_sweep_time_must_be_now(holder):
    holder.advance_clock(730)
    with pytest.raises(SweepTimeMismatch):
        holder.run_annual_sweep(365)


def test_skipped_period_can_still_be_swept_later(holder):
    holder.advance_clock(730)
    assert holder.run_annual_sweep().period == 2


def test_exempt_roles_untouched(holder):
    holder.transfer("fund", "lo1", 5000)
    holder.create_contract("lo1", PARCEL, 400)
    holder.invest("investorA", "c1", 5000)
    holder.advance_clock(365)
    holder.run_annual_sweep()
    assert holder.balance_of("lo1") == 5000
    assert holder.balance_of("escrow:c1") == 5000
    assert holder.balance_of("investorA") == 7000 - 350


def test_policy_validation():
    with pytest.raises(ValueError):
        SweepPolicy(rate_numerator=0)
    with pytest.raises(ValueError):
        SweepPolicy(period=0)
    assert SweepPolicy().amount_for(12000) == 600


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 10**7), min_size=1, max_size=6))
def test_sweep_bounds_and_conservation(buys):
    investors = [f"i{k}" for k in range(len(buys))]
    e = make_engine(investors=investors, landowners=("lo",), supply=10**9)
    for who, amt in zip(investors, buys):
        e.buy(who, amt)
    e.create_contract("lo", PARCEL, 500)
    e.invest(investors[0], "c1", 1)
    e.advance_clock(365)
    escrow_before = e.balance_of("escrow:c1")
    fund_before = e.balance_of("fund")
    report = e.run_annual_sweep()
    assert e.balance_of("escrow:c1") == escrow_before
    assert e.balance_of("fund") - fund_before == report.total
    for entry in report.entries:
        assert entry.amount_swept > 0
        assert entry.amount_swept * 100 <= entry.balance_before * 5
        after = entry.balance_before - entry.amount_swept
        # ceil(0.95 * before) - 1 <= after
        assert after >= -(-entry.balance_before * 95 // 100) - 1
    assert len(e.query(kind="SweepExecuted")) == len(report.entries)
