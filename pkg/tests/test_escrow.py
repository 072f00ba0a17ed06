import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfcoin import ContractState, Parcel, ScriptedOracle
from sfcoin.errors import (
    ContractNotOpen,
    EscrowLocked,
    InsufficientBalance,
    InvalidAmount,
    InvalidParcel,
    InvalidThreshold,
    MaturityInPast,
    NoScriptEntry,
    NotLandowner,
    NotYetMature,
    OracleFailure,
    PastMaturity,
    UnknownContract,
)

from conftest import PARCEL, make_engine

YES = ScriptedOracle({"c1": True})
NO = ScriptedOracle({"c1": False})


@pytest.fixture
def funded():
    """Golden-flow prefix: ICO 4000.00, investor buys 120.00, contract c1 created."""
    e = make_engine(investors=("investorA", "investorB"), landowners=("landowner1",))
    e.buy("investorA", 12000)
    cid = e.create_contract("landowner1", PARCEL, 365, 0.95)
    assert cid == "c1"
    return e


class TestCreate:
    def test_fresh_contract(self, funded):
        v = funded.contract_status("c1")
        assert v.state is ContractState.OPEN
        assert v.escrow_balance == 0
        assert v.threshold == 0.95
        assert v.maturity_at == 365 and v.created_at == 0
        assert funded.log[-1].kind == "ContractCreated"

    def test_not_landowner(self, funded):
        with pytest.raises(NotLandowner):
            funded.create_contract("investorA", PARCEL, 365)

    @pytest.mark.parametrize("t", [0, -0.1, 1.01, float("nan")])
    def test_bad_threshold(self, funded, t):
        with pytest.raises(InvalidThreshold):
            funded.create_contract("landowner1", PARCEL, 365, t)

    def test_threshold_one_allowed(self, funded):
        funded.create_contract("landowner1", PARCEL, 365, 1.0)

    def test_maturity_must_be_future(self, funded):
        with pytest.raises(MaturityInPast):
            funded.create_contract("landowner1", PARCEL, 0)
        funded.advance_clock(10)
        with pytest.raises(MaturityInPast):
            funded.create_contract("landowner1", PARCEL, 10)

    def test_parcel_validation(self):
        with pytest.raises(InvalidParcel):
            Parcel(1, 0, 0, 1)
        with pytest.raises(InvalidParcel):
            Parcel(-91, 0, 0, 1)
        with pytest.raises(InvalidParcel):
            Parcel(0, 1, 0, 181)

    def test_failed_create_leaves_no_trace(self, funded):
        n, accounts = len(funded.log), funded.ledger.accounts()
        with pytest.raises(InvalidThreshold):
            funded.create_contract("landowner1", PARCEL, 365, 0)
        assert len(funded.log) == n and funded.ledger.accounts() == accounts

    def test_unknown_contract(self, funded):
        with pytest.raises(UnknownContract):
            funded.contract_status("nope")


class TestInvest:
    def test_invest_50(self, funded):
        r = funded.invest("investorA", "c1", 5000)
        assert funded.balance_of("investorA") == 7000
        assert funded.contract_status("c1").escrow_balance == 5000
        assert (r.contract_id, r.escrow_total) == ("c1", 5000)

    def test_two_investors_pool(self, funded):
        funded.buy("investorB", 2000)
        funded.invest("investorA", "c1", 3000)
        funded.invest("investorB", "c1", 2000)
        v = funded.contract_status("c1")
        assert v.escrow_balance == 5000
        assert len(v.contributions) == 2
        assert v.total_contributed == 5000

    def test_invest_errors(self, funded):
        with pytest.raises(InvalidAmount):
            funded.invest("investorA", "c1", 0)
        with pytest.raises(InsufficientBalance):
            funded.invest("investorA", "c1", 12001)
        funded.advance_clock(365)
        with pytest.raises(PastMaturity):
            funded.invest("investorA", "c1", 100)

    def test_invest_on_settled(self, funded):
        funded.invest("investorA", "c1", 5000)
        funded.advance_clock(365)
        funded.settle("c1", YES)
        n = len(funded.log)
        with pytest.raises(ContractNotOpen):
            funded.invest("investorA", "c1", 100)
        assert len(funded.log) == n
        assert funded.balance_of("investorA") == 7000

    def test_escrow_cannot_invest_elsewhere(self, funded):
        funded.invest("investorA", "c1", 5000)
        funded.create_contract("landowner1", PARCEL, 365)
        with pytest.raises(EscrowLocked):
            funded.invest("escrow:c1", "c2", 100)


class TestSettle:
    def test_paid(self, funded):
        funded.invest("investorA", "c1", 5000)
        funded.advance_clock(365)
        out = funded.settle("c1", YES)
        assert out.beneficiary == "landowner1" and out.amount == 5000
        assert funded.balance_of("landowner1") == 5000
        v = funded.contract_status("c1")
        assert v.state is ContractState.PAID and v.escrow_balance == 0

    def test_reverted(self, funded):
        funded.invest("investorA", "c1", 5000)
        funded.advance_clock(365)
        before = funded.balance_of("fund")
        out = funded.settle("c1", NO)
        assert out.beneficiary == "fund"
        assert funded.balance_of("fund") - before == 5000
        assert funded.balance_of("landowner1") == 0
        assert funded.contract_status("c1").state is ContractState.REVERTED

    def test_empty_escrow(self, funded):
        funded.advance_clock(365)
        n = len(funded.log)
        out = funded.settle("c1", YES)
        assert out.amount == 0 and out.state is ContractState.PAID
        assert [e.kind for e in funded.log.events[n:]] == ["OracleQueried", "Settled"]

    def test_not_yet_mature(self, funded):
        funded.advance_clock(364)
        with pytest.raises(NotYetMature):
            funded.settle("c1", YES)

    def test_oracle_failure_keeps_contract_open(self, funded):
        funded.invest("investorA", "c1", 5000)
        funded.advance_clock(365)
        n = len(funded.log)
        with pytest.raises(OracleFailure) as info:
            funded.settle("c1", ScriptedOracle({}))
        assert isinstance(info.value, NoScriptEntry)
        assert len(funded.log) == n
        assert funded.contract_status("c1").state is ContractState.OPEN
        assert funded.contract_status("c1").escrow_balance == 5000
        funded.settle("c1", YES)
        assert funded.balance_of("landowner1") == 5000

    def test_settle_is_terminal(self, funded):
        funded.advance_clock(365)
        funded.settle("c1", YES)
        with pytest.raises(ContractNotOpen):
            funded.settle("c1", NO)
        assert len(funded.query(contract="c1", kind="OracleQueried")) == 1

    def test_event_sequence(self, funded):
        funded.invest("investorA", "c1", 5000)
        funded.advance_clock(365)
        funded.settle("c1", YES)
        kinds = [e.kind for e in funded.query(contract="c1")]
        assert kinds == ["ContractCreated", "Invested", "OracleQueried", "Settled"]


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(st.sampled_from(["a", "b", "c"]), st.integers(1, 5000)), max_size=12),
    st.booleans(),
)
def test_settlement_exclusivity(contribs, verdict):
    e = make_engine(investors=("a", "b", "c"), landowners=("lo",), supply=100000)
    for who in "abc":
        e.buy(who, 30000)
    cid = e.create_contract("lo", PARCEL, 30)
    for who, amt in contribs:
        e.invest(who, cid, amt)
    e.advance_clock(30)
    fund0, lo0 = e.balance_of("fund"), e.balance_of("lo")
    out = e.settle(cid, ScriptedOracle({cid: verdict}))
    total = sum(a for _, a in contribs)
    assert out.amount == total
    d_fund, d_lo = e.balance_of("fund") - fund0, e.balance_of("lo") - lo0
    assert (d_lo, d_fund) == ((total, 0) if verdict else (0, total))
    snap = e.snapshot()
    assert sum(snap.balances.values()) == snap.total_supply
