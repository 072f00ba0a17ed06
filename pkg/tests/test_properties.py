"""Stateful comparison of the engine against the naive reference model."""

from hypothesis import settings
from hypothesis import strategies as st
from hypothesis.stateful import RuleBasedStateMachine, invariant, precondition, rule

from sfcoin import Engine, ScriptedOracle, verify_chain
from sfcoin.errors import SFCError

from conftest import PARCEL
from reference import RefLedger

INVESTORS = ["i1", "i2", "i3"]
LANDOWNERS = ["l1", "l2"]
ACCOUNTS = ["fund", *INVESTORS, *LANDOWNERS]


class EngineVsReference(RuleBasedStateMachine):
    def __init__(self):
        super().__init__()
        self.e = Engine()
        self.ref = RefLedger(fund="fund")
        self.e.open_account("fund", "Fund")
        self.ref.open("fund", "Fund")
        for a in INVESTORS:
            self.e.open_account(a, "Investor")
            self.ref.open(a, "Investor")
        for a in LANDOWNERS:
            self.e.open_account(a, "Landowner")
            self.ref.open(a, "Landowner")
        self.e.ico_mint(100000, "fund")
        self.ref.mint(100000)
        self.expected_events = 1

    def _apply(self, engine_call, ref_ok, events=1):
        n = len(self.e.log)
        before = self.e.snapshot()
        try:
            engine_call()
            ok = True
        except SFCError:
            ok = False
            assert self.e.snapshot().balances == before.balances
            assert len(self.e.log) == n
        assert ok == ref_ok
        if ok:
            self.expected_events += events if not callable(events) else events()

    @rule(who=st.sampled_from(INVESTORS + LANDOWNERS), amount=st.integers(0, 30000))
    def buy(self, who, amount):
        self._apply(lambda: self.e.buy(who, amount), self.ref.buy(who, amount))

    @rule(src=st.sampled_from(ACCOUNTS), dst=st.sampled_from(ACCOUNTS), amount=st.integers(0, 20000))
    def transfer(self, src, dst, amount):
        self._apply(lambda: self.e.transfer(src, dst, amount), self.ref.transfer(src, dst, amount))

    @rule(lo=st.sampled_from(LANDOWNERS + INVESTORS), horizon=st.integers(0, 800))
    def create(self, lo, horizon):
        cid = f"c{len(self.ref.contracts) + 1}"
        maturity = self.e.now() + horizon
        self._apply(
            lambda: self.e.create_contract(lo, PARCEL, maturity, contract_id=cid),
            self.ref.create(cid, lo, maturity),
        )

    @precondition(lambda self: self.ref.contracts)
    @rule(who=st.sampled_from(INVESTORS + ["fund"]), pick=st.integers(0, 50), amount=st.integers(0, 10000))
    def invest(self, who, pick, amount):
        cid = sorted(self.ref.contracts)[pick % len(self.ref.contracts)]
        self._apply(lambda: self.e.invest(who, cid, amount), self.ref.invest(who, cid, amount))

    @precondition(lambda self: self.ref.contracts)
    @rule(pick=st.integers(0, 50), verdict=st.booleans())
    def settle(self, pick, verdict):
        cid = sorted(self.ref.contracts)[pick % len(self.ref.contracts)]
        self._apply(lambda: self.e.settle(cid, ScriptedOracle({cid: verdict})), self.ref.settle(cid, verdict), 2)

    @rule(days=st.sampled_from([0, 1, 100, 265, 365]))
    def advance(self, days):
        self.e.advance_clock(days)
        self.ref.day += days

    @rule()
    def sweep(self):
        def nonzero():
            return sum(1 for e in self.e.log.events[n:] if e.kind == "SweepExecuted")

        n = len(self.e.log)
        self._apply(self.e.run_annual_sweep, self.ref.sweep(), nonzero)

    @invariant()
    def matches_reference(self):
        snap = self.e.snapshot()
        assert sum(snap.balances.values()) == snap.total_supply == 100000
        assert dict(snap.balances) == self.ref.balances
        assert all(v >= 0 for v in snap.balances.values())

    @invariant()
    def log_complete_and_valid(self):
        assert len(self.e.log) == self.expected_events
        assert verify_chain(self.e.log)


EngineVsReference.TestCase.settings = settings(max_examples=60, stateful_step_count=40, deadline=None)
TestEngineVsReference = EngineVsReference.TestCase
