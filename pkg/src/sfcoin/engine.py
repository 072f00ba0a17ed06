"""Composition root: one clock, one ledger, one escrow book, one sweeper, one log.

Mutations are serialized behind a single lock so the engine can be handed
between threads; reads go through immutable snapshots.
"""

from __future__ import annotations

import functools
import threading

from .amounts import DEFAULT_DECIMALS
from .auditlog import AuditEvent, AuditLog
from .clock import SimClock
from .escrow import DEFAULT_THRESHOLD, ContractView, EscrowBook, InvestReceipt, Oracle, SettlementOutcome
from .ledger import Ledger, LedgerState, Role
from .parcel import Parcel
from .sweep import Sweeper, SweepPolicy, SweepReport


def _serialized(method):
    @functools.wraps(method)
    def wrapper(self, *args, **kwargs):
        with self._lock:
            return method(self, *args, **kwargs)

    return wrapper


class Engine:
    def __init__(self, decimals: int = DEFAULT_DECIMALS, sweep_policy: SweepPolicy | None = None):
        self._lock = threading.RLock()
        self.clock = SimClock()
        self.log = AuditLog()
        self.ledger = Ledger(self.log, self.clock, decimals)
        self.escrow = EscrowBook(self.ledger, self.log, self.clock)
        self.sweeper = Sweeper(self.ledger, self.log, self.clock, sweep_policy)

    @property
    def decimals(self) -> int:
        return self.ledger.decimals

    def now(self) -> int:
        return self.clock.now()

    @_serialized
    def advance_clock(self, days: int) -> int:
        return self.clock.advance(days)

    @_serialized
    def open_account(self, account: str, role: Role | str) -> None:
        self.ledger.open_account(account, role)

    @_serialized
    def ico_mint(self, supply: int, fund: str) -> None:
        self.ledger.ico_mint(supply, fund)

    @_serialized
    def buy(self, investor: str, amount: int) -> None:
        self.ledger.buy(investor, amount)

    @_serialized
    def transfer(self, src: str, dst: str, amount: int) -> None:
        self.ledger.transfer(src, dst, amount)

    @_serialized
    def approve(self, owner: str, spender: str, amount: int) -> None:
        self.ledger.approve(owner, spender, amount)

    @_serialized
    def transfer_from(self, spender: str, owner: str, dst: str, amount: int) -> None:
        self.ledger.transfer_from(spender, owner, dst, amount)

    @_serialized
    def create_contract(
        self,
        landowner: str,
        parcel: Parcel,
        maturity_at: int,
        threshold: float = DEFAULT_THRESHOLD,
        contract_id: str | None = None,
    ) -> str:
        return self.escrow.create_contract(landowner, parcel, maturity_at, threshold, contract_id)

    @_serialized
    def invest(self, investor: str, contract_id: str, amount: int) -> InvestReceipt:
        return self.escrow.invest(investor, contract_id, amount)

    @_serialized
    def settle(self, contract_id: str, oracle: Oracle) -> SettlementOutcome:
        return self.escrow.settle(contract_id, oracle)

    @_serialized
    def run_annual_sweep(self, at: int | None = None) -> SweepReport:
        return self.sweeper.run_annual_sweep(at)

    # reads

    def balance_of(self, account: str) -> int:
        with self._lock:
            return self.ledger.balance_of(account)

    def total_supply(self) -> int:
        return self.ledger.total_supply()

    def contract_status(self, contract_id: str) -> ContractView:
        with self._lock:
            return self.escrow.contract_status(contract_id)

    def snapshot(self) -> LedgerState:
        with self._lock:
            return self.ledger.snapshot()

    def query(self, **filters) -> list[AuditEvent]:
        with self._lock:
            events = self.log.events
        return AuditLog.from_events(events).query(**filters)
