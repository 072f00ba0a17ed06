"""Preservation escrow contracts.

Each contract owns a dedicated Escrow-role account. Investors pay into it
while the contract is open; after maturity one oracle consultation decides
whether the whole pot goes to the landowner (Paid) or back to the fund
(Reverted). Settled contracts are inactive: every further mutation fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol

from .amounts import check_units
from .auditlog import AuditLog, EventKind
from .clock import SimClock
from .errors import (
    ContractNotOpen,
    DuplicateContract,
    InvalidAmount,
    InvalidParcel,
    InvalidThreshold,
    MaturityInPast,
    NotLandowner,
    NotYetMature,
    PastMaturity,
    UnknownContract,
)
from .ledger import Ledger, Role
from .oracle import OracleVerdict
from .parcel import Parcel

DEFAULT_THRESHOLD = 0.95


class ContractState(str, Enum):
    OPEN = "Open"
    PAID = "Settled(Paid)"
    REVERTED = "Settled(Reverted)"

    @property
    def settled(self) -> bool:
        return self is not ContractState.OPEN


class Oracle(Protocol):
    def verdict(self, contract, at: int = 0) -> OracleVerdict: ...


@dataclass(frozen=True)
class Contribution:
    investor: str
    amount: int
    at: int


@dataclass
class EscrowContract:
    id: str
    landowner: str
    escrow_account: str
    parcel: Parcel
    created_at: int
    maturity_at: int
    threshold: float
    contributions: list[Contribution] = field(default_factory=list)
    state: ContractState = ContractState.OPEN

    @property
    def total_contributed(self) -> int:
        return sum(c.amount for c in self.contributions)


@dataclass(frozen=True)
class ContractView:
    id: str
    landowner: str
    escrow_account: str
    parcel: Parcel
    created_at: int
    maturity_at: int
    threshold: float
    contributions: tuple[Contribution, ...]
    state: ContractState
    escrow_balance: int

    @property
    def total_contributed(self) -> int:
        return sum(c.amount for c in self.contributions)


@dataclass(frozen=True)
class InvestReceipt:
    """Confirmation handed back to the investor."""

    contract_id: str
    investor: str
    amount: int
    escrow_total: int


@dataclass(frozen=True)
class SettlementOutcome:
    contract_id: str
    verdict: OracleVerdict
    beneficiary: str
    amount: int
    state: ContractState


class EscrowBook:
    def __init__(self, ledger: Ledger, log: AuditLog, clock: SimClock):
        self._ledger = ledger
        self._log = log
        self._clock = clock
        self._contracts: dict[str, EscrowContract] = {}

    def _get(self, contract_id: str) -> EscrowContract:
        try:
            return self._contracts[contract_id]
        except KeyError:
            raise UnknownContract(contract_id) from None

    def _next_id(self) -> str:
        n = len(self._contracts) + 1
        while f"c{n}" in self._contracts:
            n += 1
        return f"c{n}"

    def contract_ids(self) -> list[str]:
        return list(self._contracts)

    def create_contract(
        self,
        landowner: str,
        parcel: Parcel,
        maturity_at: int,
        threshold: float = DEFAULT_THRESHOLD,
        contract_id: str | None = None,
    ) -> str:
        if self._ledger.role_of(landowner) is not Role.LANDOWNER:
            raise NotLandowner(landowner)
        if not isinstance(parcel, Parcel):
            raise InvalidParcel(f"expected a Parcel, got {parcel!r}")
        if isinstance(maturity_at, bool) or not isinstance(maturity_at, int):
            raise MaturityInPast(f"maturity must be an integer day, got {maturity_at!r}")
        now = self._clock.now()
        if maturity_at <= now:
            raise MaturityInPast(f"maturity day {maturity_at} is not after today ({now})")
        if (
            isinstance(threshold, bool)
            or not isinstance(threshold, (int, float))
            or not math.isfinite(threshold)
            or not 0.0 < threshold <= 1.0
        ):
            raise InvalidThreshold(f"threshold must lie in (0, 1], got {threshold!r}")
        if contract_id is None:
            contract_id = self._next_id()
        elif not isinstance(contract_id, str) or not contract_id:
            raise ValueError("contract id must be a non-empty string")
        if contract_id in self._contracts:
            raise DuplicateContract(contract_id)
        escrow_account = f"escrow:{contract_id}"
        self._ledger.open_account(escrow_account, Role.ESCROW)
        c = EscrowContract(
            id=contract_id,
            landowner=landowner,
            escrow_account=escrow_account,
            parcel=parcel,
            created_at=now,
            maturity_at=maturity_at,
            threshold=float(threshold),
        )
        self._contracts[contract_id] = c
        self._log.append(
            EventKind.CONTRACT_CREATED,
            {
                "contract": contract_id,
                "landowner": landowner,
                "escrow": escrow_account,
                "parcel": parcel.to_dict(),
                "maturity_at": maturity_at,
                "threshold": c.threshold,
                "at": now,
            },
        )
        return contract_id

    def invest(self, investor: str, contract_id: str, amount: int) -> InvestReceipt:
        c = self._get(contract_id)
        if c.state.settled:
            raise ContractNotOpen(f"{contract_id} is {c.state.value}")
        now = self._clock.now()
        if now >= c.maturity_at:
            raise PastMaturity(f"{contract_id} matured on day {c.maturity_at}")
        check_units(amount)
        if amount == 0:
            raise InvalidAmount("zero-amount investments are rejected")
        self._ledger._check_transfer(investor, c.escrow_account, amount, into_escrow=True)
        self._ledger._move(investor, c.escrow_account, amount)
        c.contributions.append(Contribution(investor, amount, now))
        total = self._ledger.balance_of(c.escrow_account)
        self._log.append(
            EventKind.INVESTED,
            {
                "contract": contract_id,
                "investor": investor,
                "escrow": c.escrow_account,
                "amount": amount,
                "escrow_total": total,
                "at": now,
            },
        )
        return InvestReceipt(contract_id, investor, amount, total)

    def settle(self, contract_id: str, oracle: Oracle) -> SettlementOutcome:
        """Consult the oracle once and release the whole pot to one beneficiary.

        Any OracleFailure propagates before state is touched; the contract
        stays open and settle can be retried.
        """
        c = self._get(contract_id)
        if c.state.settled:
            raise ContractNotOpen(f"{contract_id} is {c.state.value}")
        now = self._clock.now()
        if now < c.maturity_at:
            raise NotYetMature(f"{contract_id} matures on day {c.maturity_at}, today is {now}")
        v = oracle.verdict(c, now)
        if v.contract_id != contract_id:
            raise ValueError(f"oracle answered for {v.contract_id!r}, asked about {contract_id!r}")
        amount = self._ledger.balance_of(c.escrow_account)
        if v.verdict:
            beneficiary, state = c.landowner, ContractState.PAID
        else:
            beneficiary, state = self._ledger.fund, ContractState.REVERTED
        self._log.append(
            EventKind.ORACLE_QUERIED,
            {
                "contract": contract_id,
                "preserved_fraction": v.preserved_fraction,
                "threshold": c.threshold,
                "verdict": v.verdict,
                "evidence_hash": v.evidence_hash,
                "at": now,
            },
        )
        if amount:
            self._ledger._move(c.escrow_account, beneficiary, amount)
        c.state = state
        self._log.append(
            EventKind.SETTLED,
            {
                "contract": contract_id,
                "outcome": state.value,
                "escrow": c.escrow_account,
                "beneficiary": beneficiary,
                "amount": amount,
                "at": now,
            },
        )
        return SettlementOutcome(contract_id, v, beneficiary, amount, state)

    def contract_status(self, contract_id: str) -> ContractView:
        c = self._get(contract_id)
        return ContractView(
            id=c.id,
            landowner=c.landowner,
            escrow_account=c.escrow_account,
            parcel=c.parcel,
            created_at=c.created_at,
            maturity_at=c.maturity_at,
            threshold=c.threshold,
            contributions=tuple(c.contributions),
            state=c.state,
            escrow_balance=self._ledger.balance_of(c.escrow_account),
        )
