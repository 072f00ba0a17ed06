"""Integer-exact token ledger with ERC-20-like semantics.

Balances are ``int`` base units. Every check runs before any write, so a
failed call is a no-op and appends nothing to the audit log.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping

from .amounts import DEFAULT_DECIMALS, checked_add, check_units
from .auditlog import AuditLog, EventKind
from .clock import SimClock
from .errors import (
    AlreadyMinted,
    DuplicateAccount,
    EscrowLocked,
    InsufficientAllowance,
    InsufficientBalance,
    InvalidAmount,
    NotFundAccount,
    NotInvestor,
    SelfTransfer,
    UnknownAccount,
    ZeroSupply,
)


class Role(str, Enum):
    FUND = "Fund"
    INVESTOR = "Investor"
    LANDOWNER = "Landowner"
    ESCROW = "Escrow"


@dataclass(frozen=True)
class LedgerState:
    """Immutable snapshot, safe to read from other threads."""

    balances: Mapping[str, int]
    allowances: Mapping[tuple[str, str], int]
    total_supply: int
    minted: bool
    roles: Mapping[str, Role] = field(default_factory=dict)


class Ledger:
    def __init__(self, log: AuditLog, clock: SimClock, decimals: int = DEFAULT_DECIMALS):
        if isinstance(decimals, bool) or not isinstance(decimals, int) or not 0 <= decimals <= 18:
            raise ValueError(f"decimals must be an int in [0, 18], got {decimals!r}")
        self.decimals = decimals
        self._log = log
        self._clock = clock
        self._roles: dict[str, Role] = {}
        self._balances: dict[str, int] = {}
        self._allowances: dict[tuple[str, str], int] = {}
        self._total_supply = 0
        self._minted = False
        self._fund: str | None = None

    # accounts

    def open_account(self, account: str, role: Role | str) -> None:
        role = Role(role)
        if not isinstance(account, str) or not account:
            raise ValueError("account id must be a non-empty string")
        if account in self._roles:
            raise DuplicateAccount(account)
        if role is Role.FUND and self._fund is not None:
            raise DuplicateAccount(f"fund account already exists: {self._fund}")
        self._roles[account] = role
        self._balances[account] = 0
        if role is Role.FUND:
            self._fund = account

    def role_of(self, account: str) -> Role:
        try:
            return self._roles[account]
        except KeyError:
            raise UnknownAccount(account) from None

    def accounts(self, role: Role | None = None) -> list[str]:
        return [a for a, r in self._roles.items() if role is None or r is role]

    @property
    def fund(self) -> str:
        if self._fund is None:
            raise UnknownAccount("no fund account has been opened")
        return self._fund

    @property
    def minted(self) -> bool:
        return self._minted

    # reads

    def balance_of(self, account: str) -> int:
        self.role_of(account)
        return self._balances[account]

    def total_supply(self) -> int:
        return self._total_supply

    def allowance(self, owner: str, spender: str) -> int:
        self.role_of(owner)
        self.role_of(spender)
        return self._allowances.get((owner, spender), 0)

    def snapshot(self) -> LedgerState:
        return LedgerState(
            balances=MappingProxyType(dict(self._balances)),
            allowances=MappingProxyType(dict(self._allowances)),
            total_supply=self._total_supply,
            minted=self._minted,
            roles=MappingProxyType(dict(self._roles)),
        )

    # mutations

    def ico_mint(self, supply: int, fund: str) -> None:
        check_units(supply)
        if self._minted:
            raise AlreadyMinted("the ICO supply can only be minted once")
        if self.role_of(fund) is not Role.FUND:
            raise NotFundAccount(fund)
        if supply == 0:
            raise ZeroSupply("ICO supply must be positive")
        self._balances[fund] = supply
        self._total_supply = supply
        self._minted = True
        self._log.append(
            EventKind.ICO_MINTED,
            {"fund": fund, "supply": supply, "decimals": self.decimals, "at": self._clock.now()},
        )

    def transfer(self, src: str, dst: str, amount: int) -> None:
        self._check_transfer(src, dst, amount)
        self._move(src, dst, amount)
        self._log.append(
            EventKind.TRANSFER, {"from": src, "to": dst, "amount": amount, "at": self._clock.now()}
        )

    def buy(self, investor: str, amount: int) -> None:
        """Purchase from the genesis fund: a fund -> investor transfer logged as Buy."""
        if self.role_of(investor) is not Role.INVESTOR:
            raise NotInvestor(f"only Investor accounts may buy, {investor} is {self._roles[investor].value}")
        fund = self.fund
        self._check_transfer(fund, investor, amount)
        self._move(fund, investor, amount)
        self._log.append(
            EventKind.BUY, {"fund": fund, "investor": investor, "amount": amount, "at": self._clock.now()}
        )

    def approve(self, owner: str, spender: str, amount: int) -> None:
        self.role_of(owner)
        self.role_of(spender)
        check_units(amount)
        self._allowances[(owner, spender)] = amount

    def transfer_from(self, spender: str, owner: str, dst: str, amount: int) -> None:
        """Move ``amount`` from ``owner`` to ``dst`` against spender's allowance.

        Logged as a Transfer; the allowance is decremented by ``amount``.
        """
        self.role_of(spender)
        self._check_transfer(owner, dst, amount)
        allowed = self._allowances.get((owner, spender), 0)
        if allowed < amount:
            raise InsufficientAllowance(f"{spender} may spend {allowed} of {owner}'s units, not {amount}")
        self._move(owner, dst, amount)
        self._allowances[(owner, spender)] = allowed - amount
        self._log.append(
            EventKind.TRANSFER,
            {"from": owner, "to": dst, "amount": amount, "spender": spender, "at": self._clock.now()},
        )

    # internals shared with escrow and sweep

    def _check_transfer(self, src: str, dst: str, amount: int, *, into_escrow: bool = False) -> None:
        check_units(amount)
        src_role = self.role_of(src)
        dst_role = self.role_of(dst)
        if amount == 0:
            raise InvalidAmount("zero-amount transfers are rejected")
        if src == dst:
            raise SelfTransfer(src)
        if src_role is Role.ESCROW:
            raise EscrowLocked(f"{src} is an escrow account; its tokens leave only by settlement")
        if (dst_role is Role.ESCROW) != into_escrow:
            raise EscrowLocked(f"{dst} cannot be credited by this operation; escrow accounts are funded by invest")
        if self._balances[src] < amount:
            raise InsufficientBalance(f"{src} holds {self._balances[src]}, needs {amount}")

    def _move(self, src: str, dst: str, amount: int) -> None:
        """Unlogged debit/credit. Callers validate and log; this only guards the arithmetic."""
        if self._balances[src] < amount:
            raise InsufficientBalance(f"{src} holds {self._balances[src]}, needs {amount}")
        credited = checked_add(self._balances[dst], amount)
        self._balances[src] -= amount
        self._balances[dst] = credited
