from __future__ import annotations

from dataclasses import dataclass, field

from .auditlog import AuditLog, EventKind
from .clock import SimClock
from .errors import DuplicateSweep, NotOnPeriodBoundary, SweepTimeMismatch
from .ledger import Ledger, Role


@dataclass(frozen=True)
class SweepPolicy:
    """Annual donation: rate_numerator/rate_denominator of each swept wallet, floored."""

    rate_numerator: int = 5
    rate_denominator: int = 100
    period: int = 365
    exempt_roles: frozenset[Role] = field(
        default_factory=lambda: frozenset({Role.FUND, Role.LANDOWNER, Role.ESCROW})
    )

    def __post_init__(self) -> None:
        if not 0 < self.rate_numerator < self.rate_denominator:
            raise ValueError("sweep rate must lie strictly between 0 and 1")
        if self.period <= 0:
            raise ValueError("sweep period must be positive")
        if Role.ESCROW not in self.exempt_roles or Role.FUND not in self.exempt_roles:
            raise ValueError("escrow and fund accounts can never be swept")

    def amount_for(self, balance: int) -> int:
        return balance * self.rate_numerator // self.rate_denominator


@dataclass(frozen=True)
class SweepEntry:
    account: str
    balance_before: int
    amount_swept: int


@dataclass(frozen=True)
class SweepReport:
    sweep_time: int
    period: int
    entries: tuple[SweepEntry, ...]

    @property
    def total(self) -> int:
        return sum(e.amount_swept for e in self.entries)


class Sweeper:
    def __init__(self, ledger: Ledger, log: AuditLog, clock: SimClock, policy: SweepPolicy | None = None):
        self._ledger = ledger
        self._log = log
        self._clock = clock
        self.policy = policy or SweepPolicy()
        self._swept: set[int] = set()

    @property
    def swept_periods(self) -> frozenset[int]:
        return frozenset(self._swept)

    def run_annual_sweep(self, at: int | None = None) -> SweepReport:
        """Move floor(balance * rate) from every non-exempt wallet to the fund.

        ``at`` defaults to the current simulated day and must equal it; it
        must be a positive multiple of the policy period since genesis.
        Accounts are swept in sorted id order; zero amounts are skipped.
        """
        now = self._clock.now()
        if at is None:
            at = now
        if at != now:
            raise SweepTimeMismatch(f"sweep requested for day {at} but the clock reads day {now}")
        if at <= 0 or at % self.policy.period:
            raise NotOnPeriodBoundary(f"day {at} is not a positive multiple of {self.policy.period}")
        period = at // self.policy.period
        if period in self._swept:
            raise DuplicateSweep(f"period {period} (day {at}) has already been swept")
        fund = self._ledger.fund
        entries = []
        for account in sorted(self._ledger.accounts()):
            if self._ledger.role_of(account) in self.policy.exempt_roles:
                continue
            before = self._ledger.balance_of(account)
            amount = self.policy.amount_for(before)
            if amount == 0:
                continue
            entries.append(SweepEntry(account, before, amount))
        self._swept.add(period)
        for e in entries:
            self._ledger._move(e.account, fund, e.amount_swept)
            self._log.append(
                EventKind.SWEEP_EXECUTED,
                {
                    "account": e.account,
                    "fund": fund,
                    "balance_before": e.balance_before,
                    "amount": e.amount_swept,
                    "period": period,
                    "at": at,
                },
            )
        return SweepReport(at, period, tuple(entries))
