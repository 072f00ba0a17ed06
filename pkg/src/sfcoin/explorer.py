"""Rebuild balances and contract states from an exported log alone.

This reads only event payloads; it shares no code path with the ledger, so
a report over an exported file is an independent account of what happened.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .amounts import DEFAULT_DECIMALS, to_display
from .auditlog import AuditEvent, EventKind
from .canonical import canonical_json


@dataclass
class Replay:
    decimals: int = DEFAULT_DECIMALS
    total_supply: int = 0
    balances: dict[str, int] = field(default_factory=dict)
    contracts: dict[str, str] = field(default_factory=dict)

    def _move(self, src: str, dst: str, amount: int) -> None:
        self.balances[src] = self.balances.get(src, 0) - amount
        self.balances[dst] = self.balances.get(dst, 0) + amount

    def apply(self, ev: AuditEvent) -> None:
        p = ev.payload
        kind = EventKind(ev.kind)
        if kind is EventKind.ICO_MINTED:
            self.decimals = p["decimals"]
            self.total_supply = p["supply"]
            self.balances[p["fund"]] = self.balances.get(p["fund"], 0) + p["supply"]
        elif kind is EventKind.BUY:
            self._move(p["fund"], p["investor"], p["amount"])
        elif kind is EventKind.TRANSFER:
            self._move(p["from"], p["to"], p["amount"])
        elif kind is EventKind.CONTRACT_CREATED:
            self.contracts[p["contract"]] = "Open"
            self.balances.setdefault(p["escrow"], 0)
            self.balances.setdefault(p["landowner"], 0)
        elif kind is EventKind.INVESTED:
            self._move(p["investor"], p["escrow"], p["amount"])
        elif kind is EventKind.SETTLED:
            self._move(p["escrow"], p["beneficiary"], p["amount"])
            self.contracts[p["contract"]] = p["outcome"]
        elif kind is EventKind.SWEEP_EXECUTED:
            self._move(p["account"], p["fund"], p["amount"])
        # OracleQueried moves nothing.

    def display_balances(self) -> dict[str, str]:
        return {a: to_display(v, self.decimals) for a, v in sorted(self.balances.items())}


def replay(events: Iterable[AuditEvent]) -> Replay:
    r = Replay()
    for ev in events:
        r.apply(ev)
    return r


def format_event(ev: AuditEvent) -> str:
    return f"#{ev.seq:<5d} {ev.kind:<16s} {canonical_json(ev.payload)}"
