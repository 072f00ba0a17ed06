"""Append-only, SHA-256 hash-chained event log.

Each event hashes ``prev_hash + canonical_json({"seq", "kind", "payload"})``.
The first event chains from ``SHA-256("SFC-GENESIS")`` so an empty log still
has a verifiable head. Exported logs are newline-delimited canonical JSON,
one event per line in seq order.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Iterator, Sequence

from .canonical import canonical_json, sha256_hex

GENESIS_ANCHOR = "SFC-GENESIS"
GENESIS_HASH = sha256_hex(GENESIS_ANCHOR)

_HEX64 = re.compile(r"^[0-9a-f]{64}$")
_EVENT_KEYS = frozenset({"seq", "kind", "payload", "prev_hash", "hash"})


class EventKind(str, Enum):
    ICO_MINTED = "IcoMinted"
    BUY = "Buy"
    TRANSFER = "Transfer"
    CONTRACT_CREATED = "ContractCreated"
    INVESTED = "Invested"
    ORACLE_QUERIED = "OracleQueried"
    SETTLED = "Settled"
    SWEEP_EXECUTED = "SweepExecuted"


_KINDS = frozenset(k.value for k in EventKind)


def event_hash(prev_hash: str, seq: int, kind: str, payload: dict) -> str:
    body = canonical_json({"seq": seq, "kind": kind, "payload": payload})
    return sha256_hex(prev_hash + body)


@dataclass(frozen=True)
class AuditEvent:
    seq: int
    kind: str
    payload: dict
    prev_hash: str
    hash: str

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "kind": self.kind,
            "payload": self.payload,
            "prev_hash": self.prev_hash,
            "hash": self.hash,
        }

    def to_line(self) -> str:
        return canonical_json(self.to_dict())

    def recompute_hash(self) -> str:
        return event_hash(self.prev_hash, self.seq, self.kind, self.payload)


def _contains_value(obj: Any, needle: str) -> bool:
    if isinstance(obj, str):
        return obj == needle
    if isinstance(obj, dict):
        return any(_contains_value(v, needle) for v in obj.values())
    if isinstance(obj, (list, tuple)):
        return any(_contains_value(v, needle) for v in obj)
    return False


def filter_events(
    events: Iterable[AuditEvent],
    *,
    account: str | None = None,
    contract: str | None = None,
    kind: str | EventKind | None = None,
    seq_from: int | None = None,
    seq_to: int | None = None,
) -> list[AuditEvent]:
    """Explorer query. Filters combine with AND; ``seq_to`` is inclusive.

    An event matches ``account`` if the id appears anywhere in its payload.
    """
    if isinstance(kind, EventKind):
        kind = kind.value
    out = []
    for ev in events:
        if seq_from is not None and ev.seq < seq_from:
            continue
        if seq_to is not None and ev.seq > seq_to:
            continue
        if kind is not None and ev.kind != kind:
            continue
        if contract is not None and ev.payload.get("contract") != contract:
            continue
        if account is not None and not _contains_value(ev.payload, account):
            continue
        out.append(ev)
    out.sort(key=lambda e: e.seq)
    return out


class AuditLog:
    def __init__(self) -> None:
        self._events: list[AuditEvent] = []

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[AuditEvent]:
        return iter(tuple(self._events))

    def __getitem__(self, index):
        return self._events[index]

    @property
    def events(self) -> tuple[AuditEvent, ...]:
        return tuple(self._events)

    @property
    def head(self) -> str:
        return self._events[-1].hash if self._events else GENESIS_HASH

    def append(self, kind: str | EventKind, payload: dict) -> AuditEvent:
        if isinstance(kind, EventKind):
            kind = kind.value
        if kind not in _KINDS:
            raise ValueError(f"unknown event kind {kind!r}")
        # Detach from the caller; canonical_json also rejects non-encodable payloads here.
        payload = json.loads(canonical_json(copy.deepcopy(payload)))
        seq = len(self._events)
        prev = self.head
        ev = AuditEvent(seq, kind, payload, prev, event_hash(prev, seq, kind, payload))
        self._events.append(ev)
        return ev

    def query(self, **filters) -> list[AuditEvent]:
        return filter_events(self._events, **filters)

    def dumps(self) -> str:
        return "".join(ev.to_line() + "\n" for ev in self._events)

    def export(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_bytes(self.dumps().encode("utf-8"))
        return path

    @classmethod
    def from_events(cls, events: Iterable[AuditEvent]) -> "AuditLog":
        log = cls()
        log._events = list(events)
        return log

    @classmethod
    def load(cls, source: str | bytes | Path) -> "AuditLog":
        """Parse an exported log. Raises ValueError if it is not a valid chain."""
        data = Path(source).read_bytes() if isinstance(source, Path) else source
        events = parse_export(data)
        if events is None or not _verify_events(events):
            raise ValueError("audit log failed verification")
        return cls.from_events(events)


def parse_export(data: str | bytes) -> list[AuditEvent] | None:
    """Decode an NDJSON export; None if any line is not byte-exact canonical form."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError:
            return None
    else:
        text = data
    if text == "":
        return []
    if not text.endswith("\n"):
        return None
    events = []
    for line in text[:-1].split("\n"):
        try:
            obj = json.loads(line)
        except ValueError:
            return None
        if not isinstance(obj, dict) or set(obj) != _EVENT_KEYS:
            return None
        try:
            if canonical_json(obj) != line:
                return None
        except (TypeError, ValueError):
            return None
        seq, kind, payload = obj["seq"], obj["kind"], obj["payload"]
        if isinstance(seq, bool) or not isinstance(seq, int):
            return None
        if not isinstance(kind, str) or not isinstance(payload, dict):
            return None
        if not isinstance(obj["prev_hash"], str) or not isinstance(obj["hash"], str):
            return None
        events.append(AuditEvent(seq, kind, payload, obj["prev_hash"], obj["hash"]))
    return events


def _verify_events(events: Sequence[AuditEvent]) -> bool:
    prev = GENESIS_HASH
    for i, ev in enumerate(events):
        if ev.seq != i or ev.kind not in _KINDS or ev.prev_hash != prev:
            return False
        if not isinstance(ev.hash, str) or not _HEX64.match(ev.hash):
            return False
        try:
            if ev.recompute_hash() != ev.hash:
                return False
        except (TypeError, ValueError):
            return False
        prev = ev.hash
    return True


def verify_chain(log: AuditLog | Sequence[AuditEvent] | bytes | str | Path) -> bool:
    """True iff every event re-hashes from its predecessor back to the genesis anchor.

    Accepts an in-memory log, a sequence of events, exported NDJSON content
    (``str``/``bytes``), or a ``Path`` to an exported file. Never raises on
    malformed input.
    """
    if isinstance(log, Path):
        try:
            log = log.read_bytes()
        except OSError:
            return False
    if isinstance(log, (bytes, str)):
        events = parse_export(log)
        return events is not None and _verify_events(events)
    if isinstance(log, AuditLog):
        return _verify_events(log.events)
    return _verify_events(list(log))
