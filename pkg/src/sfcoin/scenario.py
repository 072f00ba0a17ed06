"""JSON scenario files: declare accounts, mint the ICO, replay steps, check expectations.

A scenario looks like::

    {
      "decimals": 2,
      "ico": {"supply": "4000.00", "fund": "fund"},
      "accounts": [{"id": "fund", "role": "Fund"}, {"id": "alice", "role": "Investor"}],
      "steps": [{"op": "buy", "investor": "alice", "amount": "120.00"}],
      "expectations": {"balances": {"alice": "120.00"}, "contracts": {}}
    }

Amounts are display decimals (strings preferred). Grid paths in a settle
step's oracle spec resolve relative to the scenario file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema

from .amounts import DEFAULT_DECIMALS, to_display, to_units
from .engine import Engine
from .errors import InvalidAmount, ParseError, SFCError, StepError, ValidationError
from .escrow import DEFAULT_THRESHOLD, SettlementOutcome
from .oracle import GeoRasterOracle, LandCoverGrid, ScriptedOracle
from .parcel import Parcel
from .sweep import SweepReport

_ID = {"type": "string", "minLength": 1}
_AMOUNT = {
    "oneOf": [
        {"type": "string", "pattern": r"^\d+(\.\d+)?$"},
        {"type": "number", "minimum": 0},
    ]
}
_DEG = {"type": "number"}
_PARCEL = {
    "type": "object",
    "properties": {k: _DEG for k in ("lat_min", "lat_max", "lon_min", "lon_max")},
    "required": ["lat_min", "lat_max", "lon_min", "lon_max"],
    "additionalProperties": False,
}
_GRID_REF = {"oneOf": [{"type": "string", "minLength": 1}, {"type": "object"}]}
_ORACLE = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"scripted": {"type": "object", "additionalProperties": {"type": "boolean"}}},
            "required": ["scripted"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "grids": {
                    "type": "object",
                    "properties": {"t0": _GRID_REF, "t1": _GRID_REF},
                    "required": ["t0", "t1"],
                    "additionalProperties": False,
                }
            },
            "required": ["grids"],
            "additionalProperties": False,
        },
    ]
}


def _step(op: str, props: dict, required: list[str]) -> dict:
    return {
        "type": "object",
        "properties": {"op": {"const": op}, **props},
        "required": ["op", *required],
        "additionalProperties": False,
    }


_STEPS = {
    "advance_days": _step("advance_days", {"days": {"type": "integer", "minimum": 0}}, ["days"]),
    "buy": _step("buy", {"investor": _ID, "amount": _AMOUNT}, ["investor", "amount"]),
    "transfer": _step("transfer", {"from": _ID, "to": _ID, "amount": _AMOUNT}, ["from", "to", "amount"]),
    "create_contract": _step(
        "create_contract",
        {
            "landowner": _ID,
            "parcel": _PARCEL,
            "maturity_at": {"type": "integer"},
            "threshold": {"type": "number"},
            "id": _ID,
        },
        ["landowner", "parcel", "maturity_at"],
    ),
    "invest": _step("invest", {"investor": _ID, "contract": _ID, "amount": _AMOUNT}, ["investor", "contract", "amount"]),
    "sweep": _step("sweep", {"at": {"type": "integer", "minimum": 0}}, []),
    "settle": _step("settle", {"contract": _ID, "oracle": _ORACLE}, ["contract", "oracle"]),
}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "decimals": {"type": "integer", "minimum": 0, "maximum": 18},
        "ico": {
            "type": "object",
            "properties": {"supply": _AMOUNT, "fund": _ID},
            "required": ["supply", "fund"],
            "additionalProperties": False,
        },
        "accounts": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"id": _ID, "role": {"enum": ["Fund", "Investor", "Landowner"]}},
                "required": ["id", "role"],
                "additionalProperties": False,
            },
        },
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["op"],
                "properties": {"op": {"enum": sorted(_STEPS)}},
            },
        },
        "expectations": {
            "type": "object",
            "properties": {
                "balances": {"type": "object", "additionalProperties": _AMOUNT},
                "contracts": {
                    "type": "object",
                    "additionalProperties": {"enum": ["Open", "Settled(Paid)", "Settled(Reverted)"]},
                },
                "head_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
            },
            "additionalProperties": False,
        },
    },
    "required": ["ico", "accounts", "steps"],
    "additionalProperties": False,
}

_ACCOUNT_FIELDS = {
    "buy": ("investor",),
    "transfer": ("from", "to"),
    "create_contract": ("landowner",),
    "invest": ("investor",),
}


@dataclass
class Scenario:
    data: dict
    base_dir: Path = field(default_factory=Path.cwd)

    @property
    def decimals(self) -> int:
        return self.data.get("decimals", DEFAULT_DECIMALS)

    @property
    def name(self) -> str:
        return self.data.get("name", "scenario")

    @property
    def steps(self) -> list[dict]:
        return self.data["steps"]


def validate(data: Any, base_dir: Path | None = None) -> Scenario:
    """Schema check plus cross-references: declared accounts, known contracts, exact amounts."""
    try:
        jsonschema.validate(data, SCENARIO_SCHEMA)
        for i, step in enumerate(data["steps"]):
            try:
                jsonschema.validate(step, _STEPS[step["op"]])
            except jsonschema.ValidationError as exc:
                raise ValidationError(f"step {i} ({step['op']}): {exc.message}") from exc
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise ValidationError(f"{path or '<root>'}: {exc.message}") from exc

    decimals = data.get("decimals", DEFAULT_DECIMALS)
    roles: dict[str, str] = {}
    for acct in data["accounts"]:
        if acct["id"] in roles:
            raise ValidationError(f"account {acct['id']!r} declared twice")
        roles[acct["id"]] = acct["role"]
    if sum(1 for r in roles.values() if r == "Fund") != 1:
        raise ValidationError("exactly one account must have role Fund")
    if roles.get(data["ico"]["fund"]) != "Fund":
        raise ValidationError(f"ICO fund {data['ico']['fund']!r} is not the declared Fund account")

    def amount(value, where):
        try:
            to_units(value, decimals)
        except InvalidAmount as exc:
            raise ValidationError(f"{where}: {exc}") from exc

    amount(data["ico"]["supply"], "ico.supply")
    contracts: set[str] = set()
    clock = 0
    for i, step in enumerate(data["steps"]):
        op = step["op"]
        for f in _ACCOUNT_FIELDS.get(op, ()):
            if step[f] not in roles:
                raise ValidationError(f"step {i} ({op}): undeclared account {step[f]!r}")
        if "amount" in step:
            amount(step["amount"], f"step {i} ({op}).amount")
        if op == "advance_days":
            clock += step["days"]
        elif op == "create_contract":
            cid = step.get("id")
            if cid is None:
                n = len(contracts) + 1
                while f"c{n}" in contracts:
                    n += 1
                cid = f"c{n}"
            if cid in contracts:
                raise ValidationError(f"step {i}: contract id {cid!r} reused")
            contracts.add(cid)
        elif op in ("invest", "settle"):
            if step["contract"] not in contracts:
                raise ValidationError(f"step {i} ({op}): contract {step['contract']!r} not created by an earlier step")
        elif op == "sweep" and "at" in step and step["at"] < clock:
            raise ValidationError(f"step {i}: sweep at day {step['at']} is before the clock (day {clock})")
    for acct, value in data.get("expectations", {}).get("balances", {}).items():
        amount(value, f"expectations.balances.{acct}")
    return Scenario(data, base_dir or Path.cwd())


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return validate(data, path.parent)


@dataclass(frozen=True)
class ExpectationResult:
    name: str
    expected: str
    actual: str | None

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class RunReport:
    name: str
    decimals: int
    final_day: int
    balances: dict[str, int]
    contracts: dict[str, str]
    sweeps: list[SweepReport]
    settlements: list[SettlementOutcome]
    head_hash: str
    event_count: int
    expectations: list[ExpectationResult]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.expectations)

    def display_balances(self) -> dict[str, str]:
        return {a: to_display(v, self.decimals) for a, v in self.balances.items()}

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "decimals": self.decimals,
            "final_day": self.final_day,
            "balances": self.display_balances(),
            "contracts": dict(self.contracts),
            "sweeps": [
                {
                    "day": s.sweep_time,
                    "period": s.period,
                    "entries": [
                        {
                            "account": e.account,
                            "balance_before": to_display(e.balance_before, self.decimals),
                            "amount_swept": to_display(e.amount_swept, self.decimals),
                        }
                        for e in s.entries
                    ],
                }
                for s in self.sweeps
            ],
            "head_hash": self.head_hash,
            "event_count": self.event_count,
            "expectations": [
                {"name": e.name, "expected": e.expected, "actual": e.actual, "passed": e.passed}
                for e in self.expectations
            ],
            "passed": self.passed,
        }

    def format(self) -> str:
        lines = [f"scenario: {self.name}", f"day: {self.final_day}", "balances:"]
        width = max((len(a) for a in self.balances), default=0)
        for acct, shown in self.display_balances().items():
            lines.append(f"  {acct:<{width}s}  {shown}")
        if self.contracts:
            lines.append("contracts:")
            for cid, state in self.contracts.items():
                lines.append(f"  {cid}  {state}")
        for s in self.sweeps:
            lines.append(f"sweep day {s.sweep_time}: {to_display(s.total, self.decimals)} to fund")
            for e in s.entries:
                lines.append(
                    f"  {e.account}  {to_display(e.balance_before, self.decimals)}"
                    f" -> -{to_display(e.amount_swept, self.decimals)}"
                )
        lines.append(f"events: {self.event_count}")
        lines.append(f"head: {self.head_hash}")
        for e in self.expectations:
            mark = "PASS" if e.passed else "FAIL"
            lines.append(f"[{mark}] {e.name}: expected {e.expected}, got {e.actual}")
        return "\n".join(lines)


class ScenarioRunner:
    """Drives one fresh engine through a validated scenario."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.engine = Engine(decimals=scenario.decimals)
        self.sweeps: list[SweepReport] = []
        self.settlements: list[SettlementOutcome] = []

    def _units(self, value) -> int:
        return to_units(value, self.scenario.decimals)

    def _grid(self, ref) -> LandCoverGrid:
        if isinstance(ref, dict):
            return LandCoverGrid.from_dict(ref)
        return LandCoverGrid.load(self.scenario.base_dir / ref)

    def _oracle(self, spec: dict):
        if "scripted" in spec:
            return ScriptedOracle(spec["scripted"])
        return GeoRasterOracle(self._grid(spec["grids"]["t0"]), self._grid(spec["grids"]["t1"]))

    def genesis(self) -> None:
        data = self.scenario.data
        for acct in data["accounts"]:
            self.engine.open_account(acct["id"], acct["role"])
        self.engine.ico_mint(self._units(data["ico"]["supply"]), data["ico"]["fund"])

    def apply(self, step: dict) -> None:
        e = self.engine
        op = step["op"]
        if op == "advance_days":
            e.advance_clock(step["days"])
        elif op == "buy":
            e.buy(step["investor"], self._units(step["amount"]))
        elif op == "transfer":
            e.transfer(step["from"], step["to"], self._units(step["amount"]))
        elif op == "create_contract":
            e.create_contract(
                step["landowner"],
                Parcel.from_dict(step["parcel"]),
                step["maturity_at"],
                step.get("threshold", DEFAULT_THRESHOLD),
                step.get("id"),
            )
        elif op == "invest":
            e.invest(step["investor"], step["contract"], self._units(step["amount"]))
        elif op == "sweep":
            self.sweeps.append(e.run_annual_sweep(step.get("at")))
        elif op == "settle":
            self.settlements.append(e.settle(step["contract"], self._oracle(step["oracle"])))
        else:  # pragma: no cover - schema rejects unknown ops
            raise ValidationError(f"unknown op {op!r}")

    def run(self) -> RunReport:
        try:
            self.genesis()
        except SFCError as exc:
            raise StepError(-1, "genesis", exc, self.engine) from exc
        for i, step in enumerate(self.scenario.steps):
            try:
                self.apply(step)
            except SFCError as exc:
                raise StepError(i, step["op"], exc, self.engine) from exc
        return self.report()

    def report(self) -> RunReport:
        e = self.engine
        snap = e.snapshot()
        contracts = {cid: e.contract_status(cid).state.value for cid in e.escrow.contract_ids()}
        checks: list[ExpectationResult] = []
        exp = self.scenario.data.get("expectations", {})
        d = self.scenario.decimals
        for acct, value in exp.get("balances", {}).items():
            actual = snap.balances.get(acct)
            checks.append(
                ExpectationResult(
                    f"balance {acct}",
                    to_display(self._units(value), d),
                    None if actual is None else to_display(actual, d),
                )
            )
        for cid, state in exp.get("contracts", {}).items():
            checks.append(ExpectationResult(f"contract {cid}", state, contracts.get(cid)))
        if "head_hash" in exp:
            checks.append(ExpectationResult("head hash", exp["head_hash"], e.log.head))
        return RunReport(
            name=self.scenario.name,
            decimals=d,
            final_day=e.now(),
            balances=dict(snap.balances),
            contracts=contracts,
            sweeps=list(self.sweeps),
            settlements=list(self.settlements),
            head_hash=e.log.head,
            event_count=len(e.log),
            expectations=checks,
        )


def run_scenario(scenario: Scenario | str | Path | dict) -> RunReport:
    """Execute a scenario against a fresh engine.

    Raises ParseError/ValidationError before anything runs, or StepError
    (carrying the step index and the partially-run engine) if a step fails.
    """
    if isinstance(scenario, dict):
        scenario = validate(scenario)
    elif not isinstance(scenario, Scenario):
        scenario = load_scenario(scenario)
    return ScenarioRunner(scenario).run()
