"""Deterministic off-chain engine for the Standing Forest Coin protocol."""

from .amounts import DEFAULT_DECIMALS, to_display, to_units
from .auditlog import GENESIS_HASH, AuditEvent, AuditLog, EventKind, verify_chain
from .engine import Engine
from .escrow import ContractState, ContractView, SettlementOutcome
from .ledger import Ledger, LedgerState, Role
from .oracle import (
    GeoRasterOracle,
    LandCoverGrid,
    OracleVerdict,
    ScriptedOracle,
    compute_preserved_fraction,
    geo_verdict,
)
from .parcel import Parcel
from .scenario import RunReport, load_scenario, run_scenario
from .sweep import SweepPolicy, SweepReport

__all__ = [
    "DEFAULT_DECIMALS",
    "GENESIS_HASH",
    "AuditEvent",
    "AuditLog",
    "ContractState",
    "ContractView",
    "Engine",
    "EventKind",
    "GeoRasterOracle",
    "LandCoverGrid",
    "Ledger",
    "LedgerState",
    "OracleVerdict",
    "Parcel",
    "Role",
    "RunReport",
    "ScriptedOracle",
    "SettlementOutcome",
    "SweepPolicy",
    "SweepReport",
    "compute_preserved_fraction",
    "geo_verdict",
    "load_scenario",
    "run_scenario",
    "to_display",
    "to_units",
    "verify_chain",
]
