"""Verdict sources for contract settlement.

Two oracles share one interface, ``verdict(contract, at) -> OracleVerdict``:

* ``ScriptedOracle``, a fixed contract_id -> bool table for protocol tests;
* ``GeoRasterOracle``, which measures how much vegetation inside the
  contract's parcel survived between two land-cover snapshots.

The preserved fraction is the area-weighted vegetation sum inside the parcel
at t1 divided by the same sum at t0. Cell weights are the exact overlap area
(degree^2) between each cell rectangle and the parcel. The ratio is not
clamped, so regrowth can push it above 1.

Grid cells are row-major with row 0 at the northern edge (``lat_max``) and
column 0 at the western edge (``lon_min``).
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Protocol

import numpy as np

from .canonical import digest
from .errors import (
    DegenerateParcel,
    GridMismatch,
    InvalidGrid,
    InvalidParcel,
    NoIntersection,
    NoScriptEntry,
)
from .parcel import Parcel


@dataclass(frozen=True)
class LandCoverGrid:
    bbox: Parcel
    rows: int
    cols: int
    cells: tuple[float, ...]
    epoch: int = 0

    def __post_init__(self) -> None:
        for name in ("rows", "cols"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, numbers.Integral) or v <= 0:
                raise InvalidGrid(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if isinstance(self.epoch, bool) or not isinstance(self.epoch, int) or self.epoch < 0:
            raise InvalidGrid(f"epoch must be a non-negative integer day, got {self.epoch!r}")
        cells = tuple(self.cells)
        if len(cells) != self.rows * self.cols:
            raise InvalidGrid(f"expected {self.rows * self.cols} cells, got {len(cells)}")
        for v in cells:
            if isinstance(v, bool) or not isinstance(v, numbers.Real) or not (0.0 <= v <= 1.0):
                raise InvalidGrid(f"cell values must be vegetation fractions in [0, 1], got {v!r}")
        object.__setattr__(self, "cells", tuple(float(v) for v in cells))

    def array(self) -> np.ndarray:
        return np.asarray(self.cells, dtype=np.float64).reshape(self.rows, self.cols)

    def to_dict(self) -> dict:
        return {
            "bbox": self.bbox.to_dict(),
            "rows": self.rows,
            "cols": self.cols,
            "cells": list(self.cells),
            "epoch": self.epoch,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "LandCoverGrid":
        try:
            bbox = Parcel.from_dict(d["bbox"])
            return cls(bbox, d["rows"], d["cols"], tuple(d["cells"]), d.get("epoch", 0))
        except InvalidParcel as exc:
            raise InvalidGrid(f"bad grid bbox: {exc}") from exc
        except (KeyError, TypeError) as exc:
            raise InvalidGrid(f"bad grid object: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "LandCoverGrid":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise InvalidGrid(f"cannot read grid {path}: {exc}") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class OracleVerdict:
    contract_id: str
    preserved_fraction: float
    verdict: bool
    evidence_hash: str
    issued_at: int


class ContractLike(Protocol):
    id: str
    parcel: Parcel
    threshold: float


def _axis_overlap(lo: float, hi: float, n: int, p_lo: float, p_hi: float) -> np.ndarray:
    edges = lo + (hi - lo) * (np.arange(n + 1, dtype=np.float64) / n)
    edges[-1] = hi
    return np.clip(np.minimum(edges[1:], p_hi) - np.maximum(edges[:-1], p_lo), 0.0, None)


def _overlaps(parcel: Parcel, grid: LandCoverGrid) -> tuple[np.ndarray, np.ndarray]:
    b = grid.bbox
    lon = _axis_overlap(b.lon_min, b.lon_max, grid.cols, parcel.lon_min, parcel.lon_max)
    # Ascending latitude bands, flipped so row 0 is the northern band.
    lat = _axis_overlap(b.lat_min, b.lat_max, grid.rows, parcel.lat_min, parcel.lat_max)[::-1]
    return lat, lon


def overlap_weights(parcel: Parcel, grid: LandCoverGrid) -> np.ndarray:
    """(rows, cols) array of cell/parcel intersection areas in degree^2."""
    lat, lon = _overlaps(parcel, grid)
    return np.outer(lat, lon)


def check_compatible(t0: LandCoverGrid, t1: LandCoverGrid) -> None:
    if t0.bbox != t1.bbox or (t0.rows, t0.cols) != (t1.rows, t1.cols):
        raise GridMismatch(
            f"snapshots differ: {t0.rows}x{t0.cols} over {t0.bbox} vs {t1.rows}x{t1.cols} over {t1.bbox}"
        )


def compute_preserved_fraction(parcel: Parcel, grid_t0: LandCoverGrid, grid_t1: LandCoverGrid) -> float:
    check_compatible(grid_t0, grid_t1)
    b = grid_t0.bbox
    if (
        min(parcel.lat_max, b.lat_max) <= max(parcel.lat_min, b.lat_min)
        or min(parcel.lon_max, b.lon_max) <= max(parcel.lon_min, b.lon_min)
    ):
        raise NoIntersection(f"parcel {parcel} does not overlap grid {b}")
    # Each axis scaled so its largest overlap is 1: the ratio is unchanged and
    # tiny overlaps cannot underflow to zero area.
    lat, lon = _overlaps(parcel, grid_t0)
    w = np.outer(lat / lat.max(), lon / lon.max())
    before = float(np.sum(w * grid_t0.array()))
    if not before > 0.0:
        raise DegenerateParcel("no vegetation inside the parcel at t0")
    after = float(np.sum(w * grid_t1.array()))
    return after / before


def evidence_hash(parcel: Parcel, grid_t0: LandCoverGrid, grid_t1: LandCoverGrid) -> str:
    return digest({"parcel": parcel.to_dict(), "grid_t0": grid_t0.to_dict(), "grid_t1": grid_t1.to_dict()})


def geo_verdict(contract: ContractLike, grid_t0: LandCoverGrid, grid_t1: LandCoverGrid, at: int = 0) -> OracleVerdict:
    fraction = compute_preserved_fraction(contract.parcel, grid_t0, grid_t1)
    return OracleVerdict(
        contract_id=contract.id,
        preserved_fraction=fraction,
        verdict=fraction >= contract.threshold,
        evidence_hash=evidence_hash(contract.parcel, grid_t0, grid_t1),
        issued_at=at,
    )


class ScriptedOracle:
    kind = "Scripted"

    def __init__(self, table: Mapping[str, bool]):
        for k, v in table.items():
            if not isinstance(v, bool):
                raise TypeError(f"scripted verdict for {k!r} must be a bool, got {v!r}")
        self._table = dict(table)

    def scripted_verdict(self, contract_id: str, at: int = 0) -> OracleVerdict:
        try:
            verdict = self._table[contract_id]
        except KeyError:
            raise NoScriptEntry(f"no scripted verdict for contract {contract_id!r}") from None
        return OracleVerdict(
            contract_id=contract_id,
            preserved_fraction=1.0 if verdict else 0.0,
            verdict=verdict,
            evidence_hash=digest({"contract_id": contract_id, "verdict": verdict}),
            issued_at=at,
        )

    def verdict(self, contract: ContractLike, at: int = 0) -> OracleVerdict:
        return self.scripted_verdict(contract.id, at)


class GeoRasterOracle:
    kind = "GeoRaster"

    def __init__(self, grid_t0: LandCoverGrid, grid_t1: LandCoverGrid):
        check_compatible(grid_t0, grid_t1)
        self.grid_t0 = grid_t0
        self.grid_t1 = grid_t1

    def verdict(self, contract: ContractLike, at: int = 0) -> OracleVerdict:
        return geo_verdict(contract, self.grid_t0, self.grid_t1, at)

