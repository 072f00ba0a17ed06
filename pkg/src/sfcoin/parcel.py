from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParcel


@dataclass(frozen=True)
class Parcel:
    """Axis-aligned lat/lon bounding box, in degrees."""

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self) -> None:
        for name in ("lat_min", "lat_max", "lon_min", "lon_max"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidParcel(f"{name} must be a finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if not -90.0 <= self.lat_min < self.lat_max <= 90.0:
            raise InvalidParcel(f"need -90 <= lat_min < lat_max <= 90, got {self.lat_min}, {self.lat_max}")
        if not -180.0 <= self.lon_min < self.lon_max <= 180.0:
            raise InvalidParcel(f"need -180 <= lon_min < lon_max <= 180, got {self.lon_min}, {self.lon_max}")

    @property
    def area(self) -> float:
        """Area in degree^2."""
        return (self.lat_max - self.lat_min) * (self.lon_max - self.lon_min)

    def to_dict(self) -> dict:
        return {
            "lat_min": self.lat_min,
            "lat_max": self.lat_max,
            "lon_min": self.lon_min,
            "lon_max": self.lon_max,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Parcel":
        try:
            return cls(d["lat_min"], d["lat_max"], d["lon_min"], d["lon_max"])
        except (KeyError, TypeError) as exc:
            raise InvalidParcel(f"bad parcel {d!r}") from exc
