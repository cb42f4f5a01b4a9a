"""1D shuttling-bus geometry: storage sites, manipulation zones, timing.

The bus is a line of ``n_sites`` storage sites, one qubit per site, with a
manipulation zone between every pair of neighbours. Zone ``j`` sits
immediately to the right of site ``j``, so with the default pitch the
layout in micrometres reads

    site 0 (0) | zone 0 (1) | site 1 (2) | zone 1 (3) | site 2 (4) | ...

All quantities are SI internally (metres, seconds); the JSON config
interface speaks um / ns / m/s.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

UM = 1e-6
NS = 1e-9


class LocationKind(Enum):
    STORAGE = "storage"
    ZONE = "zone"


@dataclass(frozen=True)
class Location:
    """A tagged position on the bus: storage site or manipulation zone."""

    kind: LocationKind
    index: int

    @staticmethod
    def site(index: int) -> "Location":
        return Location(LocationKind.STORAGE, index)

    @staticmethod
    def zone(index: int) -> "Location":
        return Location(LocationKind.ZONE, index)

    @property
    def is_site(self) -> bool:
        return self.kind is LocationKind.STORAGE

    def __repr__(self) -> str:
        tag = "Q" if self.is_site else "O"
        return f"{tag}{self.index}"


@dataclass(frozen=True)
class ArchitectureSpec:
    """Geometry and timing constants of the bus.

    n_sites equals both the qubit count and the manipulation-zone count.
    Defaults: 2 um site pitch, 1 um site-to-zone offset, 10 m/s shuttle
    velocity, 20 ns single-qubit and 45 ns two-qubit gates.
    """

    n_sites: int
    site_pitch: float = 2 * UM
    zone_offset: float = 1 * UM
    default_velocity: float = 10.0
    t_1q: float = 20 * NS
    t_2q: float = 45 * NS

    def __post_init__(self) -> None:
        if self.n_sites < 2:
            raise ValueError(f"n_sites must be >= 2, got {self.n_sites}")
        for name in ("site_pitch", "zone_offset", "default_velocity", "t_1q", "t_2q"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")
        if not self.zone_offset < self.site_pitch:
            raise ValueError(
                f"zone_offset ({self.zone_offset}) must be smaller than "
                f"site_pitch ({self.site_pitch})"
            )

    @property
    def n_zones(self) -> int:
        return self.n_sites

    def check_location(self, loc: Location) -> None:
        limit = self.n_sites if loc.is_site else self.n_zones
        if not 0 <= loc.index < limit:
            raise ValueError(f"location {loc!r} out of range for {limit} positions")

    def to_config(self) -> dict:
        """Flat key-value form in um / ns / m/s."""
        return {
            "n_sites": self.n_sites,
            "site_pitch_um": self.site_pitch / UM,
            "zone_offset_um": self.zone_offset / UM,
            "default_velocity_mps": self.default_velocity,
            "t_1q_ns": self.t_1q / NS,
            "t_2q_ns": self.t_2q / NS,
        }

    @classmethod
    def from_config(cls, cfg: dict) -> "ArchitectureSpec":
        return cls(
            n_sites=int(cfg["n_sites"]),
            site_pitch=float(cfg.get("site_pitch_um", 2.0)) * UM,
            zone_offset=float(cfg.get("zone_offset_um", 1.0)) * UM,
            default_velocity=float(cfg.get("default_velocity_mps", 10.0)),
            t_1q=float(cfg.get("t_1q_ns", 20.0)) * NS,
            t_2q=float(cfg.get("t_2q_ns", 45.0)) * NS,
        )


def position(loc: Location, spec: ArchitectureSpec) -> float:
    """Position of a location along the bus, in metres."""
    spec.check_location(loc)
    base = loc.index * spec.site_pitch
    return base if loc.is_site else base + spec.zone_offset


def distance(a: Location, b: Location, spec: ArchitectureSpec) -> float:
    """Absolute distance between two locations, in metres."""
    return abs(position(a, spec) - position(b, spec))


def shuttle_time(dist: float, velocity: float) -> float:
    """Duration of a shuttle covering ``dist`` at ``velocity``."""
    if not velocity > 0:
        raise ValueError(f"velocity must be strictly positive, got {velocity}")
    if dist < 0:
        raise ValueError(f"distance must be nonnegative, got {dist}")
    return dist / velocity
