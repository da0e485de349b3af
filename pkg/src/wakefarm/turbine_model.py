"""Turbine catalog and power curve.

The built-in catalog spans 8-22 MW machines with capacity-linked hub
heights; rotor diameters default to a 350 W/m2 specific-power assumption.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

SPECIFIC_POWER_W_PER_M2 = 350.0  # sets default rotor size from rated power

# Hub height (m) by rated power (MW) for the three capacity-to-height profiles.
HUB_HEIGHT_PROFILES: dict[str, dict[float, float]] = {
    "case1": {8: 90.0, 11: 110.0, 14: 125.0, 16: 150.0, 18: 160.0, 22: 320.0},
    "case2": {8: 125.0, 11: 125.0, 14: 125.0, 16: 320.0, 18: 320.0, 22: 320.0},
    "case3": {8: 320.0, 11: 320.0, 14: 320.0, 16: 320.0, 18: 320.0, 22: 320.0},
}
CATALOG_RATINGS_MW = (8.0, 11.0, 14.0, 16.0, 18.0, 22.0)


@dataclass(frozen=True)
class TurbineSpec:
    """Static turbine properties; power/thrust coefficients are constants."""

    name: str
    rated_power: float  # MW
    hub_height: float  # m
    rotor_diameter: float  # m
    cp: float = 0.45
    ct: float = 0.80
    cut_in: float = 3.0  # m/s
    cut_out: float = 31.5  # m/s
    air_density: float = 1.225  # kg/m3

    def __post_init__(self):
        if not 0.0 < self.cp < 1.0:
            raise ValueError(f"cp must be in (0, 1), got {self.cp}")
        if not 0.0 < self.ct < 1.0:
            raise ValueError(f"ct must be in (0, 1), got {self.ct}")
        if not 0.0 < self.cut_in < self.cut_out:
            raise ValueError("need 0 < cut_in < cut_out")
        if self.rotor_diameter <= 0.0:
            raise ValueError("rotor diameter must be > 0")
        if self.hub_height <= self.rotor_diameter / 2.0:
            raise ValueError("hub height must exceed the rotor radius")
        if self.rated_power <= 0.0:
            raise ValueError("rated power must be > 0")


def swept_area(spec: TurbineSpec) -> float:
    """Rotor disk area pi*(D/2)^2 in m2."""
    return math.pi * (spec.rotor_diameter / 2.0) ** 2


def available_power(v: float, spec: TurbineSpec) -> float:
    """Aerodynamic power 0.5*rho*A*v^3*Cp in watts."""
    if v < 0:
        raise ValueError("speed must be >= 0")
    return 0.5 * spec.air_density * swept_area(spec) * v**3 * spec.cp


def electrical_power(v: float, spec: TurbineSpec) -> float:
    """Power-curve output in watts: zero outside [cut_in, cut_out], else
    the available power clamped at rated."""
    if v <= spec.cut_in or v >= spec.cut_out:
        return 0.0
    return min(available_power(v, spec), spec.rated_power * 1e6)


def actuator_coefficients(alpha: float) -> tuple[float, float]:
    """Ideal actuator-disk (ct, cp) for axial induction alpha in (0, 0.5)."""
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"axial induction must be in (0, 0.5), got {alpha}")
    ct = 4.0 * alpha * (1.0 - alpha)
    cp = 4.0 * alpha * (1.0 - alpha) ** 2
    return ct, cp


def default_rotor_diameter(rated_mw: float) -> float:
    """Diameter implied by the 350 W/m2 specific-power assumption."""
    area = rated_mw * 1e6 / SPECIFIC_POWER_W_PER_M2
    return 2.0 * math.sqrt(area / math.pi)


@dataclass(frozen=True)
class TurbineCatalog:
    """Ordered turbine options plus the hub-height profile they follow."""

    specs: tuple[TurbineSpec, ...]
    profile: str = "case1"

    def __post_init__(self):
        names = [s.name for s in self.specs]
        if len(set(names)) != len(names):
            raise ValueError("catalog spec names must be unique")

    def __len__(self) -> int:
        return len(self.specs)

    def __getitem__(self, idx: int) -> TurbineSpec:
        return self.specs[idx]

    def by_name(self, name: str) -> TurbineSpec:
        for s in self.specs:
            if s.name == name:
                return s
        raise KeyError(name)

    def rotor_diameters(self) -> np.ndarray:
        return np.array([s.rotor_diameter for s in self.specs])

    def to_json(self) -> str:
        return json.dumps(
            {"profile": self.profile, "specs": [vars(s) for s in self.specs]}, indent=2
        )

    @classmethod
    def from_json(cls, text: str) -> "TurbineCatalog":
        doc = json.loads(text)
        specs = tuple(TurbineSpec(**entry) for entry in doc["specs"])
        return cls(specs=specs, profile=doc.get("profile", "custom"))


def default_catalog(profile: str = "case1", **spec_overrides) -> TurbineCatalog:
    """Build the six-capacity catalog under one of the hub-height profiles.

    spec_overrides (cp, ct, cut_in, cut_out, air_density) apply to every spec.
    """
    if profile not in HUB_HEIGHT_PROFILES:
        raise ValueError(f"unknown hub-height profile {profile!r}")
    heights = HUB_HEIGHT_PROFILES[profile]
    specs = []
    for rated in CATALOG_RATINGS_MW:
        specs.append(
            TurbineSpec(
                name=f"{rated:g}MW",
                rated_power=rated,
                hub_height=heights[rated],
                rotor_diameter=default_rotor_diameter(rated),
                **spec_overrides,
            )
        )
    return TurbineCatalog(specs=tuple(specs), profile=profile)


def with_hub_profile(catalog: TurbineCatalog, profile: str) -> TurbineCatalog:
    """Re-map an existing catalog's hub heights onto another profile."""
    heights = HUB_HEIGHT_PROFILES[profile]
    specs = tuple(replace(s, hub_height=heights[s.rated_power]) for s in catalog.specs)
    return TurbineCatalog(specs=specs, profile=profile)
