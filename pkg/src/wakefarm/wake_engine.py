"""Top-hat wake model with linear expansion, 3D overlap and squared superposition.

Deficits are computed pairwise in a wind-aligned frame: the centerline
deficit of the upstream rotor decays with downstream distance, is scaled
by the fraction of the downstream rotor disk covered by the expanding
wake cross-section (hub-height differences included), and per-turbine
contributions combine as the root of summed squares.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:
    from .energy_economics import FarmLayout
    from .turbine_model import TurbineSpec

# Turbulence intensity defaults: midpoints of typical offshore/onshore ranges.
TURBULENCE_OFFSHORE = 0.075
TURBULENCE_ONSHORE = 0.15


def expansion_coefficient(turbulence_intensity: float) -> float:
    """Wake growth rate k = 0.38*I + 0.004."""
    if turbulence_intensity <= 0:
        raise ValueError("turbulence intensity must be > 0")
    return 0.38 * turbulence_intensity + 0.004


@dataclass(frozen=True)
class WakeParams:
    """Turbulence intensity and the expansion coefficient derived from it."""

    turbulence_intensity: float
    expansion_coefficient: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.turbulence_intensity <= 0:
            raise ValueError("turbulence intensity must be > 0")
        derived = expansion_coefficient(self.turbulence_intensity)
        if self.expansion_coefficient is None:
            object.__setattr__(self, "expansion_coefficient", derived)
        elif abs(self.expansion_coefficient - derived) > 1e-12:
            raise ValueError("expansion coefficient must equal 0.38*I + 0.004")

    @property
    def k(self) -> float:
        return self.expansion_coefficient


@dataclass(frozen=True)
class WindFramePosition:
    """Coordinates in the wind-aligned frame: x downwind, y crosswind, z hub height (m)."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class DeficitMatrix:
    """Pairwise deficits delta[i, j] (i upstream, j downstream) and the
    per-turbine combined deficit sqrt(sum_i delta[i, j]^2)."""

    pairwise: np.ndarray  # (n, n)
    combined: np.ndarray  # (n,)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("upstream,downstream,delta,combined_downstream\n")
        n = self.pairwise.shape[0]
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                out.write(f"{i},{j},{float(self.pairwise[i, j])!r},{float(self.combined[j])!r}\n")
        return out.getvalue()


def _flow_unit_vectors(theta_deg: float | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Downwind and crosswind unit vectors for a wind-from bearing in degrees."""
    t = np.radians(theta_deg)
    flow = np.stack([-np.sin(t), -np.cos(t)], axis=-1)  # direction the wind blows toward
    cross = np.stack([np.cos(t), -np.sin(t)], axis=-1)
    return flow, cross


def rotate_to_wind_frame(
    positions: Sequence[tuple[float, float, float]] | np.ndarray, theta: float
) -> list[WindFramePosition]:
    """Project site (x=east, y=north, z) coordinates into the frame of a wind
    blowing from bearing theta; the first axis points downwind, z is kept."""
    if not 0.0 <= theta < 360.0:
        raise ValueError("theta must be in [0, 360)")
    pts = np.asarray(positions, dtype=float)
    flow, cross = _flow_unit_vectors(theta)
    down = pts[:, :2] @ flow
    lateral = pts[:, :2] @ cross
    return [WindFramePosition(float(d), float(c), float(p[2])) for d, c, p in zip(down, lateral, pts)]


def centerline_deficit(x: float, ct: float, k: float, d_upstream: float) -> float:
    """Fractional speed deficit on the wake axis at downstream distance x."""
    if x <= 0:
        raise ValueError("downstream distance must be > 0")
    if not 0.0 < ct < 1.0:
        raise ValueError("thrust coefficient must be in (0, 1)")
    if k <= 0 or d_upstream <= 0:
        raise ValueError("k and rotor diameter must be > 0")
    return (1.0 - math.sqrt(1.0 - ct)) / (1.0 + 2.0 * k * x / d_upstream) ** 2


def wake_radius(x: float, d_upstream: float, k: float) -> float:
    """Wake cross-section radius D/2 + k*x at downstream distance x."""
    if x < 0:
        raise ValueError("downstream distance must be >= 0")
    return d_upstream / 2.0 + k * x


def center_distance(y_ij: float, z_i: float, z_j: float) -> float:
    """Distance between wake centerline and downstream rotor center,
    combining crosswind offset and hub-height difference."""
    return math.hypot(y_ij, z_j - z_i)


def _lens_area(r1, r2, d):
    """Intersection area of two circles in the partial-overlap regime
    (vectorized; callers guarantee |r1 - r2| < d < r1 + r2).

    The arccos terms are ill-conditioned within ~1e-6 m of the branch
    boundaries, where cancellation can leave a tiny negative residue; the
    result is clipped into the geometrically valid range.
    """
    d = np.asarray(d, dtype=float)
    a1 = np.clip((d**2 + r1**2 - r2**2) / (2.0 * d * r1), -1.0, 1.0)
    a2 = np.clip((d**2 + r2**2 - r1**2) / (2.0 * d * r2), -1.0, 1.0)
    kernel = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)
    raw = r1**2 * np.arccos(a1) + r2**2 * np.arccos(a2) - 0.5 * np.sqrt(np.maximum(kernel, 0.0))
    return np.clip(raw, 0.0, math.pi * np.minimum(r1, r2) ** 2)


def overlap_area(r_rotor, r_wake, d):
    """Area of the wake disk / rotor disk intersection (m2).

    Branches: zero when separated, the smaller disk when contained,
    otherwise the circular lens; continuous across both boundaries.
    Accepts scalars or broadcastable arrays.
    """
    r_rotor = np.asarray(r_rotor, dtype=float)
    r_wake = np.asarray(r_wake, dtype=float)
    d_arr = np.abs(np.asarray(d, dtype=float))
    if np.any(r_rotor <= 0) or np.any(r_wake <= 0):
        raise ValueError("radii must be > 0")
    contained = d_arr <= np.abs(r_wake - r_rotor)
    separate = d_arr >= r_wake + r_rotor
    partial = ~(contained | separate)
    d_safe = np.where(partial, d_arr, 1.0)
    area = np.where(
        contained,
        math.pi * np.minimum(r_wake, r_rotor) ** 2,
        np.where(partial, _lens_area(r_wake, r_rotor, d_safe), 0.0),
    )
    return float(area) if area.ndim == 0 else area


def overlap_fraction(r_rotor, r_wake, d):
    """Overlap area normalized by the rotor disk area; in [0, 1]."""
    return overlap_area(r_rotor, r_wake, d) / (math.pi * np.asarray(r_rotor, dtype=float) ** 2)


def pair_deficit(
    upstream: WindFramePosition,
    upstream_spec: "TurbineSpec",
    downstream: WindFramePosition,
    downstream_spec: "TurbineSpec",
    params: WakeParams,
) -> float:
    """Deficit contribution of one upstream turbine on one downstream rotor.

    Zero when the downstream turbine is not strictly downwind; otherwise the
    centerline deficit scaled by the rotor overlap fraction.
    """
    x = downstream.x - upstream.x
    if x <= 0:
        return 0.0
    d = center_distance(downstream.y - upstream.y, upstream.z, downstream.z)
    r_wake = wake_radius(x, upstream_spec.rotor_diameter, params.k)
    frac = overlap_fraction(downstream_spec.rotor_diameter / 2.0, r_wake, d)
    return centerline_deficit(x, upstream_spec.ct, params.k, upstream_spec.rotor_diameter) * frac


def _deficit_matrix_arrays(
    down: np.ndarray, cross: np.ndarray, z: np.ndarray,
    diam: np.ndarray, ct: np.ndarray, k: float,
) -> np.ndarray:
    """Pairwise deficit matrix for one wind direction. Rows upstream, columns
    downstream; vectorized over every ordered pair."""
    x = down[None, :] - down[:, None]
    y = cross[None, :] - cross[:, None]
    dz = z[None, :] - z[:, None]
    dist = np.hypot(y, dz)

    active = x > 0.0
    x_safe = np.where(active, x, 1.0)
    di = diam[:, None]
    r_wake = di / 2.0 + k * x_safe
    r_rotor = np.broadcast_to(diam[None, :] / 2.0, x.shape)
    frac = overlap_fraction(r_rotor, r_wake, dist)
    dc = (1.0 - np.sqrt(1.0 - ct[:, None])) / (1.0 + 2.0 * k * x_safe / di) ** 2
    return np.where(active, dc * frac, 0.0)


def combined_deficits(
    positions_xyz: np.ndarray,
    diameters: np.ndarray,
    thrust_coefficients: np.ndarray,
    thetas: np.ndarray,
    params: WakeParams,
) -> np.ndarray:
    """Combined deficit per turbine for each wind-from direction.

    Returns an array of shape (len(thetas), n); deficits are geometric so
    they are independent of the ambient speed magnitude.
    """
    pts = np.asarray(positions_xyz, dtype=float)
    flow, cross_axis = _flow_unit_vectors(np.asarray(thetas, dtype=float))
    out = np.empty((len(flow), len(pts)))
    for s in range(len(flow)):
        down = pts[:, :2] @ flow[s]
        lateral = pts[:, :2] @ cross_axis[s]
        delta = _deficit_matrix_arrays(
            down, lateral, pts[:, 2], diameters, thrust_coefficients, params.k
        )
        out[s] = np.sqrt(np.sum(delta**2, axis=0))
    return out


def effective_speeds(
    layout: "FarmLayout",
    theta: float,
    ambient: Sequence[float] | np.ndarray,
    params: WakeParams,
) -> tuple[np.ndarray, DeficitMatrix]:
    """Wake-adjusted hub-height speed for every turbine under one direction.

    ambient holds each turbine's undisturbed speed at its own hub height;
    the result is ambient * max(0, 1 - combined deficit), elementwise.
    """
    ambient_arr = np.asarray(ambient, dtype=float)
    pts = layout.positions_xyz()
    if ambient_arr.shape != (len(pts),):
        raise ValueError("need exactly one ambient speed per turbine")
    if np.any(ambient_arr < 0):
        raise ValueError("ambient speeds must be >= 0")

    flow, cross_axis = _flow_unit_vectors(theta)
    down = pts[:, :2] @ flow
    lateral = pts[:, :2] @ cross_axis
    diam = np.array([t.spec.rotor_diameter for t in layout.turbines])
    ct = np.array([t.spec.ct for t in layout.turbines])
    delta = _deficit_matrix_arrays(down, lateral, pts[:, 2], diam, ct, params.k)
    combined = np.sqrt(np.sum(delta**2, axis=0))
    v_eff = ambient_arr * np.maximum(0.0, 1.0 - combined)
    return v_eff, DeficitMatrix(pairwise=delta, combined=combined)
