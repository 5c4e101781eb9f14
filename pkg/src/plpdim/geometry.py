"""Poisson line process roads, Cox users on them, and the spatial PPP baseline.

Lines are stored by the polar coordinates ``(r, theta)`` of the foot of the
perpendicular dropped from the cell center. A realization keeps exactly the
lines hitting the disk ``B(0, R)``, i.e. the points of a PPP of intensity
``lambda`` on the half-cylinder ``[0, R] x (-pi, pi]``; the expected line count
is ``2 pi lambda R``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError

# Lines are produced in fixed-size blocks so that the k-th line of a
# realization uses the same random draws whatever the intensity is. Raising
# lambda with the same generator state then only appends lines.
_BLOCK = 64


@dataclass(frozen=True)
class Line:
    r: float
    theta: float


@dataclass(frozen=True)
class PlpRealization:
    """Lines of one PLP draw that intersect ``B(0, radius_km)``."""

    r: np.ndarray
    theta: np.ndarray
    radius_km: float
    road_intensity: float
    seed_tag: object = None

    def __post_init__(self):
        if self.r.shape != self.theta.shape:
            raise InvalidParameterError("r and theta must have the same shape")

    def __len__(self):
        return int(self.r.size)

    @property
    def lines(self) -> list[Line]:
        return [Line(float(r), float(t)) for r, t in zip(self.r, self.theta)]

    @classmethod
    def from_lines(cls, lines, radius_km, road_intensity=0.0, seed_tag=None):
        r = np.array([ln.r for ln in lines], dtype=float)
        theta = np.array([ln.theta for ln in lines], dtype=float)
        if np.any(r < 0) or np.any(r > radius_km):
            raise InvalidParameterError("every line must satisfy 0 <= r <= R")
        return cls(r, theta, float(radius_km), float(road_intensity), seed_tag)

    def rotated(self, offset: float) -> "PlpRealization":
        """Same lines turned by ``offset`` radians about the origin."""
        theta = np.pi - np.mod(np.pi - (self.theta + offset), 2 * np.pi)
        return PlpRealization(self.r, theta, self.radius_km, self.road_intensity, self.seed_tag)


@dataclass(frozen=True)
class UserPositions:
    distances_km: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __len__(self):
        return int(self.distances_km.size)


def _check_nonneg(**kw):
    for name, value in kw.items():
        if not (value >= 0) or not math.isfinite(value):
            raise InvalidParameterError(f"{name} must be finite and >= 0, got {value!r}")


def sample_plp(road_intensity: float, radius_km: float, rng: np.random.Generator,
               seed_tag=None) -> PlpRealization:
    """Draw the lines of a PLP hitting the disk of radius ``radius_km``."""
    _check_nonneg(road_intensity=road_intensity, radius_km=radius_km)
    if radius_km <= 0:
        raise InvalidParameterError(f"radius_km must be > 0, got {radius_km!r}")
    horizon = 2.0 * math.pi * road_intensity * radius_km
    arrivals, uniforms = [], []
    clock = 0.0
    while horizon > 0:
        gaps = rng.exponential(size=_BLOCK)
        u = rng.random(size=(_BLOCK, 2))
        times = clock + np.cumsum(gaps)
        keep = times < horizon
        arrivals.append(times[keep])
        uniforms.append(u[keep])
        if not keep[-1]:
            break
        clock = times[-1]
    if uniforms:
        u = np.concatenate(uniforms)
    else:
        u = np.empty((0, 2))
    r = radius_km * u[:, 0]
    theta = np.pi - 2.0 * np.pi * u[:, 1]  # (-pi, pi]
    return PlpRealization(r, theta, float(radius_km), float(road_intensity), seed_tag)


def chord_half_length(r, d):
    """Half-length of the chord cut by a circle of radius ``d`` on a line at distance ``r``."""
    r = np.asarray(r, dtype=float)
    d = np.asarray(d, dtype=float)
    out = np.sqrt(np.maximum(d * d - r * r, 0.0))
    out = np.where(d > r, out, 0.0)
    return float(out) if out.ndim == 0 else out


def sample_users_on_realization(plp: PlpRealization, delta: float,
                                rng: np.random.Generator) -> UserPositions:
    """Linear PPPs of intensity ``delta`` on every chord; returns user distances."""
    _check_nonneg(delta=delta)
    if len(plp) == 0 or delta == 0:
        return UserPositions(np.empty(0))
    half = chord_half_length(plp.r, plp.radius_km)
    half = np.atleast_1d(half)
    counts = rng.poisson(2.0 * delta * half)
    total = int(counts.sum())
    if total == 0:
        return UserPositions(np.empty(0))
    h = np.repeat(half, counts)
    r = np.repeat(plp.r, counts)
    t = h * (2.0 * rng.random(total) - 1.0)
    dist = np.sqrt(r * r + t * t)
    # r^2 + t^2 <= R^2 holds exactly; guard against the last ulp
    np.minimum(dist, plp.radius_km, out=dist)
    return UserPositions(dist)


def sample_spatial_ppp(intensity: float, radius_km: float,
                       rng: np.random.Generator) -> UserPositions:
    """Homogeneous PPP on the disk, returned as distances (CDF ``x^2 / R^2``)."""
    _check_nonneg(intensity=intensity, radius_km=radius_km)
    if radius_km <= 0:
        raise InvalidParameterError(f"radius_km must be > 0, got {radius_km!r}")
    count = int(rng.poisson(intensity * math.pi * radius_km ** 2))
    return UserPositions(radius_km * np.sqrt(rng.random(count)))


def mean_users_in_disk(road_intensity: float, delta: float, radius_km: float) -> float:
    """Expected Cox user count in the disk, ``lambda * delta * pi * R^2``."""
    return road_intensity * delta * math.pi * radius_km ** 2
