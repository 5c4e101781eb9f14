"""Downlink link budget: SINR, Shannon-MIMO rate, PRB demand and ring radii.

Units: distances in km, powers in mW, rates in bit/s, bandwidth in Hz. Every
dB quantity is converted to linear scale once, when the config is built.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0) if np.ndim(db) else 10.0 ** (db / 10.0)


def linear_to_db(lin):
    return 10.0 * np.log10(lin) if np.ndim(lin) else 10.0 * math.log10(lin)


@dataclass(frozen=True)
class RadioConfig:
    power_linear: float
    prop_const_linear: float
    half_pathloss_exp: float
    prb_bandwidth_hz: float
    mimo_layers: int
    noise_linear: float
    sinr_threshold_linear: float
    service_rate_bps: float
    n_max: int = 10 ** 6

    def __post_init__(self):
        positive = ("power_linear", "prop_const_linear", "prb_bandwidth_hz",
                    "noise_linear", "sinr_threshold_linear", "service_rate_bps")
        for name in positive:
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InvalidParameterError(f"{name} must be finite and > 0, got {value!r}")
        if not self.half_pathloss_exp > 0.5:
            raise InvalidParameterError(
                f"path loss exponent 2b must exceed 1, got 2b={2 * self.half_pathloss_exp!r}")
        if int(self.mimo_layers) != self.mimo_layers or self.mimo_layers < 1:
            raise InvalidParameterError(f"mimo_layers must be an integer >= 1, got {self.mimo_layers!r}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise InvalidParameterError(f"n_max must be an integer >= 1, got {self.n_max!r}")

    @classmethod
    def from_db(cls, *, power_dbm, prop_const_db, pathloss_exp, prb_bandwidth_hz,
                mimo_layers, noise_dbm, sinr_threshold_db, service_rate_bps, n_max=10 ** 6):
        """Build from link-budget figures as usually quoted (dBm, dB, ``2b``)."""
        return cls(
            power_linear=db_to_linear(power_dbm),
            prop_const_linear=db_to_linear(prop_const_db),
            half_pathloss_exp=pathloss_exp / 2.0,
            prb_bandwidth_hz=float(prb_bandwidth_hz),
            mimo_layers=int(mimo_layers),
            noise_linear=db_to_linear(noise_dbm),
            sinr_threshold_linear=db_to_linear(sinr_threshold_db),
            service_rate_bps=float(service_rate_bps),
            n_max=int(n_max),
        )

    @property
    def rate_per_prb_unit(self) -> float:
        """``vartheta * W``, the rate of one PRB at 1 bit/s/Hz per layer."""
        return self.mimo_layers * self.prb_bandwidth_hz


def _check_distance(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or np.any(np.isnan(x)):
        raise InvalidParameterError("distance must be > 0 (path loss is singular at x=0)")
    return x


def _unwrap(out):
    return float(out) if np.ndim(out) == 0 else out


def sinr(x, cfg: RadioConfig, interference=0.0):
    """Linear SINR ``(P x^-2b / a) / (I + sigma^2)`` at distance ``x`` km."""
    x = _check_distance(x)
    received = cfg.power_linear * x ** (-2.0 * cfg.half_pathloss_exp) / cfg.prop_const_linear
    return _unwrap(received / (np.asarray(interference, dtype=float) + cfg.noise_linear))


def throughput(x, cfg: RadioConfig, interference=0.0):
    """Shannon bound ``vartheta W log2(1 + SINR)`` in bit/s."""
    return _unwrap(cfg.rate_per_prb_unit * np.log2(1.0 + np.asarray(sinr(x, cfg, interference))))


def terminal_n(cfg: RadioConfig) -> int:
    """Largest per-user PRB demand, ``min(N_max, ceil(C* / (vartheta W log2(1 + Theta*))))``."""
    edge_rate = cfg.rate_per_prb_unit * math.log2(1.0 + cfg.sinr_threshold_linear)
    return max(1, min(int(cfg.n_max), math.ceil(cfg.service_rate_bps / edge_rate)))


def prb_demand(x, cfg: RadioConfig, interference=0.0):
    """PRBs a user at distance ``x`` needs to reach ``C*``, capped at the terminal demand."""
    rate = np.asarray(throughput(x, cfg, interference))
    with np.errstate(divide="ignore"):
        need = np.ceil(cfg.service_rate_bps / rate)
    n = np.minimum(need, terminal_n(cfg)).astype(np.int64)
    return int(n) if n.ndim == 0 else n


@dataclass(frozen=True)
class RingPartition:
    """Ring radii ``d_0 = 0 < d_1 < ... < d_N``.

    ``radii_km`` holds the closed-form radii. Demand accounting uses
    :attr:`effective_km`, clipped to the cell radius with the last ring pushed
    out to ``R`` so users past ``d_N`` are charged ``N`` PRBs.
    """

    radii_km: np.ndarray
    n_terminal: int
    cell_radius_km: float

    @property
    def effective_km(self) -> np.ndarray:
        eff = np.minimum(self.radii_km, self.cell_radius_km)
        eff[-1] = self.cell_radius_km
        return eff

    def ring_index(self, x):
        """Ring number ``n`` with ``x`` in ``(d~_{n-1}, d~_n]``."""
        eff = self.effective_km
        idx = np.searchsorted(eff, np.asarray(x, dtype=float), side="left")
        idx = np.clip(idx, 1, self.n_terminal)
        return int(idx) if np.ndim(idx) == 0 else idx


def ring_radii(cfg: RadioConfig, interference: float = 0.0, radius_km: float = math.inf) -> RingPartition:
    """Radii where the PRB demand steps from ``n`` to ``n + 1``."""
    if interference < 0:
        raise InvalidParameterError(f"interference must be >= 0, got {interference!r}")
    n_term = terminal_n(cfg)
    n = np.arange(1, n_term + 1, dtype=float)
    scale = cfg.prop_const_linear * (interference + cfg.noise_linear) / cfg.power_linear
    inner = scale * np.expm1(math.log(2.0) * cfg.service_rate_bps / (n * cfg.rate_per_prb_unit))
    d = inner ** (-1.0 / (2.0 * cfg.half_pathloss_exp))
    radii = np.concatenate(([0.0], d))
    return RingPartition(radii, n_term, float(radius_km))


def interference_from_margin(im_linear: float, noise_linear: float) -> float:
    """Interference power behind a noise-rise margin: ``I = (IM - 1) sigma^2``."""
    if not im_linear >= 1:
        raise InvalidParameterError(f"interference margin must be >= 1 (0 dB), got {im_linear!r}")
    return (im_linear - 1.0) * noise_linear


@dataclass(frozen=True)
class Region:
    inner_km: float
    outer_km: float
    interference_mw: float
    label: str = ""


@dataclass(frozen=True)
class InterferenceProfile:
    """Piecewise-constant interference over annuli partitioning ``[0, R]``."""

    regions: tuple[Region, ...]

    def __post_init__(self):
        if not self.regions:
            raise InvalidParameterError("interference profile needs at least one region")
        prev = 0.0
        for reg in self.regions:
            if reg.inner_km != prev or reg.outer_km <= reg.inner_km:
                raise InvalidParameterError(
                    f"regions must tile [0, R] in order without gaps, bad region {reg!r}")
            if reg.interference_mw < 0:
                raise InvalidParameterError(f"interference must be >= 0 in region {reg!r}")
            prev = reg.outer_km

    @classmethod
    def uniform(cls, interference_mw: float, radius_km: float) -> "InterferenceProfile":
        return cls((Region(0.0, float(radius_km), float(interference_mw), "cell"),))

    @classmethod
    def from_margins(cls, bounds_km, im_linear, noise_linear, labels=None) -> "InterferenceProfile":
        """Regions ``(bounds[i], bounds[i+1]]`` with linear interference margins."""
        labels = labels or [f"region{i}" for i in range(len(im_linear))]
        if len(bounds_km) != len(im_linear) + 1:
            raise InvalidParameterError("need one more bound than margins")
        regs = tuple(
            Region(float(bounds_km[i]), float(bounds_km[i + 1]),
                   interference_from_margin(im, noise_linear), labels[i])
            for i, im in enumerate(im_linear))
        return cls(regs)

    @property
    def radius_km(self) -> float:
        return self.regions[-1].outer_km

    def at(self, x):
        """Interference seen at distance(s) ``x``."""
        outer = np.array([r.outer_km for r in self.regions])
        levels = np.array([r.interference_mw for r in self.regions])
        idx = np.searchsorted(outer, np.asarray(x, dtype=float), side="left")
        idx = np.minimum(idx, len(self.regions) - 1)
        return levels[idx]
