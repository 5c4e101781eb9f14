"""Scenario description and its YAML file format.

A scenario file has the sections ``radio``, ``geometry``, ``traffic``,
``interference``, ``estimator`` and ``study``. Powers and gains are given in
dBm/dB and converted on load; unknown keys are rejected.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional

import numpy as np
import pydantic
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import InvalidParameterError, ScenarioError
from .radio import InterferenceProfile, RadioConfig, Region, db_to_linear, interference_from_margin


@dataclass(frozen=True)
class Scenario:
    radio: RadioConfig
    interference: InterferenceProfile
    radius_km: float
    road_intensity: float
    user_intensity: float
    n_realizations: int = 1000
    n_user_draws: int = 10
    mc_realizations: int = 1000
    seed: int = 0
    quad_tol: float = 1e-12
    m_cap: int = 4096
    name: str = ""

    def __post_init__(self):
        if not self.radius_km > 0:
            raise InvalidParameterError("radius_km must be > 0")
        if self.road_intensity < 0 or self.user_intensity < 0:
            raise InvalidParameterError("intensities must be >= 0")
        if not math.isclose(self.interference.radius_km, self.radius_km, rel_tol=1e-12):
            raise InvalidParameterError(
                f"interference regions end at {self.interference.radius_km} km, "
                f"cell radius is {self.radius_km} km")

    @property
    def mean_users(self) -> float:
        return self.road_intensity * self.user_intensity * math.pi * self.radius_km ** 2

    @property
    def throughput_bps(self) -> float:
        return self.mean_users * self.radio.service_rate_bps

    def with_throughput(self, tau_bps: float) -> "Scenario":
        """Same scenario carrying cell throughput ``tau`` (``delta = tau / (C* lambda pi R^2)``)."""
        return dataclasses.replace(self, user_intensity=user_intensity_for(
            tau_bps, self.radio.service_rate_bps, self.road_intensity, self.radius_km))

    def with_interference(self, profile: InterferenceProfile) -> "Scenario":
        return dataclasses.replace(self, interference=profile)

    def noise_limited(self) -> "Scenario":
        return self.with_interference(InterferenceProfile.uniform(0.0, self.radius_km))

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)


def user_intensity_for(tau_bps, service_rate_bps, road_intensity, radius_km) -> float:
    if tau_bps < 0:
        raise InvalidParameterError("throughput must be >= 0")
    if tau_bps == 0:
        return 0.0
    if road_intensity <= 0:
        raise InvalidParameterError("a positive throughput needs a positive road intensity")
    return tau_bps / (service_rate_bps * road_intensity * math.pi * radius_km ** 2)


# -- file schema ------------------------------------------------------------

class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RadioSection(_Section):
    power_dbm: float
    prop_const_db: float
    pathloss_exponent: float = Field(gt=1)
    prb_bandwidth_hz: float = Field(gt=0)
    mimo_layers: int = Field(ge=1)
    noise_dbm: float
    sinr_threshold_db: float
    n_max: int = Field(default=10 ** 6, ge=1)


class GeometrySection(_Section):
    radius_km: float = Field(gt=0)
    road_intensity: float = Field(ge=0)


class TrafficSection(_Section):
    service_rate_bps: float = Field(gt=0)
    throughput_bps: Optional[float] = Field(default=None, ge=0)
    user_intensity: Optional[float] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _one_of(self):
        if (self.throughput_bps is None) == (self.user_intensity is None):
            raise ValueError("give exactly one of throughput_bps or user_intensity")
        return self


class RegionEntry(_Section):
    label: str
    inner_km: float = Field(ge=0)
    outer_km: float = Field(gt=0)
    margin_db: float = Field(ge=0)


class InterferenceSection(_Section):
    margin_db: Optional[float] = Field(default=None, ge=0)
    power_mw: Optional[float] = Field(default=None, ge=0)
    regions: Optional[list[RegionEntry]] = None

    @model_validator(mode="after")
    def _one_of(self):
        given = [x is not None for x in (self.margin_db, self.power_mw, self.regions)]
        if sum(given) > 1:
            raise ValueError("give at most one of margin_db, power_mw or regions")
        return self


class EstimatorSection(_Section):
    n_realizations: int = Field(default=1000, ge=1)
    n_user_draws: int = Field(default=10, ge=1)
    mc_realizations: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0)
    quad_tol: float = Field(default=1e-12, gt=0, lt=1e-3)
    m_cap: int = Field(default=4096, ge=1)


class StudySection(_Section):
    type: Literal["congestion", "dimension", "compare", "regions"]
    m_grid: Optional[list[int]] = None
    pi_targets: Optional[list[float]] = None
    tau_grid_bps: Optional[list[float]] = None

    @model_validator(mode="after")
    def _grids(self):
        if self.m_grid is not None and any(m < 0 for m in self.m_grid):
            raise ValueError("m_grid entries must be >= 0")
        if self.pi_targets is not None and not all(0 < p < 1 for p in self.pi_targets):
            raise ValueError("pi_targets must lie in (0, 1)")
        if self.tau_grid_bps is not None:
            g = self.tau_grid_bps
            if not g or any(b <= a for a, b in zip(g, g[1:])) or g[0] < 0:
                raise ValueError("tau_grid_bps must be nonempty, >= 0 and increasing")
        needs = {"congestion": ["m_grid"], "compare": ["m_grid"],
                 "dimension": ["pi_targets", "tau_grid_bps"],
                 "regions": ["pi_targets", "tau_grid_bps"]}[self.type]
        for key in needs:
            if getattr(self, key) is None:
                raise ValueError(f"study type {self.type!r} needs {key}")
        return self


class ScenarioDocument(_Section):
    name: str = ""
    radio: RadioSection
    geometry: GeometrySection
    traffic: TrafficSection
    interference: InterferenceSection = InterferenceSection()
    estimator: EstimatorSection = EstimatorSection()
    study: StudySection


@dataclass(frozen=True)
class ScenarioFile:
    scenario: Scenario
    study: StudySection
    digest: str
    document: ScenarioDocument
    region_labels: tuple[str, ...] = ()


def _interference(doc: ScenarioDocument, noise_linear: float) -> InterferenceProfile:
    sec, radius = doc.interference, doc.geometry.radius_km
    if sec.regions:
        regs = []
        for i, entry in enumerate(sec.regions):
            try:
                level = interference_from_margin(db_to_linear(entry.margin_db), noise_linear)
            except InvalidParameterError as exc:
                raise ScenarioError(str(exc), f"interference.regions.{i}.margin_db") from exc
            regs.append(Region(entry.inner_km, entry.outer_km, level, entry.label))
        try:
            profile = InterferenceProfile(tuple(regs))
        except InvalidParameterError as exc:
            raise ScenarioError(str(exc), "interference.regions") from exc
        if not math.isclose(profile.radius_km, radius, rel_tol=1e-9):
            raise ScenarioError(f"last region must end at the cell radius {radius}",
                                "interference.regions")
        # snap the outer edge onto R exactly
        last = regs[-1]
        regs[-1] = Region(last.inner_km, radius, last.interference_mw, last.label)
        return InterferenceProfile(tuple(regs))
    if sec.power_mw is not None:
        return InterferenceProfile.uniform(sec.power_mw, radius)
    margin = 0.0 if sec.margin_db is None else sec.margin_db
    return InterferenceProfile.uniform(
        interference_from_margin(db_to_linear(margin), noise_linear), radius)


def _validation_error(exc: pydantic.ValidationError) -> ScenarioError:
    errs = exc.errors()
    key = ".".join(str(p) for p in errs[0]["loc"]) or "<root>"
    message = errs[0]["msg"]
    rest = [".".join(str(p) for p in e["loc"]) for e in errs[1:]]
    if rest:
        message += f" (also: {', '.join(rest)})"
    return ScenarioError(message, key)


def parse_scenario(data: dict, seed: int | None = None, n_realizations: int | None = None) -> ScenarioFile:
    """Validate a decoded scenario document and build the :class:`Scenario`."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario document must be a mapping", "<root>")
    try:
        doc = ScenarioDocument.model_validate(data)
    except pydantic.ValidationError as exc:
        raise _validation_error(exc) from None
    r = doc.radio
    try:
        radio = RadioConfig.from_db(
            power_dbm=r.power_dbm, prop_const_db=r.prop_const_db, pathloss_exp=r.pathloss_exponent,
            prb_bandwidth_hz=r.prb_bandwidth_hz, mimo_layers=r.mimo_layers, noise_dbm=r.noise_dbm,
            sinr_threshold_db=r.sinr_threshold_db,
            service_rate_bps=doc.traffic.service_rate_bps, n_max=r.n_max)
    except InvalidParameterError as exc:
        raise ScenarioError(str(exc), "radio") from exc
    g, t, est = doc.geometry, doc.traffic, doc.estimator
    if t.user_intensity is not None:
        delta = t.user_intensity
    else:
        try:
            delta = user_intensity_for(t.throughput_bps, t.service_rate_bps,
                                       g.road_intensity, g.radius_km)
        except InvalidParameterError as exc:
            raise ScenarioError(str(exc), "traffic.throughput_bps") from exc
    scenario = Scenario(
        radio=radio, interference=_interference(doc, radio.noise_linear),
        radius_km=g.radius_km, road_intensity=g.road_intensity, user_intensity=delta,
        n_realizations=est.n_realizations if n_realizations is None else int(n_realizations),
        n_user_draws=est.n_user_draws,
        mc_realizations=est.mc_realizations or est.n_realizations,
        seed=est.seed if seed is None else int(seed),
        quad_tol=est.quad_tol, m_cap=est.m_cap, name=doc.name)
    canonical = json.dumps(doc.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(canonical.encode()).hexdigest()[:16]
    labels = tuple(reg.label for reg in scenario.interference.regions)
    return ScenarioFile(scenario, doc.study, digest, doc, labels)


def load_scenario(path, seed: int | None = None, n_realizations: int | None = None) -> ScenarioFile:
    """Read and validate a YAML scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}" if mark is not None else None
        raise ScenarioError(f"YAML syntax error: {exc}", where) from exc
    return parse_scenario(data, seed=seed, n_realizations=n_realizations)


def m_grid_array(study: StudySection) -> np.ndarray:
    return np.asarray(study.m_grid, dtype=np.int64)
