"""Smallest PRB count meeting a congestion target, and the studies built on it."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .congestion import CongestionEstimate, RealizationSet
from .errors import InvalidParameterError, SearchExhaustedError

Z95 = 1.959963984540054


@dataclass(frozen=True)
class DimensioningResult:
    m_star: int
    achieved_pi: float
    pi_target: float
    ci_halfwidth: float


@dataclass(frozen=True)
class SweepRow:
    tau_bps: float
    pi_target: float
    result: Optional[DimensioningResult]
    error: str = ""


def solve_min_m(pi_of: Callable[[int], CongestionEstimate], pi_target: float,
                cap: int = 4096) -> tuple[int, CongestionEstimate]:
    """Minimal ``M >= 1`` with ``pi_of(M) <= pi_target``.

    ``pi_of`` must be a deterministic non-increasing function of ``M`` (common
    random numbers). Exponential bracketing, then bisection.
    """
    if not 0 < pi_target < 1:
        raise InvalidParameterError(f"pi_target must lie in (0, 1), got {pi_target!r}")
    cache: dict[int, CongestionEstimate] = {}

    def ok(m):
        if m not in cache:
            cache[m] = pi_of(m)
        return cache[m].value <= pi_target

    lo, hi = 0, 1  # Pi(0) = 1 > target
    while not ok(hi):
        if hi >= cap:
            raise SearchExhaustedError(
                f"congestion target {pi_target:g} not reached with M <= {cap} "
                f"(Pi({cap}) = {cache[hi].value:.6g})", cap=cap, pi_at_cap=cache[hi].value)
        lo, hi = hi, min(2 * hi, cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi, cache[hi]


def _result(m, est, pi_target):
    return DimensioningResult(m, est.value, pi_target, Z95 * est.std_error)


def dimension(scenario, pi_target: float, seed=None, workers=1, n_realizations=None,
              realizations: Optional[RealizationSet] = None) -> DimensioningResult:
    """Solve ``Pi(M, tau) = Pi*`` for the scenario's traffic on one realization set."""
    rs = realizations or RealizationSet(scenario, n_realizations, seed, workers)
    delta = scenario.user_intensity

    def pi_of(m):
        return rs.estimates([m], delta)[0]

    m, est = solve_min_m(pi_of, pi_target, scenario.m_cap)
    return _result(m, est, pi_target)


def sweep_traffic(scenario, pi_target: float, tau_grid, seed=None, workers=1,
                  n_realizations=None, realizations=None) -> list[SweepRow]:
    """One solve per throughput value, all on the same realization set."""
    tau_grid = list(tau_grid)
    if not tau_grid:
        raise InvalidParameterError("tau grid is empty")
    if any(b <= a for a, b in zip(tau_grid, tau_grid[1:])):
        raise InvalidParameterError("tau grid must be increasing")
    rs = realizations or RealizationSet(scenario, n_realizations, seed, workers)
    rows = []
    for tau in tau_grid:
        sc = scenario.with_throughput(tau)
        try:
            res = dimension(sc, pi_target, realizations=rs)
            rows.append(SweepRow(tau, pi_target, res))
        except SearchExhaustedError as exc:
            rows.append(SweepRow(tau, pi_target, None, f"search_exhausted:pi_at_cap={exc.pi_at_cap:.6g}"))
    return rows


def region_study(scenario, pi_target: float, tau_grid, seed=None, workers=1,
                 n_realizations=None) -> dict[str, list[SweepRow]]:
    """Dimension each interference region on its own.

    ``tau`` is the whole-cell throughput; a region gets the users its annulus
    holds at the global road-user intensity. Every region sees the same roads.
    """
    regions = scenario.interference.regions
    if len(regions) < 2:
        raise InvalidParameterError("region study needs an interference profile with several annuli")
    tables = {}
    for i, reg in enumerate(regions):
        rs = RealizationSet(scenario, n_realizations, seed, workers, regions=[i])
        tables[reg.label or f"region{i}"] = sweep_traffic(
            scenario, pi_target, tau_grid, realizations=rs)
    return tables


def interference_comparison(scenario, pi_target: float, tau_grid, seed=None, workers=1,
                            n_realizations=None) -> dict[str, list[SweepRow]]:
    """Whole-cell dimensioning with the scenario's interference and without any."""
    out = {}
    for label, sc in (("noise_limited", scenario.noise_limited()), ("interference", scenario)):
        out[label] = sweep_traffic(sc, pi_target, tau_grid, seed, workers, n_realizations)
    return out
