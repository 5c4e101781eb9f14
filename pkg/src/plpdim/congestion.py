"""PRB demand of a cell and its congestion probability.

Given a road realization, users needing ``n`` PRBs form a Poisson count
``X_n`` with mean ``mu_n``, so the requested total ``Gamma = sum n X_n`` is
compound Poisson with generating function ``exp(sum mu_n (z^n - 1))``. The
tail ``P(Gamma >= M)`` follows from Cauchy's formula on the unit circle,

    1 - (1/pi) e^{-S} int_0^pi e^{p(t)} sin(Mt/2)/sin(t/2) cos((M-1)t/2 - q(t)) dt

with ``S = sum mu_n``, ``p = sum mu_n cos(n t)``, ``q = sum mu_n sin(n t)``.
The integrand is even and 2pi-periodic, so the trapezoid rule on ``K/2``
panels is the ``K``-point rule on the circle. Its only error is aliasing of
probability mass from ``Gamma >= K`` onto lower counts, bounded here with a
Chernoff bound before the integral is evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, stats

from . import kernels
from .errors import InvalidParameterError, OracleResourceError, QuadratureError
from .geometry import PlpRealization, sample_plp, sample_users_on_realization
from .radio import InterferenceProfile, RadioConfig, RingPartition, prb_demand, ring_radii
from .rng import ANALYTIC, MONTE_CARLO, indexed_map, substream

DEFAULT_TOL = 1e-12
MAX_PANELS = 1 << 20


@dataclass(frozen=True)
class DemandProfile:
    """Mean user counts ``mu_n`` for ``n = 1..N``."""

    mu: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        if mu.ndim != 1 or mu.size == 0:
            raise InvalidParameterError("profile must be a non-empty vector")
        if np.any(mu < 0) or not np.all(np.isfinite(mu)):
            raise InvalidParameterError("profile entries must be finite and >= 0")
        object.__setattr__(self, "mu", mu)

    @property
    def n_terminal(self) -> int:
        return self.mu.size

    @property
    def alpha_terminal(self) -> float:
        return float(self.mu.sum())

    @property
    def alphas(self) -> np.ndarray:
        """Prefix sums ``alpha_1..alpha_N``."""
        return np.cumsum(self.mu)

    @property
    def mean_prbs(self) -> float:
        """``E[Gamma] = sum n mu_n``."""
        return float(np.dot(np.arange(1, self.mu.size + 1), self.mu))


@dataclass(frozen=True)
class CongestionEstimate:
    value: float
    std_error: float
    n_samples: int


# -- demand profiles --------------------------------------------------------

def alpha(plp: PlpRealization, d: float, delta: float) -> float:
    """Mean number of users within distance ``d`` on the realization."""
    if len(plp) == 0:
        return 0.0
    return 2.0 * delta * float(kernels.chord_mass(plp.r, np.array([float(d)]))[0])


def _clipped_ring_mass(plp, effective, annulus):
    """Unit-intensity mean users per ring, restricted to an annulus."""
    lo, hi = annulus
    radii = np.clip(effective, lo, hi)
    if len(plp) == 0:
        return np.zeros(effective.size - 1)
    mass = 2.0 * kernels.chord_mass(np.ascontiguousarray(plp.r), np.ascontiguousarray(radii))
    return np.maximum(np.diff(mass), 0.0)


def demand_profile_cox(plp: PlpRealization, rings: RingPartition, delta: float,
                       annulus=None) -> DemandProfile:
    """``mu_n = alpha(d~_n) - alpha(d~_{n-1})``, optionally only inside ``annulus``."""
    if delta < 0:
        raise InvalidParameterError(f"delta must be >= 0, got {delta!r}")
    annulus = annulus or (0.0, rings.cell_radius_km)
    return DemandProfile(delta * _clipped_ring_mass(plp, rings.effective_km, annulus))


def demand_profile_ppp(u: float, rings: RingPartition, radius_km: float,
                       annulus=None) -> DemandProfile:
    """Spatial PPP counterpart ``mu_n = u (d~_n^2 - d~_{n-1}^2) / R^2``."""
    if u < 0:
        raise InvalidParameterError(f"u must be >= 0, got {u!r}")
    lo, hi = annulus or (0.0, radius_km)
    eff = np.clip(rings.effective_km, lo, hi)
    return DemandProfile(u * np.diff(eff ** 2) / radius_km ** 2)


# -- conditional congestion -------------------------------------------------

def _log_tail_bound(mu: np.ndarray, k: int) -> float:
    """log of the Chernoff bound on ``P(Gamma >= k)``."""
    if not mu.any():
        return -math.inf
    n = np.flatnonzero(mu) + 1
    mu = mu[n - 1]
    if k <= float(np.dot(n, mu)):
        return 0.0
    t_hi = min(50.0, 700.0 / n.max())

    def objective(t):
        return float(np.dot(mu, np.expm1(n * t))) - t * k

    res = optimize.minimize_scalar(objective, bounds=(0.0, t_hi), method="bounded",
                                   options={"xatol": 1e-10})
    return min(0.0, float(res.fun))


def panels_for(mu: np.ndarray, max_m: int, tol: float = DEFAULT_TOL,
               max_panels: int = MAX_PANELS) -> int:
    """Smallest panel count (up to a factor 1.06) keeping aliasing error below ``tol``.

    ``mu`` may be a componentwise upper bound for a whole batch of profiles.
    """
    mu = np.asarray(mu, dtype=float)
    log_tol = math.log(tol)
    lo = max(8, math.ceil(max_m / 2))

    def ok(m):
        return _log_tail_bound(mu, 2 * m) <= log_tol

    hi = lo
    while not ok(hi):
        if hi >= max_panels:
            raise QuadratureError(
                f"aliasing bound stays above {tol:g} at {max_panels} panels "
                f"(sum mu = {mu.sum():.6g})",
                panels=hi, bound=math.exp(_log_tail_bound(mu, 2 * hi)))
        lo, hi = hi, min(2 * hi, max_panels)
    if hi == lo:
        return hi
    while hi - lo > max(1, hi // 16):
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def conditional_ccdf(mu, ms, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``P(Gamma >= M)`` for a batch of profiles (rows of ``mu``) and thresholds ``ms``."""
    mu = np.atleast_2d(np.asarray(mu, dtype=np.float64))
    ms = np.atleast_1d(np.asarray(ms, dtype=np.int64))
    if np.any(ms < 0):
        raise InvalidParameterError("M must be >= 0")
    if mu.shape[0] == 0:
        return np.empty((0, ms.size))
    bound = mu.max(axis=0)
    panels = panels_for(bound, int(ms.max(initial=0)), tol)
    out = kernels.ccdf_trapezoid(np.ascontiguousarray(mu), np.ascontiguousarray(ms), panels)
    # an all-zero profile is Gamma = 0 exactly
    empty = ~mu.any(axis=1)
    if empty.any():
        out[np.ix_(empty, ms > 0)] = 0.0
    # Rounding in 1 - acc can lift a far-tail value above its predecessor by
    # ~1e-15. A running minimum over increasing M restores monotonicity and
    # never moves a value further from the true (nonincreasing) tail.
    order = np.argsort(ms, kind="stable")
    out[:, order] = np.minimum.accumulate(out[:, order], axis=1)
    return out


def congestion_conditional(profile: DemandProfile, m: int, tol: float = DEFAULT_TOL) -> float:
    """``P(Gamma >= m | roads)`` from the inversion integral."""
    if m < 0:
        raise InvalidParameterError(f"M must be >= 0, got {m!r}")
    if m == 0:
        return 1.0
    return float(conditional_ccdf(profile.mu[None, :], [m], tol)[0, 0])


def pgf_eval(profile: DemandProfile, z: complex) -> complex:
    """``E[z^Gamma | roads] = exp(sum mu_n z^n - sum mu_n)``."""
    if abs(z) > 1 + 1e-12:
        raise InvalidParameterError("the generating function is evaluated on |z| <= 1")
    powers = np.asarray(z, dtype=complex) ** np.arange(1, profile.n_terminal + 1)
    return complex(np.exp(np.dot(profile.mu, powers) - profile.alpha_terminal))


# -- convolution oracle -----------------------------------------------------

def brute_force_pmf(profile: DemandProfile, tail: float = 1e-12,
                    max_support: int = 10_000_000) -> np.ndarray:
    """pmf of ``Gamma`` by convolving the scaled Poisson pmfs.

    Each ``X_n`` is cut at the smallest ``k`` leaving less than ``tail / N``
    mass above it, so the result misses under ``tail`` in total.
    """
    active = [(n, mu) for n, mu in enumerate(profile.mu, start=1) if mu > 0]
    if not active:
        return np.ones(1)
    per_factor = tail / profile.n_terminal
    cuts = [(n, mu, int(stats.poisson.isf(per_factor, mu))) for n, mu in active]
    support = sum(n * k for n, _, k in cuts) + 1
    if support > max_support:
        raise OracleResourceError(
            f"oracle support {support} exceeds the budget of {max_support} points")
    pmf = np.ones(1)
    for n, mu, k in cuts:
        factor = np.zeros(n * k + 1)
        factor[::n] = stats.poisson.pmf(np.arange(k + 1), mu)
        pmf = np.convolve(pmf, factor)
    return pmf


def brute_force_ccdf(profile: DemandProfile, m: int, tail: float = 1e-12) -> float:
    if m <= 0:
        return 1.0
    pmf = brute_force_pmf(profile, tail)
    return float(pmf[m:].sum())


# -- realization sets and estimators ---------------------------------------

def _region_rings(scenario):
    return [(ring_radii(scenario.radio, reg.interference_mw, scenario.radius_km),
             (reg.inner_km, reg.outer_km)) for reg in scenario.interference.regions]


def unit_profile(plp: PlpRealization, region_rings) -> np.ndarray:
    """Per-ring user mass at ``delta = 1`` summed over interference regions."""
    total = None
    for rings, annulus in region_rings:
        mass = _clipped_ring_mass(plp, rings.effective_km, annulus)
        total = mass if total is None else total + mass
    return total


class RealizationSet:
    """A fixed batch of road realizations reused across every ``M`` and ``delta``.

    Profiles scale linearly in ``delta``, so one batch of chord masses serves
    a whole traffic sweep with common random numbers.
    """

    def __init__(self, scenario, n_realizations=None, seed=None, workers=1, regions=None):
        self.scenario = scenario
        self.n = int(n_realizations or scenario.n_realizations)
        self.seed = scenario.seed if seed is None else int(seed)
        if self.n < 1:
            raise InvalidParameterError("need at least one realization")
        rr = _region_rings(scenario)
        if regions is not None:
            rr = [rr[i] for i in regions]
        self.region_rings = rr

        def one(i):
            plp = sample_plp(scenario.road_intensity, scenario.radius_km,
                             substream(self.seed, ANALYTIC, i), seed_tag=(self.seed, ANALYTIC, i))
            return unit_profile(plp, rr)

        self.unit = np.vstack(indexed_map(one, self.n, workers))
        self.tol = scenario.quad_tol

    def profiles(self, delta: float) -> np.ndarray:
        return delta * self.unit

    def ccdf_matrix(self, ms, delta: float) -> np.ndarray:
        return conditional_ccdf(self.profiles(delta), ms, self.tol)

    def estimates(self, ms, delta: float) -> list[CongestionEstimate]:
        vals = self.ccdf_matrix(ms, delta)
        return [_mean_estimate(vals[:, k]) for k in range(vals.shape[1])]


def _mean_estimate(values: np.ndarray) -> CongestionEstimate:
    n = values.size
    se = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return CongestionEstimate(float(values.mean()), se, n)


def congestion_avg_curve(scenario, ms, n_realizations=None, seed=None, workers=1):
    """``E_roads[P(Gamma >= M | roads)]`` for every ``M`` on one realization set."""
    rs = RealizationSet(scenario, n_realizations, seed, workers)
    return rs.estimates(ms, scenario.user_intensity)


def congestion_avg(scenario, m: int, n_realizations=None, seed=None, workers=1) -> CongestionEstimate:
    return congestion_avg_curve(scenario, [m], n_realizations, seed, workers)[0]


def sample_gamma(plp: PlpRealization, delta: float, cfg: RadioConfig, interference,
                 rng: np.random.Generator) -> int:
    """One draw of the total requested PRBs on a fixed realization."""
    users = sample_users_on_realization(plp, delta, rng)
    if len(users) == 0:
        return 0
    if isinstance(interference, InterferenceProfile):
        level = interference.at(users.distances_km)
    else:
        level = interference
    return int(prb_demand(users.distances_km, cfg, level).sum())


def sample_gammas(scenario, n_realizations, n_user_draws, seed=None, workers=1) -> np.ndarray:
    """``Gamma`` draws of shape ``(n_realizations, n_user_draws)``, fresh roads per row."""
    seed = scenario.seed if seed is None else int(seed)

    def one(i):
        rng = substream(seed, MONTE_CARLO, i)
        plp = sample_plp(scenario.road_intensity, scenario.radius_km, rng,
                         seed_tag=(seed, MONTE_CARLO, i))
        return [sample_gamma(plp, scenario.user_intensity, scenario.radio,
                             scenario.interference, rng) for _ in range(n_user_draws)]

    return np.array(indexed_map(one, n_realizations, workers), dtype=np.int64).reshape(
        n_realizations, n_user_draws)


def congestion_mc_curve(scenario, ms, n_realizations=None, n_user_draws=None,
                        seed=None, workers=1) -> list[CongestionEstimate]:
    """Empirical ``P(Gamma >= M)`` over fresh (roads, users) draws."""
    n_real = int(n_realizations or scenario.mc_realizations)
    n_draw = int(n_user_draws or scenario.n_user_draws)
    if n_real < 1 or n_draw < 1:
        raise InvalidParameterError("realization and draw counts must be >= 1")
    gammas = sample_gammas(scenario, n_real, n_draw, seed, workers)
    out = []
    for m in np.atleast_1d(ms):
        hits = (gammas >= m).astype(float)
        p = float(hits.mean())
        if m <= 0:
            out.append(CongestionEstimate(1.0, 0.0, hits.size))
        elif n_real > 1:
            # draws sharing a realization are correlated; use realization means
            se = float(hits.mean(axis=1).std(ddof=1) / math.sqrt(n_real))
            out.append(CongestionEstimate(p, se, hits.size))
        else:
            out.append(CongestionEstimate(p, math.sqrt(p * (1 - p) / hits.size), hits.size))
    return out


def congestion_mc(scenario, m: int, n_realizations=None, n_user_draws=None,
                  seed=None, workers=1) -> CongestionEstimate:
    return congestion_mc_curve(scenario, [m], n_realizations, n_user_draws, seed, workers)[0]
