"""Acceptance checks for the numerical claims the package must reproduce.

Every test reports exactly one line ``ACCEPTANCE <id>: PASS|FAIL | detail``
through the ``acceptance_report`` fixture; the lines are repeated in the
terminal summary. Tolerances are the contractual ones and are not relaxed.
"""
import math
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from plpdim import (
    DemandProfile,
    RealizationSet,
    brute_force_pmf,
    conditional_ccdf,
    congestion_mc_curve,
    dimension,
    load_scenario,
    mean_users_in_disk,
    pgf_eval,
    prb_demand,
    region_study,
    ring_radii,
    sample_plp,
    sample_users_on_realization,
)
from plpdim.cli import main, run_compare
from plpdim.dimensioning import interference_comparison
from plpdim.radio import interference_from_margin, db_to_linear
from plpdim.rng import substream

SCEN = Path(__file__).resolve().parent.parent / "scenarios"


def _load(name, **kw):
    return load_scenario(SCEN / f"{name}.yaml", **kw)


# 1 -------------------------------------------------------------------------

def test_c1_oracle_equivalence(acceptance_report):
    rng = np.random.default_rng(20190601)
    ms = np.arange(0, 101)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 11))
        mu = rng.dirichlet(np.ones(n)) * rng.uniform(0.0, 20.0)
        # knock out some rings so sparse profiles are covered
        mu[rng.random(n) < 0.2] = 0.0
        pmf = brute_force_pmf(DemandProfile(mu))
        tail = np.concatenate((np.cumsum(pmf[::-1])[::-1], [0.0]))
        oracle = tail[np.minimum(ms, tail.size - 1)]
        oracle[0] = 1.0
        quad = conditional_ccdf(mu, ms)[0]
        worst = max(worst, float(np.max(np.abs(quad - oracle))))
    ok = worst <= 1e-8
    acceptance_report("1 oracle-equivalence", ok,
                      f"200 profiles, M=0..100, max|quad-oracle|={worst:.3e} (tol 1e-8)")
    assert ok


# 2 -------------------------------------------------------------------------

@pytest.mark.slow
@pytest.mark.parametrize("name", ["fig2_tau8", "fig2_tau25"])
def test_c2_analytic_vs_monte_carlo(name, acceptance_report):
    sf = _load(name)
    sc = sf.scenario
    ms = np.asarray(sf.study.m_grid)
    assert ms.size == 20 and sc.n_realizations == 1000 and sc.mc_realizations == 10_000
    ana = RealizationSet(sc).estimates(ms, sc.user_intensity)
    mc = congestion_mc_curve(sc, ms)
    good = 0
    worst_z = 0.0
    for a, b in zip(ana, mc):
        se = math.hypot(a.std_error, b.std_error)
        diff = abs(a.value - b.value)
        if diff <= 3 * se:
            good += 1
        if se > 0:
            worst_z = max(worst_z, diff / se)
    frac = good / ms.size
    ok = frac >= 0.95
    acceptance_report(f"2 analytic-vs-MC [{name}]", ok,
                      f"{good}/{ms.size} points within 3 combined SE ({frac:.0%}, need >=95%), "
                      f"max z={worst_z:.2f}")
    assert ok


# 3 -------------------------------------------------------------------------

@pytest.mark.slow
@pytest.mark.parametrize("name", ["fig2_tau8", "fig2_tau25"])
def test_c3_cox_dominates_ppp(name, acceptance_report):
    sf = _load(name)
    top = int(sf.study.m_grid[-1]) * 3
    _, rows = run_compare(sf, list(range(0, top + 1)))
    checked = [(m, c, p, se) for m, c, p, se in rows if 0.01 <= p <= 0.5]
    bad = [m for m, c, p, se in checked if c < p - 3 * se]
    ok = bool(checked) and not bad
    acceptance_report(f"3 cox-dominates-ppp [{name}]", ok,
                      f"{len(checked)} M values with Pi_ppp in [0.01,0.5], violations={bad}")
    assert ok


# 4 -------------------------------------------------------------------------

@pytest.mark.slow
def test_c4_road_intensity_sensitivity(acceptance_report):
    m = {}
    for lam, name in ((5, "fig3_lambda5"), (15, "fig3_lambda15")):
        sc = _load(name).scenario.with_throughput(25e6)
        assert sc.road_intensity == lam
        m[lam] = dimension(sc, 0.01).m_star
    delta = m[5] - m[15]
    ok = 12 <= delta <= 35
    acceptance_report("4 road-intensity-delta", ok,
                      f"m*(lambda=5)={m[5]}, m*(lambda=15)={m[15]}, delta={delta} (need [12,35])")
    assert ok


# 5 -------------------------------------------------------------------------

@pytest.fixture(scope="module")
def fig4():
    return _load("fig4_interference")


@pytest.mark.slow
def test_c5a_interference_delta(fig4, acceptance_report):
    sc = fig4.scenario
    rows = interference_comparison(sc, 0.05, [25e6])
    quiet = rows["noise_limited"][0].result.m_star
    loud = rows["interference"][0].result.m_star
    delta = loud - quiet
    ok = 30 <= delta <= 90
    acceptance_report("5a interference-delta", ok,
                      f"m*(IM profile)={loud}, m*(noise-limited)={quiet}, delta={delta} "
                      f"(need [30,90])")
    assert ok


@pytest.mark.slow
def test_c5b_region_ordering(fig4, acceptance_report):
    tables = region_study(fig4.scenario, 0.05, [25e6])
    m = {label: rows[0].result.m_star for label, rows in tables.items()}
    ok = m["edge"] >= m["middle"] >= m["center"]
    acceptance_report("5b region-ordering", ok,
                      f"edge={m['edge']} >= middle={m['middle']} >= center={m['center']}")
    assert ok


# 6 -------------------------------------------------------------------------

def test_c6a_normalization(acceptance_report):
    sf = _load("fig2_tau25", n_realizations=200)
    sc = sf.scenario
    rs = RealizationSet(sc)
    pi0 = rs.ccdf_matrix([0], sc.user_intensity)[:, 0]
    pgf1 = [pgf_eval(DemandProfile(mu), 1.0) for mu in rs.profiles(sc.user_intensity)]
    ok = bool(np.all(pi0 == 1.0)) and all(v == 1.0 for v in pgf1)
    acceptance_report("6a normalization", ok,
                      f"Pi(0)=1 on {pi0.size} realizations, pgf(1)=1 on {len(pgf1)} profiles")
    assert ok


def test_c6b_monotone_in_m(acceptance_report):
    sf = _load("fig2_tau25", n_realizations=200)
    sc = sf.scenario
    rs = RealizationSet(sc)
    ms = np.arange(0, 301)
    mat = rs.ccdf_matrix(ms, sc.user_intensity)
    per_row = bool(np.all(np.diff(mat, axis=1) <= 0))
    avg = [e.value for e in rs.estimates(ms, sc.user_intensity)]
    averaged = bool(np.all(np.diff(avg) <= 0))
    ok = per_row and averaged
    acceptance_report("6b monotone-in-M", ok,
                      f"M=0..300 on 200 realizations: per-realization={per_row}, average={averaged}")
    assert ok


def test_c6c_ring_partition(paper_radio, acceptance_report):
    rng = np.random.default_rng(6)
    cases = []
    for im_db in (0.0, 1.0, 8.0, 15.0, 40.0, 60.0):
        level = interference_from_margin(db_to_linear(im_db), paper_radio.noise_linear)
        rings = ring_radii(paper_radio, level)
        increasing = bool(np.all(np.diff(rings.radii_km) > 0)) and rings.radii_km[0] == 0
        x = rng.uniform(0.0, 1.2 * rings.radii_km[-1], size=10_000)
        x = x[x > 0]
        consistent = bool(np.all(prb_demand(x, paper_radio, level) == rings.ring_index(x)))
        cases.append((im_db, increasing, consistent))
    ok = all(inc and con for _, inc, con in cases)
    detail = ", ".join(f"IM={db:g}dB inc={inc} part={con}" for db, inc, con in cases)
    acceptance_report("6c ring-partition", ok, f"10^4 points per case: {detail}")
    assert ok


def _lite_scenario(tmp_path):
    text = (SCEN / "fig2_tau8.yaml").read_text()
    text = text.replace("n_realizations: 1000", "n_realizations: 150")
    text = text.replace("mc_realizations: 10000", "mc_realizations: 400")
    path = tmp_path / "lite.yaml"
    path.write_text(text)
    return path


def test_c6d_worker_determinism(tmp_path, acceptance_report):
    path = _lite_scenario(tmp_path)
    blobs = {}
    for workers in (1, 4, 8):
        out = tmp_path / f"w{workers}.csv"
        res = CliRunner().invoke(main, ["congestion", "--scenario", str(path), "--seed", "77",
                                        "--workers", str(workers), "--out", str(out), "--quiet"])
        assert res.exit_code == 0, res.output
        blobs[workers] = out.read_bytes()
    ok = blobs[1] == blobs[4] == blobs[8]
    acceptance_report("6d worker-determinism", ok,
                      f"congestion CSV at 1/4/8 workers byte-identical={ok} ({len(blobs[1])} bytes)")
    assert ok


# 7 -------------------------------------------------------------------------

N_GEOM = 100_000
LAMBDA, RADIUS = 5.0, 0.6


def test_c7a_line_count(acceptance_report):
    rng = substream(7, 0)
    counts = np.fromiter((len(sample_plp(LAMBDA, RADIUS, rng)) for _ in range(N_GEOM)),
                         dtype=float, count=N_GEOM)
    target = 2 * math.pi * LAMBDA * RADIUS
    se = counts.std(ddof=1) / math.sqrt(N_GEOM)
    z = (counts.mean() - target) / se
    ok = abs(z) <= 3
    acceptance_report("7a line-count", ok,
                      f"mean={counts.mean():.4f} vs 2*pi*lambda*R={target:.4f}, z={z:.2f} "
                      f"over {N_GEOM} samples")
    assert ok


def test_c7b_user_count(acceptance_report):
    sc = _load("fig2_tau8").scenario
    delta = sc.user_intensity
    rng = substream(7, 1)
    counts = np.empty(N_GEOM)
    for i in range(N_GEOM):
        plp = sample_plp(LAMBDA, RADIUS, rng)
        counts[i] = len(sample_users_on_realization(plp, delta, rng))
    target = mean_users_in_disk(LAMBDA, delta, RADIUS)
    se = counts.std(ddof=1) / math.sqrt(N_GEOM)
    z = (counts.mean() - target) / se
    ok = abs(z) <= 3
    acceptance_report("7b user-count", ok,
                      f"mean={counts.mean():.4f} vs lambda*delta*pi*R^2={target:.4f}, z={z:.2f}, "
                      f"ratio={counts.mean() / target:.4f} over {N_GEOM} samples")
    assert ok
