"""Command line front end: scenario file in, CSV out."""
from __future__ import annotations

import csv
import io
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .congestion import RealizationSet, conditional_ccdf, congestion_mc_curve, demand_profile_ppp
from .dimensioning import interference_comparison, region_study, sweep_traffic
from .errors import PlpdimError, ScenarioError
from .radio import linear_to_db, ring_radii
from .scenario import ScenarioFile, load_scenario


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".12g")


def write_table(sf: ScenarioFile, command: str, header, rows, out):
    sc = sf.scenario
    buf = io.StringIO()
    buf.write(f"# plpdim {__version__} command={command} scenario={sc.name or '-'} "
              f"hash={sf.digest} seed={sc.seed} realizations={sc.n_realizations}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header) + ["scenario_hash", "seed"])
    for row in rows:
        writer.writerow([fmt(v) for v in row] + [sf.digest, str(sc.seed)])
    text = buf.getvalue()
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
    return text


def _sweep_rows(rows, label=None):
    for row in rows:
        lead = [label] if label is not None else []
        if row.result is None:
            yield lead + [row.tau_bps, row.pi_target, "", "", "", row.error]
        else:
            r = row.result
            yield lead + [row.tau_bps, row.pi_target, r.m_star, r.achieved_pi, r.ci_halfwidth, "ok"]


def _require(sf: ScenarioFile, *keys):
    for key in keys:
        if getattr(sf.study, key) is None:
            raise ScenarioError(f"this command needs study.{key}", f"study.{key}")


def run_congestion(sf: ScenarioFile, m_grid=None, workers=1):
    sc = sf.scenario
    if m_grid is None:
        _require(sf, "m_grid")
        m_grid = sf.study.m_grid
    ms = np.asarray(m_grid, dtype=np.int64)
    analytic = RealizationSet(sc, workers=workers).estimates(ms, sc.user_intensity)
    mc = congestion_mc_curve(sc, ms, workers=workers)
    rows = [[int(m), a.value, b.value, b.std_error, a.std_error] for m, a, b in zip(ms, analytic, mc)]
    return ["M", "pi_analytic", "pi_mc", "mc_stderr", "analytic_stderr"], rows


def run_compare(sf: ScenarioFile, m_grid=None, workers=1):
    sc = sf.scenario
    if m_grid is None:
        _require(sf, "m_grid")
        m_grid = sf.study.m_grid
    ms = np.asarray(m_grid, dtype=np.int64)
    cox = RealizationSet(sc, workers=workers).estimates(ms, sc.user_intensity)
    ppp_mu = sum(
        demand_profile_ppp(sc.mean_users, ring_radii(sc.radio, reg.interference_mw, sc.radius_km),
                           sc.radius_km, (reg.inner_km, reg.outer_km)).mu
        for reg in sc.interference.regions)
    ppp = conditional_ccdf(ppp_mu, ms, sc.quad_tol)[0]
    rows = [[int(m), c.value, p, c.std_error] for m, c, p in zip(ms, cox, ppp)]
    return ["M", "pi_cox", "pi_ppp", "cox_stderr"], rows


def run_dimension(sf: ScenarioFile, workers=1):
    _require(sf, "pi_targets", "tau_grid_bps")
    sc = sf.scenario
    rs = RealizationSet(sc, workers=workers)
    rows = []
    for target in sf.study.pi_targets:
        rows.extend(_sweep_rows(sweep_traffic(sc, target, sf.study.tau_grid_bps, realizations=rs)))
    return ["tau_bps", "pi_target", "m_star", "achieved_pi", "halfwidth", "status"], rows


def run_regions(sf: ScenarioFile, workers=1):
    _require(sf, "pi_targets", "tau_grid_bps")
    sc = sf.scenario
    noise = sc.radio.noise_linear
    margins = {reg.label: linear_to_db(1.0 + reg.interference_mw / noise)
               for reg in sc.interference.regions}
    rows = []
    for target in sf.study.pi_targets:
        tables = region_study(sc, target, sf.study.tau_grid_bps, workers=workers)
        for label, table in tables.items():
            rows.extend([r[0], margins[label]] + r[1:] for r in _sweep_rows(table, label))
        whole = interference_comparison(sc, target, sf.study.tau_grid_bps, workers=workers)
        for label, table in whole.items():
            rows.extend([r[0], ""] + r[1:] for r in _sweep_rows(table, f"cell_{label}"))
    header = ["region", "im_db", "tau_bps", "pi_target", "m_star", "achieved_pi", "halfwidth", "status"]
    return header, rows


def _parse_grid(text):
    if text is None:
        return None
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated integers") from None


def _common(fn):
    fn = click.option("--quiet", is_flag=True, help="Suppress progress messages.")(fn)
    fn = click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
                      help="Threads used for realization sampling.")(fn)
    fn = click.option("--realizations", type=click.IntRange(min=1), default=None,
                      help="Override estimator.n_realizations.")(fn)
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None,
                      help="Output CSV path (default: stdout).")(fn)
    fn = click.option("--seed", type=click.IntRange(min=0, max=2 ** 64 - 1), default=None,
                      help="Override estimator.seed.")(fn)
    fn = click.option("--scenario", "scenario_path", required=True,
                      type=click.Path(exists=True, dir_okay=False), help="Scenario YAML file.")(fn)
    return fn


def _run(command, scenario_path, seed, realizations, out, quiet, job):
    try:
        sf = load_scenario(scenario_path, seed=seed, n_realizations=realizations)
        if not quiet:
            click.echo(f"{command}: {sf.scenario.name or scenario_path} (hash {sf.digest})", err=True)
        header, rows = job(sf)
        write_table(sf, command, header, rows, out)
    except PlpdimError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


@click.group()
@click.version_option(__version__, prog_name="plpdim")
def main():
    """PRB dimensioning for users on Poisson-line-process roads."""


@main.command()
@_common
@click.option("--m-grid", default=None, help="Comma-separated PRB counts (overrides study.m_grid).")
def congestion(scenario_path, seed, out, realizations, workers, quiet, m_grid):
    """Analytic and Monte Carlo congestion probability over a grid of M."""
    grid = _parse_grid(m_grid)
    _run("congestion", scenario_path, seed, realizations, out, quiet,
         lambda sf: run_congestion(sf, grid, workers))


@main.command()
@_common
def dimension(scenario_path, seed, out, realizations, workers, quiet):
    """Dimensioned PRBs for each target and throughput in the study grid."""
    _run("dimension", scenario_path, seed, realizations, out, quiet,
         lambda sf: run_dimension(sf, workers))


@main.command()
@_common
@click.option("--m-grid", default=None, help="Comma-separated PRB counts (overrides study.m_grid).")
def compare(scenario_path, seed, out, realizations, workers, quiet, m_grid):
    """Cox-on-roads against spatial PPP congestion curves."""
    grid = _parse_grid(m_grid)
    _run("compare", scenario_path, seed, realizations, out, quiet,
         lambda sf: run_compare(sf, grid, workers))


@main.command()
@_common
def regions(scenario_path, seed, out, realizations, workers, quiet):
    """Per-region dimensioning plus the interference vs noise-limited comparison."""
    _run("regions", scenario_path, seed, realizations, out, quiet,
         lambda sf: run_regions(sf, workers))


if __name__ == "__main__":
    main()
