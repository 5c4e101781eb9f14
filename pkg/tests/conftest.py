import numpy as np
import pytest

from plpdim import InterferenceProfile, RadioConfig, Scenario


@pytest.fixture
def paper_radio():
    return RadioConfig.from_db(power_dbm=60, prop_const_db=130, pathloss_exp=3.5,
                               prb_bandwidth_hz=180e3, mimo_layers=2, noise_dbm=-93,
                               sinr_threshold_db=-10, service_rate_bps=1e6)


@pytest.fixture
def paper_scenario(paper_radio):
    """Noise-limited cell of the numerical section at tau = 8 Mbps."""
    base = Scenario(paper_radio, InterferenceProfile.uniform(0.0, 0.6), 0.6, 5.0, 0.0,
                    n_realizations=200, n_user_draws=1, mc_realizations=2000, seed=11)
    return base.with_throughput(8e6)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report(capsys):
    """Record one PASS/FAIL line per acceptance criterion and echo it live."""

    def report(tag, ok, detail):
        line = f"ACCEPTANCE {tag}: {'PASS' if ok else 'FAIL'} | {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
