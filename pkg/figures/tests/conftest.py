import subprocess
import sys

import pytest


def _run_simulator(args, output):
    cmd = [sys.executable, "-m", "schwingersim", *args, "--output", str(output)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"simulator CLI failed: {' '.join(cmd)}\n{proc.stderr}")
    return output


@pytest.fixture(scope="session")
def mass_sweep_csv(tmp_path_factory):
    # mass scan used by the heatmap / overlay / comparison figures
    out = tmp_path_factory.mktemp("csv") / "mass_sweep.csv"
    args = [
        "sweep", "--axis", "m", "--values", "0,0.5,1,2",
        "-N", "4", "--w", "1", "--j", "1",
        "--wt-max", "3", "--steps", "48", "--backend", "exact-pure",
    ]
    return _run_simulator(args, out)


@pytest.fixture(scope="session")
def size_sweep_csv(tmp_path_factory):
    # finite-size study CSV
    out = tmp_path_factory.mktemp("csv") / "size_sweep.csv"
    args = [
        "sweep", "--axis", "N", "--values", "4,6,8",
        "--w", "1", "--j", "1", "--m", "1",
        "--wt-max", "3", "--steps", "16", "--backend", "exact-pure",
    ]
    return _run_simulator(args, out)


@pytest.fixture(scope="session")
def evolve_csv(tmp_path_factory):
    # single heavy-mass run where the rate function tracks the density
    out = tmp_path_factory.mktemp("csv") / "evolve.csv"
    args = [
        "evolve", "-N", "4", "--w", "1", "--j", "1", "--m", "3",
        "--wt-max", "2", "--steps", "32", "--backend", "exact-pure",
    ]
    return _run_simulator(args, out)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" in nodeid and "::" in nodeid:
                rows.append((nodeid.split("::")[-1], status.upper()))
    if rows:
        terminalreporter.write_sep("=", "acceptance criteria")
        for name, status in sorted(set(rows)):
            terminalreporter.write_line(f"{status:<7} {name}")
