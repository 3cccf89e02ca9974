import subprocess
import sys

import pytest


def run_sizer(*argv):
    """Drive the simulator through its public CLI; plotkit consumes only the
    files it writes."""
    proc = subprocess.run(
        [sys.executable, "-m", "ris_sizer.cli", *argv],
        capture_output=True,
        text=True,
    )
    if proc.returncode != 0:
        raise RuntimeError(f"ris-sizer {' '.join(argv)} failed:\n{proc.stderr}")
    return proc.stdout


@pytest.fixture(scope="session")
def artifacts_dir(tmp_path_factory):
    """A two-size sweep plus sizing and replay artifacts for one use case."""
    out = tmp_path_factory.mktemp("sizer_out")
    run_sizer("sweep", "--usecase", "7", "--sizes", "10x10,20x20", "--out", str(out))
    run_sizer(
        "size", "--usecase", "7", "--sizes", "10x10,20x20",
        "--thresholds-db", "5,10,20,30", "--out", str(out),
    )
    run_sizer("replay", "--size", "16x16", "--ple", "2,1.785", "--out", str(out))
    return out
