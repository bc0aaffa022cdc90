import os
import subprocess
import sys

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def run_cli(*args, check=None):
    """Run the command-line tool in a subprocess; returns the CompletedProcess."""
    proc = subprocess.run([sys.executable, "-m", "wormhole_dirac", *map(str, args)],
                          capture_output=True, text=True)
    if check is not None:
        assert proc.returncode == check, proc.stderr
    return proc


@pytest.fixture
def golden():
    return lambda name: os.path.join(GOLDEN, name)
