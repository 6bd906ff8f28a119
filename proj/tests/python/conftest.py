import os
import shutil
import subprocess

import pytest


@pytest.fixture
def cli():
    """Runs the command line tool and returns the completed process."""
    exe = os.environ.get("PONVIRT_CLI") or shutil.which("ponvirt")
    if not exe:
        pytest.skip("ponvirt executable not available")

    def run(*args, env=None, cwd=None):
        full_env = dict(os.environ)
        full_env.pop("PONVIRT_OUTPUT_DIR", None)
        full_env.update(env or {})
        return subprocess.run([exe, *map(str, args)], capture_output=True, text=True, env=full_env, cwd=cwd)

    return run
