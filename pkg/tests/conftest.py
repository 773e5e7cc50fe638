import contextlib
import io
import time

import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("ci")

SESSION_START = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    # the wall-clock criterion has to run after everything else
    last = [i for i in items if "criterion_11" in i.name]
    items[:] = [i for i in items if i not in last] + last


@pytest.fixture(scope="session")
def validate_cli_run():
    """One real ``bankqf validate`` run, shared by every test that needs it."""
    from bankqf import cli

    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(["validate"])
    return code, out.getvalue(), err.getvalue()
