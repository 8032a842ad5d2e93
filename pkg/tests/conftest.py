import functools

import pytest

from bisetkit import cache, config
from bisetkit.catalog import make_group


@pytest.fixture(autouse=True, scope="session")
def _no_disk_cache():
    # tests never touch the user's cache unless they opt in with tmp_path
    cache.disable()
    yield


@functools.lru_cache(maxsize=None)
def grp(spec):
    """Session-wide group objects, so per-group caches are shared between tests."""
    return make_group(spec)


@pytest.fixture
def big_aut():
    old = config.MAX_AUT_ORDER
    config.MAX_AUT_ORDER = 2000
    yield
    config.MAX_AUT_ORDER = old


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        title, ok, why = RESULTS[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({why})" if why else ""))
