import json
from pathlib import Path

import pytest

from omegalab import arith

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def calibration():
    return json.loads((DATA / "calibration.json").read_text())


@pytest.fixture(scope="session")
def sieve_cache_dir(request):
    return Path(request.config.cache.mkdir("omegalab-sieve"))


@pytest.fixture(scope="session")
def small_table():
    return arith.build_sieve(10**4, ks=[3])


@pytest.fixture(scope="session")
def table(sieve_cache_dir):
    """10^6 sieve with d_3 and d_7, cached across runs."""
    return arith.cached_sieve(10**6, ks=[3, 7], cache=sieve_cache_dir / "t1e6.bin")


@pytest.fixture(scope="session")
def table_1e7(sieve_cache_dir):
    return arith.cached_sieve(10**7, cache=sieve_cache_dir / "t1e7.bin")


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
