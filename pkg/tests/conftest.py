import json
import os
import sys
from pathlib import Path

import pytest

from cracklat import kernels

FIXTURES = Path(__file__).parent / "fixtures"
sys.path.insert(0, str(Path(__file__).parent))

BACKENDS = ["python"] + (["cython"] if kernels.compiled_available() else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    prev = kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(prev)


@pytest.fixture(scope="session")
def polygons():
    """Every reflexive polygon with primitive vertices in [-2,2]^2 (brute-force enumeration, frozen)."""
    return [tuple(map(tuple, V)) for V in json.loads((FIXTURES / "reflexive_polygons_box2.json").read_text())]


@pytest.fixture(scope="session")
def ks3_text():
    return (FIXTURES / "reflexive_3d.palp").read_text()


def pytest_report_header(config):
    return f"cracklat kernels: {kernels.BACKEND} (CRACKLAT_PURE_PYTHON={os.environ.get('CRACKLAT_PURE_PYTHON', '')})"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
