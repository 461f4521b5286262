import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from makerbreaker import _kernels_py  # noqa: E402

try:
    from makerbreaker import _kernels as _kernels_c  # noqa: E402
except ImportError:  # built without the extension
    _kernels_c = None

BACKENDS = [_kernels_py] + ([_kernels_c] if _kernels_c is not None else [])


@pytest.fixture(params=BACKENDS, ids=lambda m: m.NAME)
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
