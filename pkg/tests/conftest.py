import contextlib
import time

import pytest

_RESULTS: dict[int, tuple[str, str]] = {}


class _Criterion:
    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.detail = ""


@contextlib.contextmanager
def _record(number, title):
    c = _Criterion(number, title)
    start = time.perf_counter()
    try:
        yield c
    except BaseException as ex:
        _RESULTS[number] = ("FAIL", f"{title}: {type(ex).__name__}: {str(ex).splitlines()[0] if str(ex) else ''}")
        print(f"criterion {number}: FAIL {title}")
        raise
    took = time.perf_counter() - start
    line = f"{title} ({c.detail}; {took:.1f}s)" if c.detail else f"{title} ({took:.1f}s)"
    _RESULTS[number] = ("PASS", line)
    print(f"criterion {number}: PASS {line}")


@pytest.fixture
def criterion():
    """Context manager factory: ``with criterion(n, title) as c:`` records PASS/FAIL for criterion n."""
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        status, line = _RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {status} {line}")
