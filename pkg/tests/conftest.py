import datetime as dt

import numpy as np
import pytest

_CRITERIA = []


def write_prices(path, closes, start=dt.date(2021, 8, 1)):
    lines = ["date,close"]
    for i, c in enumerate(closes):
        lines.append(f"{(start + dt.timedelta(days=i)).isoformat()},{float(c)!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def random_walk(seed, n=600):
    rng = np.random.default_rng(seed)
    return list(100.0 * np.exp(np.cumsum(rng.normal(0, 0.02, n))))


@pytest.fixture
def price_dir(tmp_path):
    d = tmp_path / "prices"
    d.mkdir()
    for i, sym in enumerate(("AAA", "BBB", "CCC")):
        write_prices(d / f"{sym}.csv", random_walk(i))
    return d


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _CRITERIA.append((props["criterion"], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _CRITERIA:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}")
