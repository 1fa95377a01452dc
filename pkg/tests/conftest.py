import csv
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


def published_ball_sizes() -> list[tuple[int, int, int, int]]:
    """(lambda, m, d, value) for every value in the published tables."""
    with open(DATA / "ball_sizes.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        lam, n, d = int(row["lambda"]), int(row["n"]), int(row["d"])
        out.append((lam, n // lam, d, int(row["value"])))
    return out


@pytest.fixture(scope="session")
def published():
    return {(lam, m, d): v for lam, m, d, v in published_ball_sizes()}


# acceptance report: one line per criterion in the terminal summary
_CRITERIA: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    if rep.failed:
        detail = detail or str(rep.longrepr).strip().splitlines()[-1]
    status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
    _CRITERIA[number] = (title, status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number} ({title}): {status}  {detail}")
