import pytest

from isoentropy.observables import bbm_report, heisenberg_report
from isoentropy.states import StateLabel

FULL_GAMMAS = (1.5, 2.5, 3.5, 4.5, 5.5, 6.5)
FULL_M_MAX = 10


class ReportCache:
    """Per-session memo of entropy and uncertainty reports; the full grid costs about a minute."""

    def __init__(self):
        self._entropy = {}
        self._uncertainty = {}

    def entropy(self, m, gamma):
        key = (m, gamma)
        if key not in self._entropy:
            self._entropy[key] = bbm_report(StateLabel(m, gamma))
        return self._entropy[key]

    def uncertainty(self, m, gamma):
        key = (m, gamma)
        if key not in self._uncertainty:
            self._uncertainty[key] = heisenberg_report(StateLabel(m, gamma))
        return self._uncertainty[key]

    def grid(self):
        return [(m, g) for g in FULL_GAMMAS for m in range(FULL_M_MAX + 1)]


@pytest.fixture(scope="session")
def reports():
    return ReportCache()


ACCEPTANCE_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_LINES] = []


@pytest.fixture
def acceptance_log(request):
    """Print a criterion verdict and keep it for the end-of-run summary."""

    def log(line):
        print(line)
        request.config.stash[ACCEPTANCE_LINES].append(line)

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
