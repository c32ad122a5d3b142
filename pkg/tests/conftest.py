import pytest

from knotapprox.notation import find_entry, load_corpus

# acceptance criteria record (number, title, passed, seconds) here
ACCEPTANCE_RESULTS: list[tuple[int, str, bool, float]] = []


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def entry(corpus):
    return lambda name: find_entry(corpus, name)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, seconds in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} ({seconds:.2f}s)")
