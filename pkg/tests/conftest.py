import pytest

from suites import ACCEPTANCE

from modalspec.lts import Lts

FIXTURES = {
    "I": Lts(1, 0, frozenset()),
    "LOOP": Lts(1, 0, frozenset({(0, "a", 0)})),
    # a.(b + c)
    "DET": Lts(4, 0, frozenset({(0, "a", 1), (1, "b", 2), (1, "c", 3)})),
    # a.b + a.c
    "NDET": Lts(5, 0, frozenset({(0, "a", 1), (1, "b", 2), (0, "a", 3), (3, "c", 4)})),
    # a + a.b
    "P": Lts(4, 0, frozenset({(0, "a", 1), (0, "a", 2), (2, "b", 3)})),
    # a.b
    "Q": Lts(3, 0, frozenset({(0, "a", 1), (1, "b", 2)})),
}



@pytest.fixture
def fx():
    return dict(FIXTURES)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda n: int(n[2:].split()[0])):
        passed, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
