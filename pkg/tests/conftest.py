import pytest

from compsem.lexicon import builtin_lexicon


@pytest.fixture(scope="session")
def lex():
    return builtin_lexicon()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = sorted(getattr(mod, "LINES", []), key=lambda l: int(l.split()[2].rstrip(":")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
