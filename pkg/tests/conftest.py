import pytest


@pytest.fixture(scope="session")
def spec11():
    from uqcag.presentations import AlgebraSpec

    return AlgebraSpec(1, 1)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        for line in mod.RESULTS[n]:
            terminalreporter.write_line(line)
