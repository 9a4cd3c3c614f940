import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from secretpi.parser import parse
from secretpi.syntax import NIL, Hide, Input, New, Output, Par, Repl, Spy, TrustedInput

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMES = st.sampled_from(["a", "b", "c", "x", "y"])
NAMESETS = st.frozensets(NAMES, max_size=3)


def processes(repl=True, spy=True, max_leaves=6):
    """Hypothesis strategy for process terms over a small name pool."""

    def extend(children):
        options = [
            st.builds(Input, NAMES, NAMES, NAMESETS, children),
            st.builds(TrustedInput, NAMES, NAMES, NAMESETS, children),
            st.builds(Output, NAMES, NAMES, children),
            st.builds(Par, children, children),
            st.builds(New, NAMES, children),
            st.builds(Hide, NAMES, children),
        ]
        if repl:
            options.append(st.builds(Repl, children))
        if spy:
            options.append(st.builds(Spy, st.sampled_from([frozenset(), frozenset({"a"}),
                                                           frozenset({"x"})]), children))
        return st.one_of(options)

    return st.recursive(st.just(NIL), extend, max_leaves=max_leaves)


@pytest.fixture
def P():
    return parse


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
