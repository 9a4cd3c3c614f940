"""One test per acceptance criterion, each backed by a named built-in check.

The PASS/FAIL line of every check is echoed in the terminal summary.
"""
import pytest

from secretpi.checks import CHECKS, run_check

RESULTS = []

CRITERIA = [
    ("secret-leak", "an attacker under hide leaks only when it does not send the hidden name"),
    ("trusted-exchange", "trusted input takes only accepted hidden names"),
    ("barbs", "barbs respect hidden names and input sets"),
    ("block-accept", "blocked names are refused and accepted names received"),
    ("spy-observes-new", "a spy sees communication on restricted channels"),
    ("hide-invisible", "communication on hidden channels is silent"),
    ("no-extrusion", "hidden names cannot be sent out"),
    ("matching", "the matching encoding behaves like the right branch"),
    ("dbus-patch", "the bus patch stops the password leak"),
    ("harmony", "one-step reductions match silent transitions"),
    ("soundness", "bisimilar pairs share weak barbs and survive contexts"),
    ("hygiene", "terms print and parse back and renaming avoids capture"),
]


def test_every_check_has_a_criterion():
    assert [name for name, _ in CRITERIA] == list(CHECKS)


@pytest.mark.parametrize("name,claim", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_criterion(name, claim):
    result = run_check(name)
    RESULTS.append(f"{result.line()}  [{claim}]")
    print(result.line())
    for fact, holds in result.facts:
        print(f"  {'ok ' if holds else 'BAD'} {fact}")
    assert result.passed, result.detail
