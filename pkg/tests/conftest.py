import sys
from importlib.resources import files
from pathlib import Path

import pytest

from predsup.automaton import load_automaton
from predsup.prediction import load_property, vec
from predsup.infostate import InfoState
from predsup.synthesis import synthesize

sys.path.insert(0, str(Path(__file__).parent))

DATA = files("predsup") / "data"


@pytest.fixture(scope="session")
def fig1():
    return load_automaton(DATA / "fig1.json")


@pytest.fixture(scope="session")
def fig1_spec(fig1):
    return load_property(fig1, DATA / "fig1_property.json")


@pytest.fixture(scope="session")
def fig1_result(fig1, fig1_spec):
    return synthesize(fig1, fig1_spec)


@pytest.fixture(scope="session")
def s1(fig1, fig1_spec):
    return synthesize(fig1, fig1_spec, prefer=fig1.alphabet - {"a"}).structure


@pytest.fixture(scope="session")
def s2(fig1_result):
    return fig1_result.structure


def info(G, **entries):
    """``info(G, **{"5": "NYN", "6": "NNN"})``"""
    return InfoState.of({G.index(x): vec(v) for x, v in entries.items()})


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, in criterion order."""
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if rep.when == "call" and "criterion" in props:
                verdict = "PASS" if outcome == "passed" else "FAIL"
                lines.append((props["criterion"], f"criterion {props['criterion']}: {verdict}  {props.get('detail', '')}"))
    if lines:
        terminalreporter.section("acceptance")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
