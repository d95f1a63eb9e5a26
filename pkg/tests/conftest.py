import sys
from pathlib import Path

import pytest

from pathgames.games import make_game
from pathgames.network import load_network

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_net(name):
    return load_network(FIXTURES / f"{name}.json")


def fixture_game(name, kind="edge"):
    return make_game(fixture_net(name), kind)


@pytest.fixture
def net():
    return fixture_net


@pytest.fixture
def game():
    return fixture_game


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.summary_line(n))
