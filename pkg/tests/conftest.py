from pathlib import Path

import pytest

from procgame.dsl import parse_game

GAMES = Path(__file__).resolve().parent.parent / "games"

ACCEPTANCE_LINES: list[str] = []


def load(name: str):
    return parse_game((GAMES / name).read_text())


@pytest.fixture
def veto():
    return load("veto.pg")


@pytest.fixture
def bos():
    return load("bos.pg")


@pytest.fixture
def extended_bos():
    return load("extended_bos.pg")


@pytest.fixture
def pennies():
    return load("pennies.pg")


@pytest.fixture
def dilemma():
    return load("dilemma.pg")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
