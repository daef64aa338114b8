from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from geowalk.lamplighter import LampConfig, LampState  # noqa: E402
from geowalk.tree import ReducedWord  # noqa: E402

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


def to_word(letters) -> ReducedWord:
    return ReducedWord.from_letters(letters)


def to_state(element, modulus: int) -> LampState:
    pos, lamps = element
    return LampState(to_word(pos), LampConfig(modulus, {to_word(v): x for v, x in lamps}))


def from_state(g: LampState):
    return (g.pos.letters(), frozenset((v.letters(), x) for v, x in g.lamps.items()))


def letter_lists(rank: int = 2, max_size: int = 12):
    return st.lists(st.sampled_from(oracles.letters(rank)), max_size=max_size)


def words(rank: int = 2, max_size: int = 12):
    return letter_lists(rank, max_size).map(to_word)


def lamp_states(modulus: int = 2, rank: int = 2, max_pos: int = 6, max_lamps: int = 4):
    lamp = st.tuples(letter_lists(rank, 4).map(oracles.reduce_word), st.integers(1, modulus - 1))
    return st.builds(
        lambda pos, lamps: to_state((oracles.reduce_word(pos), frozenset(dict(lamps).items())), modulus),
        letter_lists(rank, max_pos),
        st.lists(lamp, max_size=max_lamps),
    )


@pytest.fixture(scope="session")
def lamp_table_2():
    """BFS word lengths on the radius-8 ball of Z_2 wr F_2 (oracle representation)."""
    return oracles.lamp_ball(2, 2, 8)


@pytest.fixture(scope="session")
def lamp_table_3():
    return oracles.lamp_ball(3, 2, 6)


@pytest.fixture(scope="session")
def lamp_metric_2():
    """Exact lengths up to 12 in Z_2 wr F_2."""
    return oracles.LampMetric(2, 2, 8, 4)


# ---------------------------------------------------------------------------
# Acceptance reporting: one line per criterion at the end of the run.

_VERDICTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def verdict():
    def record(number: int, passed: bool, detail: str) -> None:
        _VERDICTS[number] = (bool(passed), detail)
        print(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        passed, detail = _VERDICTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
