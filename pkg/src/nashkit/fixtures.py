"""Bundled example games used by the test suite and handy for demos.

Each fixture is a JSON game document under ``nashkit/fixtures/``:

- ``g333``: a generic 3x3x3 game with ten complex solutions, four real.
- ``selten_horse``: Selten's Horse; one double point outside the simplex.
- ``curve_222``: binary three-player game whose scheme contains a curve.
- ``conic_222``: scheme is a nonsingular conic of totally mixed equilibria.
- ``line_222``: scheme is a line of totally mixed equilibria.
- ``double_223``: (2,2,3) game with one double totally mixed equilibrium.
"""

from __future__ import annotations

from importlib import resources

from .core import Game, parse_game

FIXTURE_NAMES = (
    "g333",
    "selten_horse",
    "curve_222",
    "conic_222",
    "line_222",
    "double_223",
)


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURE_NAMES}")
    return resources.files("nashkit").joinpath("fixtures").joinpath(f"{name}.json").read_text()


def load_fixture(name: str) -> Game:
    return parse_game(fixture_text(name))
