"""Vector-cost bimatrix racing games and validation tooling."""

__version__ = "0.1.0"

from . import cost_adjust, explorer, game_core, race_sim  # noqa: F401
