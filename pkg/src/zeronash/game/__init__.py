from .model import (
    ActionProfile,
    BayesianGame,
    GameError,
    StageGame,
    TypeProfile,
    compute_pure_nash,
    uniform_prior,
)
from .registry import UnknownGameError, available_games, registry_get
from .textformat import GameFormatError, load_game, parse_game, serialize_game

__all__ = [
    "ActionProfile",
    "BayesianGame",
    "GameError",
    "GameFormatError",
    "StageGame",
    "TypeProfile",
    "UnknownGameError",
    "available_games",
    "compute_pure_nash",
    "load_game",
    "parse_game",
    "registry_get",
    "serialize_game",
    "uniform_prior",
]
