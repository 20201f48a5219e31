"""Reference blackbox classifier service for the vertbench wire protocol."""

from .app import app_from_config, create_app, lexicon_predictor
from .lexicon import Lexicon, load_lexicon, predict, score

__version__ = "0.1.0"
