"""Five-moment two-fluid plasma + Maxwell solver for the GEM challenge."""

__version__ = "0.1.0"

from .model import ModelParams, SpeciesParams, PrimitiveState  # noqa: F401
from .gem import GemConfig, preset  # noqa: F401
