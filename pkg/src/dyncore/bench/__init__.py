from .vocab import Vocab
from .gen import generate

__all__ = ["Vocab", "generate"]
