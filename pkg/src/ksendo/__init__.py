"""Commutant of the spin action on an even Clifford algebra, computed by exact Galois descent."""

from .cli import analyze, parse_job, run
from .errors import KsendoError

__version__ = "0.1.0"
__all__ = ["KsendoError", "analyze", "parse_job", "run"]
