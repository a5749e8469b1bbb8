"""Model-constructing QF_NRA solver with clause-level look-ahead and propagation."""

from .frontend import load, parse, print_model, to_cnf
from .search import Engine, EngineConfig, Result, Stats, solve

__all__ = ["load", "parse", "print_model", "to_cnf", "Engine", "EngineConfig", "Result", "Stats", "solve"]
