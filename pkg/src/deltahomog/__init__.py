"""Certify or refute delta-homogeneity of two-parameter invariant metrics on G/H."""
from .config import OracleBudget, Tolerances
from .metric import MetricParams, ReductiveSplit
from .roots import RootVector, build_root_system
from .structure import BracketTable, build_bracket_table

__all__ = ["BracketTable", "MetricParams", "OracleBudget", "ReductiveSplit", "RootVector", "Tolerances",
           "build_bracket_table", "build_root_system"]
__version__ = "0.1.0"
