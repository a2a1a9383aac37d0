"""Aggregation of fragmented enumerative biclustering solutions."""

from ._backend import NAME as BACKEND
from .core import (
    Bicluster,
    DataMatrix,
    FormatError,
    Solution,
    area,
    cells,
    coverage,
    parse_solution,
    remove_non_maximal,
    serialize_solution,
)
from .enumeration import EnumParams, brute_force_enumerate, enumerate_maximal, is_coherent

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Bicluster",
    "DataMatrix",
    "EnumParams",
    "FormatError",
    "Solution",
    "area",
    "brute_force_enumerate",
    "cells",
    "coverage",
    "enumerate_maximal",
    "is_coherent",
    "parse_solution",
    "remove_non_maximal",
    "serialize_solution",
]
