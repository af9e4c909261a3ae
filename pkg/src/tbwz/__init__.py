"""Burrows-Wheeler compression with run-block tunneling."""

from .errors import (CorruptFileError, CorruptInputError, CorruptStructureError, EstimatorDomainError,
                     InvalidBlockSetError, InvalidInputError, InvariantViolation, TbwzError)
from .pipeline import StatsReport, analyze, compress, decompress, stats

__version__ = "0.1.0"

__all__ = [
    "compress", "decompress", "analyze", "stats", "StatsReport",
    "TbwzError", "InvalidInputError", "CorruptInputError", "CorruptFileError",
    "CorruptStructureError", "InvalidBlockSetError", "InvariantViolation", "EstimatorDomainError",
]
