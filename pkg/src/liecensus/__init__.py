"""Exhaustive censuses of vertex sets without a common opposite in finite Lie incidence geometries."""

__version__ = "0.1.0"

from .census import CensusConfig, CensusReport, find_blockers, run_census, verify_minimality, verify_theorem_b
from .catalog import FamilyLabel, classify, is_geometric_line
from .geomspec import GeometrySpec, SpecError, parse_spec

__all__ = [
    "CensusConfig", "CensusReport", "FamilyLabel", "GeometrySpec", "SpecError", "classify",
    "find_blockers", "is_geometric_line", "parse_spec", "run_census", "verify_minimality",
    "verify_theorem_b",
]
