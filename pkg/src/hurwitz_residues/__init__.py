"""Exact residue classes of prime Hurwitz integers and their analysis."""

from .analysis import EnergyReport, RateReport, average_energy, code_rate, table1
from .graph import ConstellationGraph, EdgeRule, Layout, build_graph, spiral_layout, spring_layout
from .modulo import (
    ConstructionError,
    PrimeModulus,
    ResidueEntry,
    ResidueTable,
    VerificationReport,
    mu,
    mu1,
    mu2,
    residue_table,
)
from .quaternion import HurwitzInt, ParityError, RationalQuaternion, parse_quaternion, units
from .rounding import RoundingMode, round_quaternion, round_scalar

__all__ = [
    "ConstellationGraph",
    "ConstructionError",
    "EdgeRule",
    "EnergyReport",
    "HurwitzInt",
    "Layout",
    "ParityError",
    "PrimeModulus",
    "RateReport",
    "RationalQuaternion",
    "ResidueEntry",
    "ResidueTable",
    "RoundingMode",
    "VerificationReport",
    "average_energy",
    "build_graph",
    "code_rate",
    "mu",
    "mu1",
    "mu2",
    "parse_quaternion",
    "residue_table",
    "round_quaternion",
    "round_scalar",
    "spiral_layout",
    "spring_layout",
    "table1",
    "units",
]
