"""Exact desk-scale model of a dendrite self-map built from a sparse gap set Z."""

from .exactnat import ExactNat, MaterializationError, exactnat_cmp
from .lattice import VisitLattice
from .mapcore import DendriteMap, OrbitState, Report, default_map
from .scales import ScaleTable, UnmaterializedScaleError, ZSet, build_scale_table
from .space import O, Point, Stream, distance, format_point, hub, parse_point

__all__ = [
    "ExactNat", "MaterializationError", "exactnat_cmp", "VisitLattice", "DendriteMap", "OrbitState",
    "Report", "default_map", "ScaleTable", "UnmaterializedScaleError", "ZSet", "build_scale_table",
    "O", "Point", "Stream", "distance", "format_point", "hub", "parse_point",
]
