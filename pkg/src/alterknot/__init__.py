"""Diagrammatic invariants and cusp-area bounds for alternating knots."""

from .arcs import enumerate_arcs, truncated_length, verify_arc_theorem
from .bounds import main_bounds, verify_all
from .diagram import KnotDiagram, Crossing, Face, DiagramReport, parse_pd, validate, faces
from .dt import parse_dt, to_dt, canonical_dt
from .surfaces import augment, checkerboards
from .twist import detect_twist_regions, twist_number, twist_reduce

__all__ = [
    "KnotDiagram",
    "Crossing",
    "Face",
    "DiagramReport",
    "parse_pd",
    "parse_dt",
    "to_dt",
    "canonical_dt",
    "validate",
    "faces",
    "detect_twist_regions",
    "twist_reduce",
    "twist_number",
    "checkerboards",
    "augment",
    "main_bounds",
    "verify_all",
    "enumerate_arcs",
    "truncated_length",
    "verify_arc_theorem",
]
