"""Degree-one invariants of virtual knots, virtual strings and based matrices."""

from .diagram import (
    DiagramError,
    FlatLink,
    ParseError,
    SignedGaussDiagram,
    SingularVirtualString,
    VirtualString,
    parse_knot,
    parse_link,
    parse_string,
)

__version__ = "0.1.0"

__all__ = [
    "DiagramError",
    "FlatLink",
    "ParseError",
    "SignedGaussDiagram",
    "SingularVirtualString",
    "VirtualString",
    "parse_knot",
    "parse_link",
    "parse_string",
]
