"""Exact shelling vectors and flag vectors of i-graphs, decorated graphs and relations."""

from . import decorated, graphs, relations  # noqa: F401  (registers link-space builders)
from .algebra import FormalVector, QuotientSpace, convex_membership, psd_probe, row_reduce
from .decorated import BoundaryGraph, OrientedGraph, boundary_cell, oriented_cell
from .errors import FlagvecError, InputError, InvariantError, ResourceError
from .estimators import FlagVectorizer
from .graphs import IGraph, graph_classes, shelling_count
from .io import parse_object, parse_text, serialize
from .linkspace import LinkSpaceKey, RelationBudget, configure, link_space
from .relations import GroupTable, NaryRelation, group_flag_vector
from .shelling import are_equivalent, canonical_form, flag_vector, shelling_vector

__version__ = "0.1.0"

__all__ = [
    "BoundaryGraph",
    "FlagVectorizer",
    "FlagvecError",
    "FormalVector",
    "GroupTable",
    "IGraph",
    "InputError",
    "InvariantError",
    "LinkSpaceKey",
    "NaryRelation",
    "OrientedGraph",
    "QuotientSpace",
    "RelationBudget",
    "ResourceError",
    "are_equivalent",
    "boundary_cell",
    "canonical_form",
    "configure",
    "convex_membership",
    "flag_vector",
    "graph_classes",
    "group_flag_vector",
    "link_space",
    "oriented_cell",
    "parse_object",
    "parse_text",
    "psd_probe",
    "row_reduce",
    "serialize",
    "shelling_count",
    "shelling_vector",
]
