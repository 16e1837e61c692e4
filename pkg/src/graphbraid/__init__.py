"""Presentations of graph braid groups via a discrete gradient field on UD^n."""
from .config_complex import CellCapExceeded, ConfigurationComplex
from .graph_model import (
    EmbeddedGraph,
    GraphError,
    VertexOrder,
    choose_maximal_tree,
    load_graph,
    order_vertices,
    parse_graph,
    prepare,
    subdivide_for,
)
from .homology_oracle import h1_rank, homology
from .morse_field import FieldError, MorseField, Tag, critical_cells, validate_field
from .notation import Notation, NotationError
from .presentation import GroupPresentation, Presenter, generator_count_formula, present, radial_rank
from .rewrite_engine import RewriteSystem

__all__ = [
    "CellCapExceeded", "ConfigurationComplex", "EmbeddedGraph", "FieldError", "GraphError",
    "GroupPresentation", "MorseField", "Notation", "NotationError", "Presenter", "RewriteSystem",
    "Tag", "VertexOrder", "choose_maximal_tree", "critical_cells", "generator_count_formula",
    "h1_rank", "homology", "load_graph", "order_vertices", "parse_graph", "prepare", "present",
    "radial_rank", "subdivide_for", "validate_field",
]
