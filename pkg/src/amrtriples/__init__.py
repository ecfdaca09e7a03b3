"""Linearize AMR graphs as Penman or triples, decode them back, and score
graph pairs with Smatch."""

from .graph import (
    NON_INVERSE_OF,
    AmrGraph,
    Constant,
    GraphError,
    Triple,
    graph_depth,
    invert_role,
    is_inverse_role,
    normalize_inverse_roles,
    validate,
)
from .penman import PenmanConfig, PenmanError, format_penman, parse_penman, serialize_penman
from .smatch import SmatchResult, smatch, smatch_exact, smatch_hillclimb, smatch_triples
from .triples import TripleConfig, TripleDecodeError, decode_triples, encode_triples, extract_triples

__version__ = "0.1.0"
