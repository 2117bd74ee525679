"""Birational calculus of weighted graphs: blowups, minimal models, rigidity and standard forms."""

from .formats import FormatError, format_graph, parse, to_dot, to_shorthand
from .graph import (
    GraphError,
    SegmentReport,
    Vertex,
    WeightedGraph,
    are_isomorphic,
    branching_set,
    canonical_key,
    chain,
    cycle,
    degree,
    is_minimal,
    segments,
    validate,
)
from .minimality import (
    Diagram,
    check_graph_lemma,
    dominate,
    is_contractible,
    is_contractible_numeric,
    minimal_model,
    relatively_minimize,
)
from .moves import (
    BirationalSequence,
    Blowdown,
    InnerBlowup,
    OuterBlowup,
    Relabel,
    apply,
    blowdown,
    build_sequence,
    elementary_transformation,
    inner_blowup,
    invert,
    outer_blowup,
)
from .quadform import discriminant, inertia, intersection_matrix
from .rigidity import (
    a1_witness,
    enumerate_minimal_models,
    has_unique_minimal_model,
    is_admissible_mod_earrings,
    is_birationally_rigid,
    is_surface_rigid,
    triangulate_circular,
)
from .standard import StandardForm, standard_form

__version__ = "0.1.0"
