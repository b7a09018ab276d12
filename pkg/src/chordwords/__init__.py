"""Infinite words over the chords of a graph, inverse limits of free groups,
graph ends, and loop traces."""
from .concrete import Cat, Empty, Inverse, Lit, OmegaCat, PatternLetter, compile_concrete, render_expr
from .families import (
    Level,
    StarElement,
    WordFamily,
    bounded_check,
    eq_up_to,
    is_reduced_up_to,
    random_family,
    star_inv,
    star_mul,
    star_of,
    unbounded_element,
    validate_coherence,
)
from .graphs import (
    CORE,
    GraphLevels,
    SubspaceMask,
    TreeLevels,
    builtin,
    chord_region,
    components_outside,
    end_threads,
    is_topological_tree_up_to,
    spanning_tree,
    trivial_end_check,
)
from .parsing import ParseError, parse_graph, parse_word
from .pi1 import (
    TraceWord,
    adjacent_cancellation_certificate,
    classify,
    homotopic_up_to,
    ladder_loop_trace,
    pi1_inv,
    pi1_mul,
    realizability_scan,
    t2_loop_trace,
)
from .verdict import Verdict
from .words import E, Letter, Reduction, deletable_positions, e, is_deletable, letters, reduce, render

__version__ = "0.1.0"
