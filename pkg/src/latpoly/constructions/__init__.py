"""Executable versions of the injective maps used in the adsorption bounds."""

from .bridges import (
    bridge_concat,
    build_zeta,
    in_d_class,
    is_bridge,
    split_zeta,
    xi_bridge,
)
from .concat import is_lex_star, shift_to_star, tree_concat, tree_concat_inverse
from .marks import (
    MarkedPolymer,
    MarkedWalk,
    attach_marks_tree,
    attach_marks_walk,
    detach_marks_tree,
    detach_marks_walk,
    marked_polymers,
    marked_walks,
    stars_and_bars_count,
    ways,
)
from .verify import VerifierReport

__all__ = [
    "MarkedPolymer",
    "MarkedWalk",
    "VerifierReport",
    "attach_marks_tree",
    "attach_marks_walk",
    "bridge_concat",
    "build_zeta",
    "detach_marks_tree",
    "detach_marks_walk",
    "in_d_class",
    "is_bridge",
    "is_lex_star",
    "marked_polymers",
    "marked_walks",
    "shift_to_star",
    "split_zeta",
    "stars_and_bars_count",
    "tree_concat",
    "tree_concat_inverse",
    "ways",
    "xi_bridge",
]
