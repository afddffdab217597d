"""Computational toolkit for coloured-forest skein presentations.

Certifies left-cancellativity and Ore's property, computes spines and
type-F-infinity certificates, performs fraction-group arithmetic, emits
group presentations with abelian invariants, and realizes the canonical
totally ordered point set with its action.
"""

from .forest import (
    Forest,
    Tree,
    caret,
    compose,
    divide,
    elementary,
    find_occurrences,
    leaf_count,
    parse_forest,
    parse_tree,
    parse_word,
    render_forest,
    render_tree,
    rewrite_at,
    tensor,
    tree_from_word,
    word_from_tree,
)
from .presentation import SkeinPresentation, is_complemented, monoid_relations, parse, render

__all__ = [
    "Forest", "Tree", "caret", "compose", "divide", "elementary",
    "find_occurrences", "leaf_count", "parse_forest", "parse_tree",
    "parse_word", "render_forest", "render_tree", "rewrite_at", "tensor",
    "tree_from_word", "word_from_tree",
    "SkeinPresentation", "is_complemented", "monoid_relations", "parse", "render",
]

__version__ = "0.1.0"
