"""Categorial grammar toolkit.

* :mod:`catgram.categories` -- categories, parsing, free-group image
* :mod:`catgram.prover` -- Lambek-calculus proof search and rendering
* :mod:`catgram.lambda_core` -- simply typed lambda calculus
* :mod:`catgram.montague` -- lexicons and compositional semantics
* :mod:`catgram.systemf` -- System F terms, coercions and fictive motion
* :mod:`catgram.cli` -- command-line front end
"""

from .categories import (Atom, Category, Over, Under, format_category,
                         group_check, parse_category)
from .lambda_core import beta_normalize, parse_term, parse_type, type_of
from .montague import analyze, cat_to_type, compose, read_lexicon, term_to_formula
from .prover import Derivation, SearchConfig, Sequent, parse_sequent, prove, render

__all__ = [
    "Atom", "Category", "Over", "Under", "format_category", "group_check",
    "parse_category", "beta_normalize", "parse_term", "parse_type", "type_of",
    "analyze", "cat_to_type", "compose", "read_lexicon", "term_to_formula",
    "Derivation", "SearchConfig", "Sequent", "parse_sequent", "prove", "render",
]
__version__ = "0.1.0"
