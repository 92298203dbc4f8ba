"""Whitehead decompositions of free group automorphisms by folding graphs.

>>> from foldaut import EndoMap, decompose, recompose
>>> f = EndoMap(((1, 2), (2,)))
>>> d = decompose(f)
>>> recompose(d) == f
True
"""

from .branding import BrandedGraph, associated_automorphism, graph_of_endo, graph_of_fixc, rose
from .folding import (Decomposition, InternalError, NotAutomorphism, NotInjective,
                      NotSurjective, certify, decompose, fold_step, invert, is_automorphism,
                      recompose, tree_substitute)
from .free_group import (EndoMap, K, K3, Permutation, S, TypeTwo, abelianize, commutator,
                         compose, cyclically_reduce, format_word, inverse, multiply, nielsen,
                         reduce, rho, whitehead_apply)
from .graph_core import LabeledGraph, Path, SpanningTree, spanning_tree, validate
from .subgroups import (Gen, GeneratorCatalog, catalog, in_fix, in_fixc, in_IA, product,
                        relator_bank, verify_identity_bank, verify_relators_matrix,
                        verify_fix_decomposition, whitehead_to_nielsen)

__all__ = [name for name in dir() if not name.startswith("_")]
