"""Branded graphs and their associated automorphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .free_group import EndoMap, Permutation, cyclically_reduce, reduce
from .graph_core import (LabeledGraph, SpanningTree, canonical_loop, is_maximal_tree,
                         tree_avoiding, validate)


def rose(n: int) -> LabeledGraph:
    if n < 1:
        raise ValueError("rose needs at least one petal")
    return LabeledGraph.from_edges([0], [(0, 0, i) for i in range(1, n + 1)])


@dataclass(frozen=True)
class BrandedGraph:
    """A labelled graph with basepoint and ordered complement e_1..e_n.

    The maximal tree is everything outside ``complement`` and its reverses.
    """

    graph: LabeledGraph
    basepoint: int
    complement: tuple
    # parent pointers supplied by the folding engine; computed by BFS if absent
    known_tree: SpanningTree | None = field(default=None, compare=False, repr=False)

    @property
    def rank(self) -> int:
        return len(self.complement)

    @property
    def tree(self) -> SpanningTree:
        if self.known_tree is None:
            outside = set(self.complement)
            outside.update(self.graph.inv[e] for e in self.complement)
            object.__setattr__(self, "known_tree",
                               tree_avoiding(self.graph, outside, self.basepoint))
        return self.known_tree

    def tree_edges(self) -> set[int]:
        outside = set(self.complement)
        outside.update(self.graph.inv[e] for e in self.complement)
        return set(self.graph.origin) - outside

    def index_of(self, e: int) -> int:
        """Signed generator index of a complement half-edge, 0 for tree edges."""
        for i, c in enumerate(self.complement, 1):
            if c == e:
                return i
            if self.graph.inv[c] == e:
                return -i
        return 0

    def validate(self) -> list[str]:
        problems = validate(self.graph)
        if problems:
            return problems
        G = self.graph
        geo = {min(e, G.inv[e]) for e in self.complement}
        if len(geo) != len(self.complement):
            problems.append("complement repeats a geometric edge")
        if not is_maximal_tree(G, self.tree_edges(), self.basepoint):
            problems.append("complement of e_1..e_n is not a maximal tree")
        return problems


def associated_automorphism(B: BrandedGraph) -> EndoMap:
    """Image of x_i is the label word of the i-th canonical loop."""
    G, T = B.graph, B.tree
    return EndoMap(tuple(canonical_loop(G, T, e).label_word(G) for e in B.complement))


def rose_branding(n: int) -> BrandedGraph:
    return BrandedGraph(rose(n), 0, tuple(2 * i for i in range(n)))


def _add_path(edges: list, src: int, dst: int, word: Sequence[int], next_vertex: int):
    """Append a path from src to dst spelling ``word``; return (first half-edge, next free vertex)."""
    first = 2 * len(edges)
    v = src
    for k, letter in enumerate(word):
        if k == len(word) - 1:
            w = dst
        else:
            w = next_vertex
            next_vertex += 1
        edges.append((v, w, letter))
        v = w
    return first, next_vertex


def graph_of_endo(images: Sequence[Sequence[int]]) -> BrandedGraph:
    """Rose with the i-th petal subdivided to spell the i-th image word.

    e_i is the first edge of petal i, oriented along the word.
    """
    edges: list = []
    complement = []
    nxt = 1
    for i, w in enumerate(images, 1):
        w = tuple(w)
        if not w:
            raise ValueError(f"image of x{i} is empty")
        if reduce(w) != w:
            raise ValueError(f"image of x{i} is not reduced")
        first, nxt = _add_path(edges, 0, 0, w, nxt)
        complement.append(first)
    G = LabeledGraph.from_edges(range(nxt), edges)
    return BrandedGraph(G, 0, tuple(complement))


def graph_of_fixc(images: Sequence[Sequence[int]], m: int) -> BrandedGraph:
    """Initial graph for maps fixing x_{m+1}..x_n up to conjugacy.

    Petals 1..m as in :func:`graph_of_endo`; for j > m with image
    ``w x_j w^-1`` a stem spelling w ends in a one-edge loop labelled x_j.
    """
    n = len(images)
    if not 0 <= m <= n:
        raise ValueError(f"split index m={m} outside 0..{n}")
    edges: list = []
    complement = []
    nxt = 1
    for i, w in enumerate(images[:m], 1):
        w = tuple(w)
        if not w:
            raise ValueError(f"image of x{i} is empty")
        first, nxt = _add_path(edges, 0, 0, w, nxt)
        complement.append(first)
    for j in range(m + 1, n + 1):
        core, stem = cyclically_reduce(images[j - 1])
        if core != (j,):
            raise ValueError(f"image of x{j} is not a conjugate of x{j}")
        if stem:
            end = nxt
            _, nxt = _add_path(edges, 0, end, stem, nxt + 1)
        else:
            end = 0
        complement.append(2 * len(edges))
        edges.append((end, end, j))
    G = LabeledGraph.from_edges(range(nxt), edges)
    return BrandedGraph(G, 0, tuple(complement))


def read_permutation(B: BrandedGraph) -> Permutation:
    """The W_n element of a branding on a graph isomorphic to the rose."""
    G = B.graph
    n = B.rank
    if len(G.vertices) != 1 or G.num_geometric_edges() != n:
        raise ValueError("graph is not a rose")
    labels = [G.label[e] for e in B.complement]
    if sorted(abs(x) for x in labels) != list(range(1, n + 1)):
        raise ValueError("petal labels are not a basis permutation")
    return Permutation(tuple(abs(x) for x in labels), tuple(1 if x > 0 else -1 for x in labels))
