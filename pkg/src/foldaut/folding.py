"""Decompose automorphisms of F_n into Whitehead automorphisms by folding.

Starting from a branded graph whose associated automorphism is the input
map, each step optionally swaps complement edges into the maximal tree and
then folds two equally-labelled edges.  Every swap and every fold of type 2
changes the associated automorphism by a Whitehead automorphism ``(A, a)``::

    phi_B = phi_B' * factor

When the graph becomes an immersion it is a rose and the branding reads off
an element of W_n, the head of the decomposition.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .branding import (BrandedGraph, associated_automorphism, graph_of_endo, graph_of_fixc,
                       read_permutation)
from .free_group import EndoMap, Permutation, TypeTwo, as_permutation, compose
from .graph_core import SpanningTree, tree_avoiding, tree_path

log = logging.getLogger(__name__)


class NotAutomorphism(Exception):
    """The input endomorphism is not an automorphism."""


class NotInjective(NotAutomorphism):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotSurjective(NotAutomorphism):
    """Injective, but the image is a proper free factor (final immersion not a rose)."""

    def __init__(self, message: str, branded: BrandedGraph):
        super().__init__(message)
        self.branded = branded


class InternalError(RuntimeError):
    """A self-check of the engine failed."""


@dataclass(frozen=True)
class FoldCandidate:
    vertex: int
    e1: int
    e2: int
    fold_type: int


@dataclass(frozen=True)
class Substitution:
    index: int        # generator index i whose complement edge was swapped
    removed: int      # old e_i
    added: int        # new e_i
    factor: TypeTwo


@dataclass(frozen=True)
class StepRecord:
    step: int
    before: BrandedGraph
    candidate: FoldCandidate
    substitutions: tuple
    fold_factor: TypeTwo | None
    after: BrandedGraph

    @property
    def factors(self) -> tuple:
        out = [s.factor for s in self.substitutions]
        if self.fold_factor is not None:
            out.append(self.fold_factor)
        return tuple(out)


@dataclass(frozen=True)
class Decomposition:
    """``f = head * factors[-1] * ... * factors[0]``.

    Factors are listed in application order: ``factors[0]`` acts first.
    Trivial factors are dropped here but kept in ``trace``.
    """

    rank: int
    factors: tuple
    head: Permutation
    steps: int
    trace: tuple | None = field(default=None, compare=False)


# --- folds -------------------------------------------------------------------

def classify(B: BrandedGraph | object, e1: int, e2: int) -> int:
    """Fold type of two half-edges sharing an origin (see module docs)."""
    G = B.graph if isinstance(B, BrandedGraph) else B
    loop1, loop2 = G.is_loop(e1), G.is_loop(e2)
    if loop1 and loop2:
        return 4
    if loop1 or loop2:
        return 2
    if G.terminus(e1) == G.terminus(e2):
        return 3
    return 1


def _star_fold(G, v: int) -> FoldCandidate | None:
    seen = {}
    label = G.label
    for e in G.stars[v]:
        letter = label[e]
        if letter in seen:
            e1 = seen[letter]
            return FoldCandidate(v, e1, e, classify(G, e1, e))
        seen[letter] = e
    return None


def find_fold(B: BrandedGraph, among: Sequence[int] | None = None) -> FoldCandidate | None:
    """Lowest vertex, then lowest half-edge pair, with a repeated label; None if immersed.

    ``among`` restricts the scan to a sorted subset of vertices.
    """
    G = B.graph
    for v in (G.vertices if among is None else among):
        c = _star_fold(G, v)
        if c is not None:
            return c
    return None


def is_immersion(B: BrandedGraph) -> bool:
    return find_fold(B) is None


# --- tree substitution -------------------------------------------------------

def _lies_below(G, T, v: int, below: int) -> bool:
    """True iff the tree path from the basepoint to v passes through ``below``."""
    parent, origin = T.parent, G.origin
    while v != below:
        e = parent[v]
        if e is None:
            return False
        v = origin[e]
    return True


def _crossing_set(B: BrandedGraph, edge: int, letter: int) -> frozenset:
    """The set A for a factor whose distinguished tree edge is ``edge`` and a = letter.

    x_j is in A iff the tree path to origin(e_j) crosses ``edge`` in either
    direction; x_j^-1 iff the path to terminus(e_j) does.
    """
    G, T = B.graph, B.tree
    down = edge if T.points_away(G, edge) else G.inv[edge]
    below = G.terminus(down)
    A = {letter}
    for j, e in enumerate(B.complement, 1):
        if j == abs(letter):
            continue
        if _lies_below(G, T, G.origin[e], below):
            A.add(j)
        if _lies_below(G, T, G.terminus(e), below):
            A.add(-j)
    return frozenset(A)


def _swapped_tree(G, T: SpanningTree, ei: int, down: int, x: int) -> SpanningTree:
    """Parent pointers after trading tree edge ``down`` for e_i.

    ``down`` points away from the basepoint and x is the endpoint of e_i cut
    off with it; the path from x up to terminus(down) is re-rooted at x.
    """
    parent = dict(T.parent)
    below = G.terminus(down)
    incoming = G.inv[ei] if G.origin[ei] == x else ei
    y = x
    while True:
        old = parent[y]
        parent[y] = incoming
        if y == below:
            break
        incoming = G.inv[old]
        y = G.origin[old]
    return SpanningTree(T.basepoint, parent, G.inv)


def tree_substitute(B: BrandedGraph, i: int, keep: Sequence[int] = ()) -> tuple[BrandedGraph, TypeTwo]:
    """Swap complement edge e_i into the tree; return the new branding and (A, x_i^eps).

    The edge leaving the tree is the first edge of ``p_origin(e_i)`` past the
    shared initial segment, else the reverse of the first such edge of
    ``p_terminus(e_i)``.  Geometric edges listed in ``keep`` are skipped.
    """
    G, T = B.graph, B.tree
    ei = B.complement[i - 1]
    if G.is_loop(ei):
        raise ValueError(f"e_{i} is a loop; it cannot enter a tree")
    keep = {min(e, G.inv[e]) for e in keep}
    p = tree_path(G, T, G.origin[ei]).edges
    q = tree_path(G, T, G.terminus(ei)).edges
    shared = 0
    while shared < min(len(p), len(q)) and p[shared] == q[shared]:
        shared += 1
    candidates = [(e, 1) for e in p[shared:]] + [(G.inv[e], -1) for e in q[shared:]]
    for new, eps in candidates:
        if min(new, G.inv[new]) not in keep:
            break
    else:
        raise InternalError(f"no tree edge available to swap with e_{i}")
    factor = TypeTwo(_crossing_set(B, new, eps * i), eps * i)
    complement = list(B.complement)
    complement[i - 1] = new
    if eps == 1:
        tree = _swapped_tree(G, T, ei, new, G.origin[ei])
    else:
        tree = _swapped_tree(G, T, ei, G.inv[new], G.terminus(ei))
    return BrandedGraph(G, B.basepoint, tuple(complement), tree), factor


# --- one folding step --------------------------------------------------------

def _ensure_in_tree(B, edge, keep, subs):
    i = abs(B.index_of(edge))
    if i == 0:
        return B
    removed = B.complement[i - 1]
    B, factor = tree_substitute(B, i, keep)
    subs.append(Substitution(i, removed, B.complement[i - 1], factor))
    return B


def _folded_tree(B: BrandedGraph, c: FoldCandidate, vmap: dict) -> SpanningTree:
    """Parent pointers on the quotient; ids of the fold survive as in LabeledGraph.fold."""
    G, T = B.graph, B.tree
    parent = dict(T.parent)
    s, d, v = c.e1, c.e2, c.vertex
    a, z = G.terminus(s), G.terminus(d)
    keep, drop = min(a, z), max(a, z)
    if c.fold_type == 1:
        if parent[a] == s and parent[z] == d:
            top = s
        elif parent[a] == s:
            # d runs back towards the basepoint, so z is v's parent vertex
            top = parent[z]
            parent[v] = G.inv[s]
        else:
            top = parent[a]
    else:
        t = d if G.is_loop(s) else s
        w = G.terminus(t)
        top = parent[v] if parent[w] == t else parent[w]
    del parent[drop]
    parent[keep] = top
    return SpanningTree(vmap.get(T.basepoint, T.basepoint), parent, G.inv)


def fold_step(B: BrandedGraph, candidate: FoldCandidate | None = None,
              step: int = 0) -> StepRecord:
    """Perform one fold (after any needed tree substitutions).

    Raises NotInjective for folds of type 3 or 4.
    """
    c = candidate if candidate is not None else find_fold(B)
    if c is None:
        raise ValueError("graph is already immersed")
    if c.fold_type in (3, 4):
        what = "two edges with common endpoints" if c.fold_type == 3 else "two loops"
        raise NotInjective(f"not injective: type-{c.fold_type} fold witness "
                           f"({what} at vertex {c.vertex}, half-edges {c.e1}, {c.e2})", c)
    start = B
    subs: list[Substitution] = []
    G = B.graph
    if c.fold_type == 1:
        B = _ensure_in_tree(B, c.e1, (), subs)
        B = _ensure_in_tree(B, c.e2, (c.e1,), subs)
        fold_factor = None
    else:
        loop, t = (c.e1, c.e2) if G.is_loop(c.e1) else (c.e2, c.e1)
        B = _ensure_in_tree(B, t, (), subs)
        idx = B.index_of(loop)
        # orient t so that it is identified with e_i itself rather than its reverse
        t_eff = t if idx > 0 else G.inv[t]
        i = abs(idx)
        eps = 1 if B.tree.points_away(G, t_eff) else -1
        fold_factor = TypeTwo(_crossing_set(B, t_eff, eps * i), eps * i)

    H, emap, vmap = G.fold(c.e1, c.e2)
    tree = _folded_tree(B, c, vmap)
    after = BrandedGraph(H, vmap.get(B.basepoint, B.basepoint),
                         tuple(emap.get(e, e) for e in B.complement), tree)
    return StepRecord(step, start, c, tuple(subs), fold_factor, after)


# --- full decomposition ------------------------------------------------------

def _check_tree(B: BrandedGraph, where: str) -> None:
    problems = B.validate()
    if problems:
        raise InternalError(f"{where}: invalid branding: {problems}")
    G = B.graph
    outside = set(B.complement) | {G.inv[e] for e in B.complement}
    if B.tree.parent != tree_avoiding(G, outside, B.basepoint).parent:
        raise InternalError(f"{where}: maintained tree disagrees with a fresh search")


def _check_step(rec: StepRecord) -> None:
    _check_tree(rec.before, f"step {rec.step} (before)")
    _check_tree(rec.after, f"step {rec.step} (after)")
    n = rec.before.rank
    lhs = associated_automorphism(rec.before)
    rhs = associated_automorphism(rec.after)
    for factor in reversed(rec.factors):
        rhs = rhs * factor.to_map(n)
    if lhs != rhs:
        raise InternalError(f"step {rec.step}: phi_B != phi_B' * factors")
    if rec.after.graph.num_geometric_edges() != rec.before.graph.num_geometric_edges() - 1:
        raise InternalError(f"step {rec.step}: fold did not remove one edge")


def initial_branding(f: EndoMap, fixc: int | None = None) -> BrandedGraph:
    if fixc is None:
        return graph_of_endo(f.images)
    return graph_of_fixc(f.images, fixc)


def decompose(f: EndoMap, fixc: int | None = None, trace: bool = False,
              check: bool = False) -> Decomposition:
    """Write f as ``head * W_k * ... * W_1`` with Whitehead factors W_i.

    ``fixc=m`` starts from the graph with stems and loops for x_{m+1}..x_n
    (f must send each of them to a conjugate of itself).  ``check`` re-derives
    the associated automorphisms after every step.
    """
    for i, w in enumerate(f.images, 1):
        if not w:
            raise NotInjective(f"not injective: x{i} maps to the identity", i)
    B = initial_branding(f, fixc)
    if check and associated_automorphism(B) != f:
        raise InternalError("initial branding does not realise the input map")
    factors: list[TypeTwo] = []
    records = []
    steps = 0
    # vertices whose stars may still be non-injective; a fold only touches
    # its own vertex and the merged terminus
    suspects = set(B.graph.vertices)
    while True:
        c = None
        for v in sorted(suspects):
            c = _star_fold(B.graph, v)
            if c is not None:
                break
            suspects.discard(v)
        if c is None:
            break
        steps += 1
        rec = fold_step(B, c, steps)
        G = rec.before.graph
        keep, drop = sorted((G.terminus(c.e1), G.terminus(c.e2)))
        suspects.discard(drop)
        suspects.update((keep, keep if c.vertex == drop else c.vertex))
        if check:
            _check_step(rec)
        factors.extend(w for w in rec.factors if not w.is_identity())
        if trace:
            records.append(rec)
        B = rec.after
    try:
        head = read_permutation(B)
    except ValueError:
        raise NotSurjective("injective but not surjective: final immersion is not a rose "
                            f"({len(B.graph.vertices)} vertices, "
                            f"{B.graph.num_geometric_edges()} edges)", B) from None
    log.debug("decomposed %s in %d steps, %d factors", f, steps, len(factors))
    return Decomposition(f.rank, tuple(factors), head, steps,
                         tuple(records) if trace else None)


def recompose(d: Decomposition) -> EndoMap:
    n = d.rank
    return compose(d.head.to_map(n), *(w.to_map(n) for w in reversed(d.factors))) \
        if d.factors else d.head.to_map(n)


def certify(f: EndoMap) -> Decomposition:
    """Decompose f and confirm the product; raises NotAutomorphism otherwise."""
    d = decompose(f)
    if recompose(d) != f:
        raise InternalError("recomposition does not reproduce the input")
    return d


def is_automorphism(f: EndoMap) -> bool:
    try:
        decompose(f)
    except NotAutomorphism:
        return False
    return True


def invert(f: EndoMap) -> EndoMap:
    """Inverse automorphism, built from the inverses of the Whitehead factors."""
    if as_permutation(f) is not None:
        return as_permutation(f).inverse().to_map()
    d = decompose(f)
    n = f.rank
    maps = [w.inverse().to_map(n) for w in d.factors] + [d.head.inverse().to_map(n)]
    return compose(*maps)
