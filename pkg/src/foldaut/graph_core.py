"""Serre graphs with edges labelled by letters of the rose R_n.

Half-edges are ints.  Graphs built here pair them as ``(2k, 2k+1)`` but the
involution is stored explicitly so that malformed input can be validated.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .free_group import reduce


class LabeledGraph:
    """A finite graph with a labelling map to the rose.

    ``origin[e]`` is the initial vertex of half-edge ``e``, ``inv[e]`` its
    reverse and ``label[e]`` the signed letter it maps to.
    """

    __slots__ = ("vertices", "origin", "inv", "label", "_stars")

    def __init__(self, vertices: Iterable[int], origin: Mapping[int, int],
                 inv: Mapping[int, int], label: Mapping[int, int]):
        self.vertices = tuple(sorted(vertices))
        self.origin = dict(origin)
        self.inv = dict(inv)
        self.label = dict(label)
        self._stars = None

    @classmethod
    def from_edges(cls, vertices: Iterable[int], edges: Sequence[tuple[int, int, int]]):
        """Build from ``(src, dst, letter)`` triples; edge k gets halves 2k, 2k+1."""
        origin, inv, label = {}, {}, {}
        for k, (src, dst, letter) in enumerate(edges):
            e, eb = 2 * k, 2 * k + 1
            origin[e], origin[eb] = src, dst
            inv[e], inv[eb] = eb, e
            label[e], label[eb] = letter, -letter
        return cls(vertices, origin, inv, label)

    def terminus(self, e: int) -> int:
        return self.origin[self.inv[e]]

    def is_loop(self, e: int) -> bool:
        return self.origin[e] == self.terminus(e)

    @property
    def half_edges(self) -> list[int]:
        return sorted(self.origin)

    def geometric_edges(self) -> list[int]:
        """One representative (the smaller id) per pair {e, inv(e)}."""
        return [e for e in self.half_edges if e < self.inv[e]]

    def num_geometric_edges(self) -> int:
        return len(self.origin) // 2

    @property
    def stars(self) -> dict[int, list[int]]:
        """Vertex -> half-edges leaving it, in increasing order."""
        if self._stars is None:
            stars = {u: [] for u in self.vertices}
            for e in sorted(self.origin):
                stars[self.origin[e]].append(e)
            self._stars = stars
        return self._stars

    def star(self, v: int) -> list[int]:
        return self.stars.get(v, [])

    def edge_list(self) -> list[tuple[int, int, int, int]]:
        """``(half_edge, src, dst, letter)`` for each geometric edge."""
        return [(e, self.origin[e], self.terminus(e), self.label[e])
                for e in self.geometric_edges()]

    def fold(self, e1: int, e2: int) -> tuple["LabeledGraph", dict[int, int], dict[int, int]]:
        """Identify e1 with e2 (and their reverses and termini).

        Returns the quotient graph plus the edge and vertex remappings, listing
        only the ids that disappear: e2 and inv(e2) become e1 and inv(e1), and
        the larger of the two termini merges into the smaller.
        """
        e2b = self.inv[e2]
        t1, t2 = self.terminus(e1), self.terminus(e2)
        keep, drop = min(t1, t2), max(t1, t2)
        origin, inv, label = dict(self.origin), dict(self.inv), dict(self.label)
        for d in (origin, inv, label):
            del d[e2], d[e2b]
        old = self.stars
        stars = dict(old)
        for u in {self.origin[e2], t2, keep, drop}:
            stars[u] = [e for e in old[u] if e != e2 and e != e2b]
        vertices = self.vertices
        if keep != drop:
            moved = stars.pop(drop)
            for e in moved:
                origin[e] = keep
            stars[keep] = sorted(stars[keep] + moved)
            k = bisect_left(vertices, drop)
            vertices = vertices[:k] + vertices[k + 1:]
        H = LabeledGraph._raw(vertices, origin, inv, label, stars)
        emap = {e2: e1, e2b: self.inv[e1]}
        vmap = {drop: keep} if keep != drop else {}
        return H, emap, vmap

    @classmethod
    def _raw(cls, vertices, origin, inv, label, stars=None):
        G = cls.__new__(cls)
        G.vertices, G.origin, G.inv, G.label, G._stars = vertices, origin, inv, label, stars
        return G

    def __repr__(self):
        return f"LabeledGraph(V={len(self.vertices)}, E={self.num_geometric_edges()})"


def validate(G: LabeledGraph) -> list[str]:
    """Return a list of violated graph axioms (empty when G is fine)."""
    problems = []
    vset = set(G.vertices)
    for e in G.half_edges:
        if e not in G.inv or G.inv[e] not in G.origin:
            problems.append(f"half-edge {e}: involution undefined")
            continue
        eb = G.inv[e]
        if eb == e:
            problems.append(f"half-edge {e}: involution fixed point")
        if G.inv.get(eb) != e:
            problems.append(f"half-edge {e}: involution not an involution")
        if G.origin[e] not in vset:
            problems.append(f"half-edge {e}: origin {G.origin[e]} not a vertex")
        if e not in G.label or G.label[e] == 0:
            problems.append(f"half-edge {e}: missing label")
        elif G.label.get(eb) != -G.label[e]:
            problems.append(f"half-edge {e}: label of inverse is not inverse label")
    if not problems and G.vertices:
        reached = _reach(G, G.vertices[0], G.half_edges)
        if len(reached) != len(G.vertices):
            problems.append("disconnected")
    if not G.vertices:
        problems.append("no vertices")
    return problems


def _reach(G: LabeledGraph, b: int, allowed: Iterable[int]) -> set[int]:
    allowed = set(allowed)
    seen = {b}
    queue = deque([b])
    while queue:
        v = queue.popleft()
        for e in G.star(v):
            if e in allowed:
                w = G.terminus(e)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return seen


# --- paths -------------------------------------------------------------------

@dataclass(frozen=True)
class Path:
    """Either the trivial path at ``start`` or a sequence of half-edges."""

    start: int
    edges: tuple = ()

    def end(self, G: LabeledGraph) -> int:
        return G.terminus(self.edges[-1]) if self.edges else self.start

    def is_wellformed(self, G: LabeledGraph) -> bool:
        v = self.start
        for e in self.edges:
            if G.origin.get(e) != v:
                return False
            v = G.terminus(e)
        return True

    def reverse(self, G: LabeledGraph) -> "Path":
        return Path(self.end(G), tuple(G.inv[e] for e in reversed(self.edges)))

    def concat(self, other: "Path", G: LabeledGraph) -> "Path":
        if self.end(G) != other.start:
            raise ValueError("paths do not meet")
        return Path(self.start, self.edges + other.edges)

    def label_word(self, G: LabeledGraph) -> tuple:
        return reduce(G.label[e] for e in self.edges)


def reduce_path(G: LabeledGraph, p: Path) -> Path:
    out: list[int] = []
    for e in p.edges:
        if out and out[-1] == G.inv[e]:
            out.pop()
        else:
            out.append(e)
    return Path(p.start, tuple(out))


# --- maximal trees -----------------------------------------------------------

class SpanningTree:
    """A maximal tree given by parent pointers towards the basepoint.

    ``parent[v]`` is the tree half-edge ending at v on the reduced tree path
    from the basepoint (None at the basepoint).
    """

    __slots__ = ("basepoint", "parent", "_inv", "_edges")

    def __init__(self, basepoint: int, parent: dict, inv: Mapping):
        self.basepoint = basepoint
        self.parent = parent
        self._inv = inv
        self._edges = None

    @property
    def edges(self) -> frozenset:
        """All tree half-edges (closed under the involution)."""
        if self._edges is None:
            tree = [e for e in self.parent.values() if e is not None]
            self._edges = frozenset(tree + [self._inv[e] for e in tree])
        return self._edges

    def points_away(self, G: LabeledGraph, e: int) -> bool:
        return self.parent.get(G.terminus(e)) == e


def _bfs(G: LabeledGraph, b: int, allowed=None, excluded=frozenset()) -> SpanningTree:
    stars, origin, inv = G.stars, G.origin, G.inv
    parent = {b: None}
    order = [b]
    for v in order:
        for e in stars[v]:
            if e in excluded or (allowed is not None and e not in allowed):
                continue
            w = origin[inv[e]]
            if w not in parent:
                parent[w] = e
                order.append(w)
    return SpanningTree(b, parent, inv)


def tree_from_edges(G: LabeledGraph, edges: Iterable[int], b: int) -> SpanningTree:
    """Parent pointers for the inv-closed subgraph ``edges``, BFS from b.

    Raises ValueError unless the subgraph is a maximal tree.
    """
    edges = frozenset(edges)
    T = _bfs(G, b, allowed=edges)
    if len(T.parent) != len(G.vertices) or len(edges) != 2 * (len(G.vertices) - 1):
        raise ValueError("edge set is not a maximal tree")
    return T


def tree_avoiding(G: LabeledGraph, excluded: Iterable[int], b: int) -> SpanningTree:
    """The maximal tree made of every half-edge outside ``excluded``.

    Raises ValueError if those half-edges do not form a maximal tree.
    """
    excluded = frozenset(excluded)
    T = _bfs(G, b, excluded=excluded)
    if len(T.parent) != len(G.vertices) or \
            len(G.origin) - len(excluded) != 2 * (len(G.vertices) - 1):
        raise ValueError("complement edges do not leave a maximal tree")
    return T


def spanning_tree(G: LabeledGraph, b: int) -> SpanningTree:
    """Breadth-first maximal tree, ties broken by half-edge index."""
    if b not in G.vertices:
        raise ValueError(f"basepoint {b} is not a vertex")
    chosen = set()
    seen = {b}
    queue = deque([b])
    while queue:
        v = queue.popleft()
        for e in G.star(v):
            w = G.terminus(e)
            if w not in seen:
                seen.add(w)
                chosen.update((e, G.inv[e]))
                queue.append(w)
    if len(seen) != len(G.vertices):
        raise ValueError("graph is disconnected")
    return tree_from_edges(G, chosen, b)


def is_maximal_tree(G: LabeledGraph, edges: Iterable[int], b: int) -> bool:
    """Edge count 2(|V|-1) and every vertex reachable from b inside the tree."""
    edges = set(edges)
    if any(G.inv[e] not in edges for e in edges):
        return False
    if len(edges) != 2 * (len(G.vertices) - 1):
        return False
    return len(_reach(G, b, edges)) == len(G.vertices)


def tree_path(G: LabeledGraph, T: SpanningTree, v: int) -> Path:
    edges = []
    while T.parent[v] is not None:
        e = T.parent[v]
        edges.append(e)
        v = G.origin[e]
    return Path(T.basepoint, tuple(reversed(edges)))


def tree_orientation(T: SpanningTree) -> frozenset:
    """Tree half-edges pointing away from the basepoint."""
    return frozenset(e for e in T.parent.values() if e is not None)


def canonical_loop(G: LabeledGraph, T: SpanningTree, e: int) -> Path:
    """``p_{origin(e)} . e . reverse(p_{terminus(e)})``."""
    p = tree_path(G, T, G.origin[e])
    q = tree_path(G, T, G.terminus(e))
    return Path(T.basepoint, p.edges + (e,) + q.reverse(G).edges)


def loop_word(G: LabeledGraph, T: SpanningTree, complement: Sequence[int], loop: Path) -> tuple:
    """Express a loop at the basepoint in the basis given by ``complement``.

    Tree edges are dropped and ``complement[i-1]`` (resp. its reverse) reads
    as the letter ``i`` (resp. ``-i``).
    """
    if loop.start != T.basepoint or not loop.is_wellformed(G) or loop.end(G) != T.basepoint:
        raise ValueError("not a loop at the basepoint")
    index = {}
    for i, e in enumerate(complement, 1):
        index[e] = i
        index[G.inv[e]] = -i
    letters = []
    for e in loop.edges:
        if e in T.edges:
            continue
        try:
            letters.append(index[e])
        except KeyError:
            raise ValueError(f"half-edge {e} is neither in the tree nor the complement") from None
    return reduce(letters)
