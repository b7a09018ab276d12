"""Locally finite graphs given by exhaustions, their ends, spanning trees and chords.

A :class:`GraphLevels` grows level by level; level ``n`` must contain every
vertex within distance ``n`` of the base and every edge at a vertex within
distance ``n - 1``.  Ends are approximated by threads of components of
``L_depth - B_r(base)`` that still reach the frontier, the vertices new at
level ``depth``.
"""
from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, NamedTuple, Sequence

from .verdict import Verdict

CORE = "CORE"
MAX_SEARCH_LEVEL = 512


class GraphError(ValueError):
    pass


class UndiscoveredChord(GraphError):
    pass


def idkey(x: Hashable):
    """Sort key that tolerates int, str and tuple ids side by side."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(idkey(y) for y in x))
    return (3, repr(x))


class UnionFind:
    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: dict = {}
        for x in items:
            self.add(x)

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if idkey(rb) < idkey(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


class Edge(NamedTuple):
    id: Hashable
    u: Hashable
    v: Hashable
    level: int


@dataclass(frozen=True)
class Graph:
    """One finite level ``L_n``."""

    level: int
    vertices: frozenset
    edges: tuple[Edge, ...]
    adjacency: dict = field(compare=False, repr=False)

    def distances(self, source) -> dict:
        dist = {source: 0}
        todo = deque([source])
        while todo:
            x = todo.popleft()
            for _, y in self.adjacency.get(x, ()):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    todo.append(y)
        return dist

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(self.distances(next(iter(self.vertices)))) == len(self.vertices)


Increment = Callable[[int], tuple[Sequence[Hashable], Sequence[tuple]]]


class GraphLevels:
    """Exhaustion ``L_0 ⊆ L_1 ⊆ ...`` grown from a deterministic increment.

    ``increment(n)`` returns ``(new_vertices, new_edges)`` for level ``n``;
    an edge is ``(u, v)`` (id assigned in order) or ``(id, u, v)``.
    ``final_level`` marks graphs that stop growing.
    """

    def __init__(
        self,
        name: str,
        increment: Increment,
        base: Hashable,
        params: tuple = (),
        final_level: int | None = None,
        degree_bound: Callable[[Hashable], int] | None = None,
    ):
        self.name = name
        self.params = params
        self.base = base
        self.final_level = final_level
        self.degree_bound = degree_bound
        self._increment = increment
        self._vertex_level: dict = {}
        self._edges: list[Edge] = []
        self._edge_ids: set = set()
        self._per_level: list[tuple[list, list[Edge]]] = []
        self._snapshots: dict[int, Graph] = {}
        self._dist: dict[int, dict] = {}
        self._lock = threading.RLock()
        self._next_id = 0

    def __repr__(self) -> str:
        args = " ".join(map(str, self.params))
        return f"GraphLevels({self.name}{' ' + args if args else ''})"

    def _grow(self, n: int) -> None:
        with self._lock:
            while len(self._per_level) <= n:
                k = len(self._per_level)
                if self.final_level is not None and k > self.final_level:
                    self._per_level.append(([], []))
                    continue
                new_v, new_e = self._increment(k)
                vs = []
                for x in new_v:
                    if x not in self._vertex_level:
                        self._vertex_level[x] = k
                        vs.append(x)
                es = []
                for item in new_e:
                    if len(item) == 2:
                        eid, (u, v) = self._next_id, item
                        self._next_id += 1
                    else:
                        eid, u, v = item
                    if u == v:
                        raise GraphError(f"loop edge {eid} at {u}")
                    if eid in self._edge_ids:
                        raise GraphError(f"duplicate edge id {eid}")
                    for x in (u, v):
                        if x not in self._vertex_level:
                            self._vertex_level[x] = k
                            vs.append(x)
                    self._edge_ids.add(eid)
                    es.append(Edge(eid, u, v, k))
                es.sort(key=lambda e: idkey(e.id))
                self._edges.extend(es)
                self._per_level.append((vs, es))

    def new_edges(self, n: int) -> list[Edge]:
        self._grow(n)
        return self._per_level[n][1]

    def level(self, n: int) -> Graph:
        if n < 0:
            raise GraphError(f"level must be >= 0, got {n}")
        hit = self._snapshots.get(n)
        if hit is not None:
            return hit
        self._grow(n)
        with self._lock:
            vertices = frozenset(x for x, k in self._vertex_level.items() if k <= n)
            edges = tuple(e for e in self._edges if e.level <= n)
            adj: dict = {x: [] for x in vertices}
            for e in edges:
                adj[e.u].append((e.id, e.v))
                adj[e.v].append((e.id, e.u))
            for nbrs in adj.values():
                nbrs.sort(key=lambda p: (idkey(p[1]), idkey(p[0])))
            snap = Graph(n, vertices, edges, adj)
            self._snapshots[n] = snap
        return snap

    def vertex_level(self, x) -> int:
        return self._vertex_level[x]

    def frontier(self, depth: int) -> frozenset:
        """Vertices first appearing at level ``depth``: where infinite parts keep growing."""
        if self.final_level is not None and depth > self.final_level:
            return frozenset()
        self._grow(depth)
        return frozenset(x for x, k in self._vertex_level.items() if k == depth)

    def distances(self, depth: int) -> dict:
        hit = self._dist.get(depth)
        if hit is None:
            hit = self.level(depth).distances(self.base)
            self._dist[depth] = hit
        return hit


# -- builtins ------------------------------------------------------------------


def _ladder() -> GraphLevels:
    # top t_i = 2i, bottom b_i = 2i + 1, base t_0
    def inc(n):
        t, b = 2 * n, 2 * n + 1
        if n == 0:
            return [t, b], [(t, b)]
        return [t, b], [(t - 2, t), (t, b), (b - 2, b)]

    return GraphLevels("ladder", inc, base=0)


def _double_ladder() -> GraphLevels:
    # two one-way ladders hanging off the base 0; side s = 0 right, 1 left
    def top(s, i):
        return 4 * i + 1 + 2 * s

    def bot(s, i):
        return 4 * i + 2 + 2 * s

    def inc(n):
        if n == 0:
            return [0], []
        i = n - 1
        vs, es = [], []
        for s in (0, 1):
            vs += [top(s, i), bot(s, i)]
            if i == 0:
                es += [(0, top(s, 0)), (top(s, 0), bot(s, 0))]
            else:
                es += [(top(s, i - 1), top(s, i)), (top(s, i), bot(s, i)), (bot(s, i - 1), bot(s, i))]
        return vs, es

    return GraphLevels("double_ladder", inc, base=0)


def _ray() -> GraphLevels:
    return GraphLevels("ray", lambda n: ([n], [(n - 1, n)] if n else []), base=0)


def _star_of_rays(k: int, ring: bool = True) -> GraphLevels:
    if k < 1:
        raise GraphError("star_of_rays needs k >= 1")

    def vid(i, j):  # vertex at distance i >= 1 on ray j
        return (i - 1) * k + j + 1

    def inc(n):
        if n == 0:
            return [0], []
        vs = [vid(n, j) for j in range(k)]
        es = [((0 if n == 1 else vid(n - 1, j)), vid(n, j)) for j in range(k)]
        if n == 1 and ring and k >= 2:
            pairs = [(j, (j + 1) % k) for j in range(k if k >= 3 else 1)]
            es += [(vid(1, a), vid(1, b)) for a, b in pairs]
        return vs, es

    return GraphLevels("star_of_rays", inc, base=0, params=(k,))


def _binary_tree() -> GraphLevels:
    def inc(n):
        vs = list(range(1 << n, 1 << (n + 1)))
        return vs, [(v >> 1, v) for v in vs] if n else []

    return GraphLevels("binary_tree", inc, base=1)


def _t2_doubled_tree() -> GraphLevels:
    # each tree edge parent-v is doubled by the path parent, -v, v
    def inc(n):
        if n == 0:
            return [1], []
        vs, es = [], []
        for v in range(1 << n, 1 << (n + 1)):
            p = v >> 1
            vs += [-v, v]
            es += [(p, -v), (-v, v), (p, v)]
        return vs, es

    return GraphLevels("t2_doubled_tree", inc, base=1)


def _spiral_ring(n: int) -> list[tuple[int, int]]:
    if n == 0:
        return [(0, 0)]
    out = [(n, y) for y in range(-(n - 1), n + 1)]
    out += [(x, n) for x in range(n - 1, -n - 1, -1)]
    out += [(-n, y) for y in range(n - 1, -n - 1, -1)]
    out += [(x, -n) for x in range(-n + 1, n + 1)]
    return out


def _grid() -> GraphLevels:
    # level n is the square of radius n; the spiral path is listed first so
    # that the greedy tree is a single ray
    def inc(n):
        ring = _spiral_ring(n)
        if n == 0:
            return ring, []
        es = [((n - 1, -(n - 1)), ring[0])]
        es += list(zip(ring, ring[1:]))
        seen = {frozenset(e) for e in es}
        rest = []
        for x, y in ring:
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                q = (x + dx, y + dy)
                if max(abs(q[0]), abs(q[1])) <= n and frozenset(((x, y), q)) not in seen:
                    seen.add(frozenset(((x, y), q)))
                    rest.append(tuple(sorted(((x, y), q))))
        es += sorted(rest)
        return ring, es

    return GraphLevels("grid", inc, base=(0, 0))


def finite_graph(edges: Sequence[tuple], base: Hashable | None = None, name: str = "finite") -> GraphLevels:
    """Constant levels from ``(u, v)`` or ``(id, u, v)`` edges."""
    norm = []
    for i, e in enumerate(edges):
        norm.append((i, *e) if len(e) == 2 else tuple(e))
    verts = sorted({x for _, u, v in norm for x in (u, v)}, key=idkey)
    if base is None:
        if not verts:
            raise GraphError("finite graph needs an edge or a base")
        base = verts[0]
    allv = verts if base in verts else [base] + verts
    return GraphLevels(name, lambda n: (allv, norm), base=base, final_level=0)


def k4() -> GraphLevels:
    return finite_graph([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], name="K4")


BUILTINS = {
    "ladder": _ladder,
    "double_ladder": _double_ladder,
    "grid": _grid,
    "ray": _ray,
    "star_of_rays": _star_of_rays,
    "binary_tree": _binary_tree,
    "t2_doubled_tree": _t2_doubled_tree,
    "t2": _t2_doubled_tree,
    "finite": finite_graph,
    "K4": k4,
}


def builtin(name: str, *params) -> GraphLevels:
    try:
        make = BUILTINS[name]
    except KeyError:
        raise GraphError(f"unknown graph family {name!r}; known: {', '.join(sorted(BUILTINS))}") from None
    try:
        return make(*params)
    except TypeError as exc:
        raise GraphError(f"bad parameters for {name}: {exc}") from None


def validate_levels(g: GraphLevels, depth: int) -> Verdict:
    """Spot-check the exhaustion contract for levels ``0..depth``."""
    top = g.level(depth + 1)
    far = top.distances(g.base)
    prev_v: frozenset = frozenset()
    for n in range(depth + 1):
        L = g.level(n)
        bad = lambda why: Verdict("ViolationAt", depth=depth, level=n, detail={"reason": why})
        if g.base not in L.vertices:
            return bad("base missing")
        if not prev_v <= L.vertices:
            return bad("level lost vertices")
        if not L.is_connected():
            return bad("level is disconnected")
        near = L.distances(g.base)
        for x, d in far.items():
            if d <= n and near.get(x) != d:
                return bad(f"vertex {x} at distance {d} missing or misplaced")
        if g.degree_bound is not None:
            for x, d in near.items():
                if d <= n - 1 and len(L.adjacency[x]) > g.degree_bound(x):
                    return bad(f"vertex {x} exceeds its degree bound")
        prev_v = L.vertices
    return Verdict("CoherentUpTo", depth=depth)


# -- components and ends ------------------------------------------------------------


def ball(g: GraphLevels, r: int, depth: int) -> frozenset:
    return frozenset(x for x, d in g.distances(depth).items() if d <= r)


def components_outside(g: GraphLevels, r: int, depth: int) -> dict:
    """Components of ``L_depth - B_r(base)``, keyed by their least vertex."""
    if r >= depth:
        raise GraphError(f"radius {r} must be below depth {depth}")
    L = g.level(depth)
    inner = ball(g, r, depth)
    uf = UnionFind(x for x in L.vertices if x not in inner)
    for e in L.edges:
        if e.u not in inner and e.v not in inner:
            uf.union(e.u, e.v)
    return {
        min(members, key=idkey): frozenset(members) for members in uf.groups().values()
    }


@dataclass(frozen=True)
class ComponentThread:
    """A coherent choice of component of ``L_depth - B_r`` for ``r = 0..len-1``."""

    depth: int
    ids: tuple
    components: tuple[frozenset, ...] = field(repr=False)

    @property
    def radius(self) -> int:
        return len(self.ids) - 1

    def at(self, r: int) -> frozenset:
        return self.components[r]


def _alive(g: GraphLevels, comp: frozenset, depth: int) -> bool:
    return not comp.isdisjoint(g.frontier(depth))


def default_radius(depth: int) -> int:
    return max(0, depth // 2)


def end_threads(g: GraphLevels, depth: int, radius: int | None = None) -> list[ComponentThread]:
    """Threads through radii ``0..radius`` whose deepest part reaches the frontier.

    Components are read in ``L_depth``; the default radius ``depth // 2``
    leaves room for truncation artifacts near the frontier to merge.
    """
    R = default_radius(depth) if radius is None else radius
    if depth < 1:
        return []
    R = min(R, depth - 1)
    per_r = [components_outside(g, r, depth) for r in range(R + 1)]
    owner = []
    for comps in per_r:
        where = {}
        for cid, members in comps.items():
            for x in members:
                where[x] = cid
        owner.append(where)
    threads = []
    for cid, members in sorted(per_r[R].items(), key=lambda kv: idkey(kv[0])):
        if not _alive(g, members, depth):
            continue
        x = next(iter(members))
        ids = tuple(owner[r][x] for r in range(R + 1))
        threads.append(ComponentThread(depth, ids, tuple(per_r[r][i] for r, i in enumerate(ids))))
    return threads


# -- spanning trees and chords -----------------------------------------------------------


class Chord(NamedTuple):
    """Chord ``e<index>`` with its natural orientation ``tail -> head``."""

    index: int
    edge: Hashable
    tail: Hashable
    head: Hashable
    level: int


ChordTable = tuple  # tuple[Chord, ...]


class TreeLevels:
    """Edge classification tree/chord that never changes as levels grow.

    By default an edge joins the tree iff it links two tree components when
    edges are taken in order (level of appearance, edge id).  A custom
    ``is_tree_edge(edge)`` predicate may be given instead; it is not
    checked here, see :func:`is_topological_tree_up_to`.
    """

    def __init__(self, g: GraphLevels, is_tree_edge: Callable[[Edge], bool] | None = None):
        self.graph = g
        self._pred = is_tree_edge
        self._uf = UnionFind()
        self._done = -1
        self._tree: set = set()
        self._tree_level: dict = {}
        self._chords: list[Chord] = []
        self._lock = threading.RLock()

    def _ensure(self, n: int) -> None:
        with self._lock:
            while self._done < n:
                k = self._done + 1
                g = self.graph
                L = g.level(k)
                for x in L.vertices:
                    self._uf.add(x)
                for e in g.new_edges(k):
                    if self._pred is not None:
                        take = self._pred(e)
                    else:
                        take = self._uf.union(e.u, e.v)
                    if take:
                        self._tree.add(e.id)
                    else:
                        tail, head = sorted((e.u, e.v), key=idkey)
                        self._chords.append(Chord(len(self._chords), e.id, tail, head, k))
                self._done = k

    def tree_edges(self, n: int) -> frozenset:
        self._ensure(n)
        return frozenset(e.id for e in self.graph.level(n).edges if e.id in self._tree)

    def is_tree_edge(self, eid: Hashable) -> bool:
        return eid in self._tree

    def chord_table(self, depth: int) -> ChordTable:
        self._ensure(depth)
        return tuple(c for c in self._chords if c.level <= depth)

    def chord_ids(self, depth: int) -> frozenset:
        return frozenset(c.edge for c in self.chord_table(depth))

    def chord(self, i: int, max_level: int = MAX_SEARCH_LEVEL) -> Chord:
        """Chord ``e<i>``, deepening until it is discovered."""
        n = max(self._done, 0)
        while len(self._chords) <= i:
            limit = self.graph.final_level if self.graph.final_level is not None else max_level
            if n > limit:
                raise UndiscoveredChord(f"chord e{i} not found by level {limit}")
            self._ensure(n)
            n += 1
        return self._chords[i]

    def width_at(self, depth: int) -> int:
        """Number of chords discovered by level ``depth``."""
        return len(self.chord_table(depth))


def spanning_tree(g: GraphLevels, depth: int) -> tuple[TreeLevels, ChordTable]:
    t = TreeLevels(g)
    return t, t.chord_table(depth)


def _tree_components(t: TreeLevels, depth: int, within: frozenset) -> UnionFind:
    uf = UnionFind(within)
    for e in t.graph.level(depth).edges:
        if t.is_tree_edge(e.id) and e.u in within and e.v in within:
            uf.union(e.u, e.v)
    return uf


def is_topological_tree_up_to(t: TreeLevels, g: GraphLevels, depth: int, radius: int | None = None) -> Verdict:
    """Spanning at every level, and one tree end inside every graph end.

    Two tree rays running into the same end would close a circle through
    that end, so inside each thread's region the tree may reach the
    thread's frontier in only one piece.
    """
    for n in range(depth + 1):
        L = g.level(n)
        tree = t.tree_edges(n)
        uf = UnionFind(L.vertices)
        for e in L.edges:
            if e.id in tree and not uf.union(e.u, e.v):
                return Verdict("ViolationAt", depth=depth, level=n, detail={"reason": f"cycle at edge {e.id}"})
        if len(uf.groups()) != 1:
            return Verdict("ViolationAt", depth=depth, level=n, detail={"reason": "tree not spanning"})
    edge = g.frontier(depth)
    for thread in end_threads(g, depth, radius):
        frontier = [x for x in thread.at(thread.radius) if x in edge]
        for r in range(thread.radius + 1):
            uf = _tree_components(t, depth, thread.at(r))
            pieces = {uf.find(x) for x in frontier}
            if len(pieces) != 1:
                return Verdict(
                    "ViolationAt",
                    depth=depth,
                    level=r,
                    count=len(pieces),
                    witness=thread.ids[-1],
                    detail={"reason": f"{len(pieces)} tree ends in one graph end at radius {r}"},
                )
    return Verdict("TreeUpTo", depth=depth)


def trivial_end_check(g: GraphLevels, t: TreeLevels, thread: ComponentThread, depth: int) -> Verdict:
    """``TrivialAt(r)`` for the least radius whose region touches no chord."""
    chords = t.chord_table(depth)
    counts = []
    for r in range(thread.radius + 1):
        region = thread.at(r)
        hits = sum(1 for c in chords if c.tail in region or c.head in region)
        counts.append(hits)
        if hits == 0:
            return Verdict("TrivialAt", depth=depth, level=r, witness=thread.ids[-1])
    return Verdict("NontrivialUpTo", depth=depth, count=counts[-1], witness=thread.ids[-1])


def chord_region(c: int, t: TreeLevels, g: GraphLevels, r: int, depth: int, _comps: dict | None = None):
    """Component of ``L_depth - B_r`` holding both ends of chord ``c``, else :data:`CORE`."""
    table = t.chord_table(depth)
    if c >= len(table):
        raise UndiscoveredChord(f"chord e{c} not discovered by level {depth}")
    chord = table[c]
    comps = _comps if _comps is not None else components_outside(g, r, depth)
    for cid, members in comps.items():
        if chord.tail in members:
            return cid if chord.head in members else CORE
    return CORE


# -- subspaces -----------------------------------------------------------------------


class SubspaceMask:
    """Edge-selected subgraph ``H``; endpoints come along with their edges."""

    def __init__(self, select: Callable[[Edge], bool], name: str = "mask"):
        self.select = select
        self.name = name

    def restrict(self, g: GraphLevels) -> GraphLevels:
        def inc(n):
            es = [(e.id, e.u, e.v) for e in g.new_edges(n) if self.select(e)]
            vs = [g.base] if n == 0 else []
            return vs, es

        return GraphLevels(f"{g.name}|{self.name}", inc, base=g.base, params=g.params, final_level=g.final_level)

    def check(self, g: GraphLevels, depth: int) -> Verdict:
        h = self.restrict(g)
        for n in range(depth + 1):
            if not h.level(n).is_connected():
                return Verdict("ViolationAt", depth=depth, level=n, detail={"reason": "selected subgraph disconnected"})
        return Verdict("CoherentUpTo", depth=depth)
