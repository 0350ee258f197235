"""Finite simple graphs: component decomposition, rooted-tree and unicyclic views.

Vertices are dense integers 0..n-1.  Graphs and all derived views are
immutable after construction, so they can be shared freely across threads.
"""

from __future__ import annotations

import json
from collections import deque
from math import inf
from typing import Iterable, Iterator

INFINITE = inf

TREE = "tree"
UNICYCLIC = "unicyclic"
COMPLEX = "complex"


class GraphError(ValueError):
    """Malformed graph input (self-loop, duplicate edge, bad vertex id)."""


class NotUnicyclic(ValueError):
    """A unicyclic view was requested for a non-unicyclic component."""


class NotTreelike(ValueError):
    """A rooted ball was requested around a vertex whose ball closes a cycle."""


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        adj: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self.edges = frozenset(seen)
        for neighbors in adj:
            neighbors.sort()
        self.adj = tuple(tuple(neighbors) for neighbors in adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return ((u, v) if u < v else (v, u)) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"

    # -- file formats -------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": sorted(map(list, self.edges))})

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        try:
            data = json.loads(text)
            n = data["n"]
            edges = [(int(u), int(v)) for u, v in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"bad graph JSON: {exc}") from exc
        return cls(n, edges)

    def to_edgelist(self) -> str:
        lines = [f"n={self.n}"]
        lines.extend(f"{u} {v}" for u, v in sorted(self.edges))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> "Graph":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("n="):
            raise GraphError("edge list must start with a 'n=<int>' header")
        try:
            n = int(lines[0][2:])
            edges = []
            for ln in lines[1:]:
                u, v = ln.split()
                edges.append((int(u), int(v)))
        except ValueError as exc:
            raise GraphError(f"bad edge list: {exc}") from exc
        return cls(n, edges)


def disjoint_union(graphs: Iterable[Graph]) -> Graph:
    """Concatenate graphs, relabeling each block past the previous ones."""
    offset = 0
    edges: list[tuple[int, int]] = []
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, edges)


class Component:
    """A connected component together with its tree/unicyclic/complex class."""

    __slots__ = ("vertices", "edge_count", "kind", "cycle")

    def __init__(self, vertices: tuple[int, ...], edge_count: int, kind: str,
                 cycle: tuple[int, ...] | None = None):
        self.vertices = vertices
        self.edge_count = edge_count
        self.kind = kind
        self.cycle = cycle

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def excess(self) -> int:
        return self.edge_count - len(self.vertices)

    def __repr__(self) -> str:
        return f"Component({self.kind}, |V|={self.size}, |E|={self.edge_count})"


def _component_vertex_sets(g: Graph) -> Iterator[list[int]]:
    seen = bytearray(g.n)
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = 1
        stack = [start]
        comp = [start]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = 1
                    stack.append(w)
                    comp.append(w)
        yield comp


def _two_core(g: Graph, vertices: Iterable[int]) -> set[int]:
    """Vertices left after iteratively stripping degree-<=1 vertices."""
    verts = set(vertices)
    deg = {v: sum(1 for w in g.adj[v] if w in verts) for v in verts}
    queue = deque(v for v, d in deg.items() if d <= 1)
    alive = set(verts)
    while queue:
        v = queue.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for w in g.adj[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] <= 1:
                    queue.append(w)
    return alive


def _cycle_order(g: Graph, cycle_vertices: set[int]) -> tuple[int, ...]:
    """List a simple cycle consecutively, starting at its smallest vertex.

    Orientation and start are provisional; canonical enumeration under the
    dihedral group happens at type-assignment time.
    """
    start = min(cycle_vertices)
    order = [start]
    prev = None
    cur = start
    while True:
        nxts = [w for w in g.adj[cur] if w in cycle_vertices and w != prev]
        # move to the smaller neighbor on the first step for determinism
        nxt = min(nxts)
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return tuple(order)


def decompose(g: Graph) -> list[Component]:
    """Split into components, classified by the edge/vertex count rule."""
    comps = []
    for verts in _component_vertex_sets(g):
        vset = set(verts)
        ecount = sum(1 for v in verts for w in g.adj[v] if w > v and w in vset)
        nverts = len(verts)
        if ecount == nverts - 1:
            comp = Component(tuple(sorted(verts)), ecount, TREE)
        elif ecount == nverts:
            cyc = _two_core(g, verts)
            comp = Component(tuple(sorted(verts)), ecount, UNICYCLIC,
                             cycle=_cycle_order(g, cyc))
        else:
            comp = Component(tuple(sorted(verts)), ecount, COMPLEX)
        comps.append(comp)
    comps.sort(key=lambda c: c.vertices[0])
    return comps


class RootedTreeView:
    """A tree with a distinguished root, parent pointers and depths."""

    __slots__ = ("root", "parent", "depth", "children", "_order")

    def __init__(self, root: int, parent: dict[int, int], depth: dict[int, int]):
        self.root = root
        self.parent = parent
        self.depth = depth
        children: dict[int, list[int]] = {v: [] for v in depth}
        for v, p in parent.items():
            children[p].append(v)
        for v in children:
            children[v].sort()
        self.children = {v: tuple(cs) for v, cs in children.items()}
        self._order = tuple(sorted(depth, key=lambda v: (depth[v], v)))

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._order

    @property
    def size(self) -> int:
        return len(self.depth)

    @property
    def max_depth(self) -> int:
        return self.depth[self._order[-1]] if self._order else 0

    def __contains__(self, v: int) -> bool:
        return v in self.depth

    def subtree(self, v: int) -> "RootedTreeView":
        """The subtree spanned by v and all its descendants, rooted at v."""
        parent: dict[int, int] = {}
        depth = {v: 0}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in self.children[u]:
                parent[w] = u
                depth[w] = depth[u] + 1
                stack.append(w)
        return RootedTreeView(v, parent, depth)

    def distance(self, u: int, v: int) -> int:
        """Tree metric via walking the two vertices up to their meeting point."""
        du, dv = self.depth[u], self.depth[v]
        dist = 0
        while du > dv:
            u = self.parent[u]
            du -= 1
            dist += 1
        while dv > du:
            v = self.parent[v]
            dv -= 1
            dist += 1
        while u != v:
            u = self.parent[u]
            v = self.parent[v]
            dist += 2
        return dist

    def rootchildren(self) -> tuple[int, ...]:
        return self.children[self.root]

    def as_graph_edges(self) -> list[tuple[int, int]]:
        return [(p, v) for v, p in self.parent.items()]

    def __repr__(self) -> str:
        return f"RootedTreeView(root={self.root}, |V|={self.size}, depth={self.max_depth})"


def truncate(t: RootedTreeView, n: int) -> RootedTreeView:
    """Retain only vertices at depth <= n."""
    if t.max_depth <= n:
        return t
    depth = {v: d for v, d in t.depth.items() if d <= n}
    parent = {v: p for v, p in t.parent.items() if v in depth}
    return RootedTreeView(t.root, parent, depth)


def bfs_tree(g: Graph, root: int, within: set[int] | None = None,
             max_depth: int | None = None) -> RootedTreeView:
    """BFS tree from root, optionally restricted to a vertex set and a depth cap.

    Does not check acyclicity; callers wanting a guarantee use rooted_ball.
    """
    parent: dict[int, int] = {}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        if max_depth is not None and depth[u] >= max_depth:
            continue
        for w in g.adj[u]:
            if w in depth or (within is not None and w not in within):
                continue
            parent[w] = u
            depth[w] = depth[u] + 1
            queue.append(w)
    return RootedTreeView(root, parent, depth)


def rooted_ball(g: Graph, u: int, r: int) -> RootedTreeView:
    """The radius-r ball around u as a rooted tree; fails if it closes a cycle."""
    parent: dict[int, int] = {}
    depth = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if depth[x] >= r:
            continue
        for w in g.adj[x]:
            if w == parent.get(x):
                continue
            if w in depth:
                raise NotTreelike(
                    f"ball of radius {r} around {u} contains a cycle through {w}")
            parent[w] = x
            depth[w] = depth[x] + 1
            queue.append(w)
    # cross edges between equal-depth frontier vertices also close cycles
    for x in depth:
        if depth[x] == r:
            for w in g.adj[x]:
                if w in depth and w != parent.get(x) and parent.get(w) != x:
                    raise NotTreelike(
                        f"ball of radius {r} around {u} contains a cycle through {w}")
    return RootedTreeView(u, parent, depth)


class UnicyclicView:
    """Cycle vertices in consecutive order plus the trees hanging off them."""

    __slots__ = ("cycle", "trees", "an")

    def __init__(self, cycle: tuple[int, ...], trees: dict[int, RootedTreeView]):
        self.cycle = cycle
        self.trees = trees
        an: dict[int, int] = {}
        for c, t in trees.items():
            for v in t.vertices:
                an[v] = c
        self.an = an

    @property
    def s(self) -> int:
        return len(self.cycle)

    @property
    def vertices(self) -> list[int]:
        return sorted(self.an)

    @property
    def max_depth(self) -> int:
        return max(t.max_depth for t in self.trees.values())

    def depth(self, v: int) -> int:
        return self.trees[self.an[v]].depth[v]

    def cycle_distance(self, i: int, j: int) -> int:
        """Distance along the cycle between positions i and j."""
        d = abs(i - j) % self.s
        return min(d, self.s - d)

    def truncated(self, n: int) -> "UnicyclicView":
        return UnicyclicView(self.cycle, {c: truncate(t, n) for c, t in self.trees.items()})

    def __repr__(self) -> str:
        return f"UnicyclicView(s={self.s}, |V|={len(self.an)})"


def unicyclic_view(g: Graph, comp: Component) -> UnicyclicView:
    """Cycle + hanging trees of a unicyclic component."""
    if comp.kind != UNICYCLIC:
        raise NotUnicyclic(f"component is {comp.kind}")
    cycle = comp.cycle
    assert cycle is not None
    cycset = set(cycle)
    compset = set(comp.vertices)
    trees = {}
    for c in cycle:
        allowed = (compset - cycset) | {c}
        trees[c] = bfs_tree(g, c, within=allowed)
    return UnicyclicView(cycle, trees)


def distance(g: Graph, u: int, v: int):
    """Shortest-path length; INFINITE across components."""
    if u == v:
        return 0
    depth = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w in g.adj[x]:
            if w not in depth:
                if w == v:
                    return depth[x] + 1
                depth[w] = depth[x] + 1
                queue.append(w)
    return INFINITE


def distances_from(g: Graph, u: int) -> dict[int, int]:
    """BFS distances from u to every vertex in its component."""
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w in g.adj[x]:
            if w not in dist:
                dist[w] = dist[x] + 1
                queue.append(w)
    return dist
