"""Finite graphs and the constructions used throughout the package.

Vertex ids are dense integers ``0..n-1``.  Every edge is stored as ``(u, v)``
with ``u < v``; for interior points of an edge, ``t = 0`` sits at ``u``.  The
lattice constructors number vertices in lexicographic order of their
coordinates, so the smaller id is also the lexicographically smaller point.

Each edge also carries a 64-bit *key* used by the Monte Carlo samplers to
draw its random state.  Lattice constructors derive keys from geometry
(lower endpoint coordinates plus direction), so the same physical edge gets
the same random numbers in boxes of different radii.

Lattice embeddings:

* triangular lattice: axial coordinates ``(q, s)``; neighbours differ by
  ``±(1, 0)``, ``±(0, 1)``, ``±(1, -1)``; graph distance is
  ``max(|q|, |s|, |q + s|)``.
* hexagonal lattice: brick-wall representation on ``Z^2``; every vertex has
  its two horizontal neighbours, plus ``(x, y + 1)`` when ``x + y`` is even
  or ``(x, y - 1)`` when it is odd.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, InvalidParameter
from .rng import mix64_py

DEFAULT_VERTEX_BUDGET = 10**6

PEAK, MIDDLE, PLAIN = "peak", "middle", "plain"
ROLES = (PEAK, MIDDLE, PLAIN)


@dataclass(frozen=True, eq=False)
class Graph:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    origin: int = 0
    roles: dict[int, str] = field(default_factory=dict)
    labels: dict[str, int] = field(default_factory=dict)
    coords: tuple[tuple[int, ...], ...] | None = None
    edge_keys: tuple[int, ...] | None = None

    def __post_init__(self):
        n = len(self.vertices)
        if tuple(self.vertices) != tuple(range(n)):
            raise InvalidParameter("vertex ids must be dense integers 0..n-1")
        edges = []
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise InvalidParameter(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidParameter(f"edge ({u}, {v}) has an endpoint outside the vertex set")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise InvalidParameter(f"duplicate edge {e}")
            seen.add(e)
            edges.append(e)
        object.__setattr__(self, "edges", tuple(edges))
        if not 0 <= self.origin < n:
            raise InvalidParameter(f"origin {self.origin} is not a vertex")
        for v, role in self.roles.items():
            if role not in ROLES:
                raise InvalidParameter(f"unknown role {role!r}")
        if self.edge_keys is None:
            object.__setattr__(self, "edge_keys", tuple(range(len(edges))))
        elif len(self.edge_keys) != len(edges):
            raise InvalidParameter("edge_keys must align with edges")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and set(self.edges) == set(other.edges)
            and self.origin == other.origin
            and self.roles == other.roles
            and self.labels == other.labels
        )

    def __hash__(self):
        return hash((self.vertices, frozenset(self.edges), self.origin))

    def __contains__(self, v) -> bool:
        return isinstance(v, (int, np.integer)) and 0 <= v < len(self.vertices)

    def vertex(self, name: str) -> int:
        """Look up a named vertex (``"e"`` is the neighbour ``e`` of the origin)."""
        return self.labels[name]

    def id_of(self, point) -> int:
        """Vertex id of a lattice point given by its coordinates."""
        if self.coords is None:
            raise InvalidParameter("graph has no coordinates")
        try:
            return self._coord_index()[tuple(point)]
        except KeyError:
            raise InvalidParameter(f"{tuple(point)} is not in the graph") from None

    def _coord_index(self):
        cache = self.__dict__.get("_coord_cache")
        if cache is None:
            cache = {c: i for i, c in enumerate(self.coords)}
            object.__setattr__(self, "_coord_cache", cache)
        return cache

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in self.vertices]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def edge_index(self, u: int, v: int) -> int:
        e = (u, v) if u < v else (v, u)
        cache = self.__dict__.get("_edge_cache")
        if cache is None:
            cache = {edge: i for i, edge in enumerate(self.edges)}
            object.__setattr__(self, "_edge_cache", cache)
        try:
            return cache[e]
        except KeyError:
            raise InvalidParameter(f"{e} is not an edge") from None

    def has_edge(self, u: int, v: int) -> bool:
        try:
            self.edge_index(u, v)
        except InvalidParameter:
            return False
        return True

    def edge_array(self) -> np.ndarray:
        return np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)

    def key_array(self) -> np.ndarray:
        return np.asarray(self.edge_keys, dtype=np.uint64)

    def without_edges(self, removed) -> Graph:
        """Copy of the graph with the given edges deleted.

        Deleting an edge is how conditioning on ``{edge closed}`` is realised:
        edge states are independent, so the two are the same measure on the
        remaining edges.  Edge keys of the surviving edges are preserved.
        """
        drop = {self.edge_index(u, v) for u, v in removed}
        keep = [i for i in range(self.n_edges) if i not in drop]
        return Graph(
            vertices=self.vertices,
            edges=tuple(self.edges[i] for i in keep),
            origin=self.origin,
            roles=dict(self.roles),
            labels=dict(self.labels),
            coords=self.coords,
            edge_keys=tuple(self.edge_keys[i] for i in keep),
        )

    def distances(self, source: int | None = None) -> list[float]:
        """BFS distances from ``source`` (default: origin); unreachable is ``inf``."""
        source = self.origin if source is None else source
        adj = self.adjacency()
        dist = [math.inf] * self.n_vertices
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] == math.inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def is_connected(self) -> bool:
        return all(d < math.inf for d in self.distances())

    def to_text(self) -> str:
        lines = [f"v {self.n_vertices}", f"o {self.origin}"]
        lines += [f"e {u} {v}" for u, v in self.edges]
        lines += [f"r {v} {role}" for v, role in sorted(self.roles.items())]
        lines += [f"l {name} {v}" for name, v in sorted(self.labels.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Graph:
        n = origin = None
        edges, roles, labels = [], {}, {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tag, *rest = line.split()
            try:
                if tag == "v":
                    (n,) = map(int, rest)
                elif tag == "o":
                    (origin,) = map(int, rest)
                elif tag == "e":
                    u, v = map(int, rest)
                    edges.append((u, v))
                elif tag == "r":
                    v, role = rest
                    roles[int(v)] = role
                elif tag == "l":
                    name, v = rest
                    labels[name] = int(v)
                else:
                    raise ValueError(tag)
            except ValueError:
                raise InvalidParameter(f"line {lineno}: cannot parse {raw!r}") from None
        if n is None or origin is None:
            raise InvalidParameter("graph text needs both a 'v' and an 'o' line")
        return cls(tuple(range(n)), tuple(edges), origin, roles, labels)


def norm_of(g: Graph, v: int) -> float:
    """Graph distance from the origin to ``v`` (``math.inf`` if unreachable)."""
    if v not in g:
        raise InvalidParameter(f"{v} is not a vertex")
    return g.distances()[v]


def make_theta(n: int) -> Graph:
    """Two peaks ``v_0``, ``v_n`` joined through ``n - 1`` middle vertices."""
    if n < 3:
        raise InvalidParameter(f"theta graph needs n >= 3, got {n}")
    edges = []
    for i in range(1, n):
        edges += [(0, i), (i, n)]
    roles = {i: MIDDLE for i in range(1, n)}
    roles[0] = roles[n] = PEAK
    return Graph(tuple(range(n + 1)), tuple(edges), 0, roles)


def glue(g1: Graph, x: int, g2: Graph, y: int) -> Graph:
    """Identify ``x`` of ``g1`` with ``y`` of ``g2``.

    ``g1`` keeps its ids; the merged vertex keeps ``x``'s id and the
    remaining vertices of ``g2`` follow in their original order.
    """
    if x not in g1:
        raise InvalidParameter(f"{x} is not a vertex of the first graph")
    if y not in g2:
        raise InvalidParameter(f"{y} is not a vertex of the second graph")
    remap = {}
    nxt = g1.n_vertices
    for w in g2.vertices:
        if w == y:
            remap[w] = x
        else:
            remap[w] = nxt
            nxt += 1
    edges = list(g1.edges) + [(remap[u], remap[v]) for u, v in g2.edges]
    roles = dict(g1.roles)
    roles.update({remap[w]: r for w, r in g2.roles.items() if w != y})
    if roles or g2.roles:
        roles[x] = PLAIN
    return Graph(tuple(range(nxt)), tuple(edges), g1.origin, roles, dict(g1.labels))


def tree_glued_size(n: int, k: int) -> int:
    return (n + 1) * sum(n**j for j in range(k + 1))


def make_tree_glued(n: int, k: int, budget: int = DEFAULT_VERTEX_BUDGET) -> Graph:
    """``k`` rounds of gluing fresh theta copies onto every non-glued vertex.

    A non-glued peak receives a copy through that copy's middle vertex
    ``v_1``; a non-glued middle vertex receives a copy through its peak
    ``v_0``.  The result equals repeated :func:`glue` calls in increasing id
    order.  Glued vertices get the role ``plain``; non-glued ones keep theirs.
    """
    return _tree_glued(n, k, budget)[0]


def tree_glued_copies(n: int, k: int, budget: int = DEFAULT_VERTEX_BUDGET) -> list[list[int]]:
    """For each theta copy inside ``make_tree_glued(n, k)``, the global ids of
    its vertices ``v_0..v_n`` (copy 0 is the base graph)."""
    return _tree_glued(n, k, budget)[1]


def _tree_glued(n, k, budget):
    if n < 4:
        raise InvalidParameter(f"tree-glued graph needs n >= 4, got {n}")
    if k < 0:
        raise InvalidParameter(f"k must be >= 0, got {k}")
    total = tree_glued_size(n, k)
    if total > budget:
        raise BudgetExceeded(f"G_{k} of P_{n} has {total} vertices, budget is {budget}")
    base = make_theta(n)
    edges = list(base.edges)
    roles = dict(base.roles)
    copies = [list(base.vertices)]
    frontier = list(base.vertices)
    count = base.n_vertices
    for _ in range(k):
        new_frontier = []
        for w in frontier:
            anchor = 1 if roles[w] == PEAK else 0
            ids = []
            for c in base.vertices:
                if c == anchor:
                    ids.append(w)
                else:
                    ids.append(count)
                    roles[count] = base.roles[c]
                    new_frontier.append(count)
                    count += 1
            edges += [(ids[a], ids[b]) for a, b in base.edges]
            roles[w] = PLAIN
            copies.append(ids)
        frontier = new_frontier
    return Graph(tuple(range(count)), tuple(edges), 0, roles), copies


def non_glued(g: Graph) -> list[int]:
    return [v for v, r in g.roles.items() if r != PLAIN]


def _coord_key(point, direction: int) -> int:
    h = mix64_py(0x5EED ^ len(point))
    for c in point:
        h = mix64_py(h ^ (c & 0xFFFFFFFFFFFFFFFF))
    return mix64_py(h ^ (direction + 1))


def _lattice(points, forward, origin, labels) -> Graph:
    """Assemble a lattice patch from its points and forward neighbour rule."""
    points = sorted(points)
    index = {c: i for i, c in enumerate(points)}
    edges, keys = [], []
    for i, c in enumerate(points):
        for direction, nb in forward(c):
            j = index.get(nb)
            if j is not None:
                edges.append((i, j))
                keys.append(_coord_key(c, direction))
    return Graph(
        tuple(range(len(points))),
        tuple(edges),
        index[origin],
        labels={name: index[c] for name, c in labels.items()},
        coords=tuple(points),
        edge_keys=tuple(keys),
    )


def l1_ball_size(d: int, r: int) -> int:
    return sum(2**j * math.comb(d, j) * math.comb(r, j) for j in range(min(d, r) + 1))


def make_box(d: int, r: int, remove_origin_edge: bool = False,
             budget: int = DEFAULT_VERTEX_BUDGET) -> Graph:
    """Nearest-neighbour graph on ``{x in Z^d : |x|_1 <= r}``.

    Label ``"e"`` is the unit vector ``(1, 0, ..., 0)``.  With
    ``remove_origin_edge`` the edge between the origin and ``e`` is absent.
    """
    if d < 1 or r < 1:
        raise InvalidParameter(f"box needs d >= 1 and r >= 1, got d={d}, r={r}")
    size = l1_ball_size(d, r)
    if size > budget:
        raise BudgetExceeded(f"box d={d} r={r} has {size} vertices, budget is {budget}")
    points = [x for x in itertools.product(range(-r, r + 1), repeat=d)
              if sum(map(abs, x)) <= r]
    units = [tuple(int(i == j) for j in range(d)) for i in range(d)]

    def forward(c):
        for i, u in enumerate(units):
            yield i, tuple(a + b for a, b in zip(c, u))

    origin = (0,) * d
    g = _lattice(points, forward, origin, {"e": units[0]})
    if remove_origin_edge:
        g = g.without_edges([(g.origin, g.vertex("e"))])
    return g


def make_triangular_patch(r: int, budget: int = DEFAULT_VERTEX_BUDGET) -> Graph:
    """Radius-``r`` ball of the triangular lattice in axial coordinates.

    Labels: ``"e"`` is ``(1, 0)``; ``"z"`` is ``(0, 1)``, which closes the
    triangle ``{origin, e, z}``.
    """
    if r < 1:
        raise InvalidParameter(f"patch radius must be >= 1, got {r}")
    size = 3 * r * r + 3 * r + 1
    if size > budget:
        raise BudgetExceeded(f"triangular patch r={r} has {size} vertices, budget is {budget}")
    points = [(q, s) for q in range(-r, r + 1) for s in range(-r, r + 1)
              if max(abs(q), abs(s), abs(q + s)) <= r]
    steps = ((1, 0), (0, 1), (1, -1))

    def forward(c):
        for i, (dq, ds) in enumerate(steps):
            yield i, (c[0] + dq, c[1] + ds)

    return _lattice(points, forward, (0, 0), {"e": (1, 0), "z": (0, 1)})


def _brick_neighbours(c):
    x, y = c
    yield x + 1, y
    yield x - 1, y
    yield (x, y + 1) if (x + y) % 2 == 0 else (x, y - 1)


def make_hexagonal_patch(r: int, budget: int = DEFAULT_VERTEX_BUDGET) -> Graph:
    """Radius-``r`` graph-distance ball of the hexagonal (brick-wall) lattice.

    Label ``"e"`` is the horizontal neighbour ``(1, 0)`` of the origin.
    """
    if r < 1:
        raise InvalidParameter(f"patch radius must be >= 1, got {r}")
    dist = {(0, 0): 0}
    queue = deque([(0, 0)])
    while queue:
        c = queue.popleft()
        if dist[c] == r:
            continue
        for nb in _brick_neighbours(c):
            if nb not in dist:
                dist[nb] = dist[c] + 1
                if len(dist) > budget:
                    raise BudgetExceeded(f"hexagonal patch r={r} exceeds budget {budget}")
                queue.append(nb)

    def forward(c):
        x, y = c
        yield 0, (x + 1, y)
        if (x + y) % 2 == 0:
            yield 1, (x, y + 1)

    return _lattice(dist, forward, (0, 0), {"e": (1, 0)})
