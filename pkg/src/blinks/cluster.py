"""Weighted dual graphs of boundary curves and blow-up cluster bookkeeping."""

from dataclasses import dataclass, field
from types import MappingProxyType


class WeightedGraph:
    """Smooth rational curves (vertices, with self-intersections) meeting transversally.

    Values are immutable: every modifier returns a new graph. Vertex order is
    insertion order and is kept stable for reproducible output.
    """

    __slots__ = ("_self", "_adj")

    def __init__(self, vertices=(), edges=()):
        selfs = {}
        items = vertices.items() if isinstance(vertices, dict) else vertices
        for v, s in items:
            if not isinstance(v, str) or not v:
                raise ValueError(f"vertex id must be a nonempty string, got {v!r}")
            if isinstance(s, bool) or not isinstance(s, int):
                raise ValueError(f"self-intersection of {v} must be an integer")
            selfs[v] = s
        adj = {v: set() for v in selfs}
        for e in edges:
            a, b = tuple(e)
            if a not in selfs or b not in selfs:
                raise ValueError(f"edge {a}-{b} has an unknown endpoint")
            if a == b:
                raise ValueError(f"self-loop at {a}")
            if b in adj[a]:
                raise ValueError(f"duplicate edge {a}-{b}")
            adj[a].add(b)
            adj[b].add(a)
        self._self = selfs
        self._adj = {v: frozenset(n) for v, n in adj.items()}

    @classmethod
    def _raw(cls, selfs, adj):
        g = cls.__new__(cls)
        g._self = selfs
        g._adj = {v: frozenset(n) for v, n in adj.items()}
        return g

    def __repr__(self):
        return f"WeightedGraph({self._self!r}, {sorted(self.edges)!r})"

    def __eq__(self, other):
        return isinstance(other, WeightedGraph) and self._self == other._self and self._adj == other._adj

    def __hash__(self):
        return hash((frozenset(self._self.items()), frozenset(self.edges)))

    def __contains__(self, v):
        return v in self._self

    def __len__(self):
        return len(self._self)

    @property
    def vertices(self):
        return tuple(self._self)

    @property
    def edges(self):
        order = {v: i for i, v in enumerate(self._self)}
        out = set()
        for a, ns in self._adj.items():
            for b in ns:
                out.add((a, b) if order[a] < order[b] else (b, a))
        return sorted(out, key=lambda e: (order[e[0]], order[e[1]]))

    @property
    def self_ints(self):
        return MappingProxyType(self._self)

    def self_int(self, v):
        self._require(v)
        return self._self[v]

    def neighbors(self, v):
        self._require(v)
        return self._adj[v]

    def degree(self, v):
        return len(self.neighbors(v))

    def has_edge(self, a, b):
        self._require(a)
        self._require(b)
        return b in self._adj[a]

    def _require(self, v):
        if v not in self._self:
            raise KeyError(f"unknown vertex {v!r}")

    def _copy(self):
        return dict(self._self), {v: set(n) for v, n in self._adj.items()}

    def with_self_int(self, v, value):
        self._require(v)
        selfs, adj = self._copy()
        selfs[v] = value
        return WeightedGraph._raw(selfs, adj)

    def add_vertex(self, v, self_int, neighbors=()):
        if v in self._self:
            raise ValueError(f"vertex {v!r} already exists")
        selfs, adj = self._copy()
        selfs[v] = self_int
        adj[v] = set()
        for n in neighbors:
            self._require(n)
            adj[v].add(n)
            adj[n].add(v)
        return WeightedGraph._raw(selfs, adj)

    def remove_vertex(self, v):
        self._require(v)
        selfs, adj = self._copy()
        del selfs[v]
        for n in adj.pop(v):
            adj[n].discard(v)
        return WeightedGraph._raw(selfs, adj)

    def subgraph(self, subset):
        keep = [v for v in self._self if v in set(subset)]
        for v in subset:
            self._require(v)
        return WeightedGraph._raw({v: self._self[v] for v in keep},
                                  {v: self._adj[v] & set(keep) for v in keep})

    def components(self, subset=None):
        """Connected components of the induced subgraph, in vertex order."""
        pool = set(self._self if subset is None else subset)
        order = {u: i for i, u in enumerate(self._self)}
        seen, out = set(), []
        for v in self._self:
            if v not in pool or v in seen:
                continue
            comp, stack = [], [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self._adj[x]:
                    if y in pool and y not in seen:
                        seen.add(y)
                        stack.append(y)
            out.append(sorted(comp, key=order.__getitem__))
        return out

    def is_connected(self):
        return len(self.components()) <= 1

    def is_tree(self):
        return self.is_connected() and len(self.edges) == max(len(self) - 1, 0)

    def path(self, a, b):
        """Vertices of the unique path from a to b in a tree, inclusive."""
        self._require(a)
        self._require(b)
        order = {u: i for i, u in enumerate(self._self)}
        parent = {a: None}
        queue = [a]
        for x in queue:
            for y in sorted(self._adj[x], key=order.__getitem__):
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        if b not in parent:
            raise ValueError(f"no path from {a} to {b}")
        out = [b]
        while out[-1] != a:
            out.append(parent[out[-1]])
        return out[::-1]

    def blow_down(self, v):
        """Contract a (-1)-curve meeting at most two others; the neighbours gain +1 and meet."""
        if self.self_int(v) != -1:
            raise ValueError(f"{v} is not a (-1)-curve")
        selfs, adj = self._copy()
        _blow_down_in_place(selfs, adj, v)
        return WeightedGraph._raw(selfs, adj)

    def blow_down_all(self, candidates):
        """Blow down (-1)-curves among ``candidates`` until none is left; returns the new graph."""
        selfs, adj = self._copy()
        pool = [v for v in selfs if v in candidates]
        changed = True
        while changed:
            changed = False
            for v in pool:
                if v in selfs and selfs[v] == -1:
                    _blow_down_in_place(selfs, adj, v)
                    changed = True
                    break
        return WeightedGraph._raw(selfs, adj)

    def to_json(self):
        return {
            "vertices": [{"id": v, "self": s} for v, s in self._self.items()],
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, data):
        try:
            vertices = [(item["id"], item["self"]) for item in data["vertices"]]
            edges = [tuple(e) for e in data.get("edges", [])]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed graph JSON: {exc}") from None
        if len({v for v, _ in vertices}) != len(vertices):
            raise ValueError("duplicate vertex id")
        if any(len(e) != 2 for e in edges):
            raise ValueError("edges must be pairs")
        return cls(vertices, edges)


def _blow_down_in_place(selfs, adj, v):
    ns = [u for u in selfs if u in adj[v]]
    if len(ns) > 2:
        raise ValueError(f"{v} meets {len(ns)} curves; contraction leaves the normal crossing model")
    if len(ns) == 2 and ns[1] in adj[ns[0]]:
        raise ValueError(f"contracting {v} makes {ns[0]} and {ns[1]} meet twice")
    del selfs[v]
    adj.pop(v)
    for n in ns:
        selfs[n] += 1
        adj[n].discard(v)
    if len(ns) == 2:
        a, b = ns
        adj[a].add(b)
        adj[b].add(a)


def intersection_matrix(graph, subset=None):
    """Intersection matrix of the curves in ``subset`` (in the given order)."""
    subset = list(graph.vertices if subset is None else subset)
    for v in subset:
        graph.self_int(v)
    return [[graph.self_int(a) if a == b else int(graph.has_edge(a, b)) for b in subset] for a in subset]


@dataclass(frozen=True)
class PointSpec:
    """Centre of a blow-up: on no curve, on one curve, or at the node of two."""

    on: tuple = ()
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "on", tuple(self.on))
        object.__setattr__(self, "aux", dict(self.aux))
        if len(self.on) > 2 or len(set(self.on)) != len(self.on):
            raise ValueError("a point lies on at most two distinct curves")
        for name, mult in self.aux.items():
            if isinstance(mult, bool) or not isinstance(mult, int) or mult < 0:
                raise ValueError(f"multiplicity of {name} must be a nonnegative integer")


@dataclass(frozen=True)
class ClusterState:
    graph: WeightedGraph
    strict: tuple = ()
    exceptional: tuple = ()
    aux_names: tuple = ()
    aux_coeffs: dict = field(default_factory=dict)

    @classmethod
    def start(cls, graph, aux=()):
        return cls(graph, tuple(graph.vertices), (), tuple(aux), {})

    def coeff(self, aux, v):
        return self.aux_coeffs.get((aux, v), 0)


def blow_up(state, point, new_id):
    g = state.graph
    if new_id in g:
        raise ValueError(f"vertex id {new_id!r} already used")
    for c in point.on:
        if c not in g:
            raise ValueError(f"unknown curve {c!r}")
    if len(point.on) == 2 and not g.has_edge(*point.on):
        raise ValueError(f"curves {point.on[0]} and {point.on[1]} do not meet")
    if len(point.on) == 2:
        selfs, adj = g._copy()
        adj[point.on[0]].discard(point.on[1])
        adj[point.on[1]].discard(point.on[0])
        g = WeightedGraph._raw(selfs, adj)
    for c in point.on:
        g = g.with_self_int(c, g.self_int(c) - 1)
    g = g.add_vertex(new_id, -1, point.on)
    coeffs = dict(state.aux_coeffs)
    names = list(dict.fromkeys([*state.aux_names, *point.aux]))
    exceptional = set(state.exceptional)
    for name in names:
        inherited = sum(state.coeff(name, c) for c in point.on if c in exceptional)
        coeffs[(name, new_id)] = point.aux.get(name, 0) + inherited
    return ClusterState(g, state.strict, state.exceptional + (new_id,), tuple(names), coeffs)


def total_transform_coeffs(state, aux):
    """Coefficients ``m_i`` of the exceptional curves in the total transform of ``aux``."""
    if aux not in state.aux_names:
        raise KeyError(f"unknown auxiliary curve {aux!r}")
    return {v: state.coeff(aux, v) for v in state.exceptional}


def run_script(graph, events):
    """Apply a JSON-style list of ``{"new", "on", "aux"}`` blow-up events."""
    state = ClusterState.start(graph)
    for event in events:
        try:
            point = PointSpec(tuple(event.get("on", ())), dict(event.get("aux", {})))
            new = event["new"]
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed blow-up event {event!r}: {exc}") from None
        state = blow_up(state, point, new)
    return state
