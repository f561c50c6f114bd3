"""Factorization of birational maps of completions into elementary links."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .cluster import WeightedGraph
from .pairs import (Completion, contract_curves, contract_extremity,
                    validate_map_constraints)


class IsomorphismError(ValueError):
    """Raised when a map has no links: both markers are the same curve."""


@dataclass(frozen=True)
class MapResolution:
    """Boundary tree of the minimal resolution of a map, with both boundary markers."""

    graph: WeightedGraph
    e0: str
    e0p: str
    exc_source: frozenset = None
    exc_target: frozenset = None

    def __post_init__(self):
        for m in (self.e0, self.e0p):
            self.graph.self_int(m)
        rest = frozenset(self.graph.vertices)
        if self.exc_source is None:
            object.__setattr__(self, "exc_source", rest - {self.e0})
        if self.exc_target is None:
            object.__setattr__(self, "exc_target", rest - {self.e0p})
        object.__setattr__(self, "exc_source", frozenset(self.exc_source))
        object.__setattr__(self, "exc_target", frozenset(self.exc_target))

    def reversed(self):
        return MapResolution(self.graph, self.e0p, self.e0, self.exc_target, self.exc_source)

    def source(self):
        return contract_curves(self.graph, self.e0)

    def target(self):
        return contract_curves(self.graph, self.e0p)

    def to_json(self):
        data = self.graph.to_json()
        data.update(e0=self.e0, e0p=self.e0p,
                    exc_source=[v for v in self.graph.vertices if v in self.exc_source],
                    exc_target=[v for v in self.graph.vertices if v in self.exc_target])
        return data

    @classmethod
    def from_json(cls, data):
        graph = WeightedGraph.from_json(data)
        try:
            e0, e0p = data["e0"], data["e0p"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed map resolution JSON: {exc}") from None
        if e0 not in graph or e0p not in graph:
            raise ValueError("markers must be vertices of the graph")
        exc_source = data.get("exc_source")
        exc_target = data.get("exc_target")
        return cls(graph, e0, e0p,
                   None if exc_source is None else frozenset(exc_source),
                   None if exc_target is None else frozenset(exc_target))


@dataclass(frozen=True)
class Link:
    z_boundary: tuple
    z_completion: Completion
    left_target: Completion
    right_target: Completion

    @property
    def extracted(self):
        return self.z_boundary[1]

    @property
    def contracted(self):
        return self.z_boundary[0]


@dataclass(frozen=True)
class Factorization:
    links: tuple
    completions: tuple

    @property
    def is_isomorphism(self):
        return not self.links

    def __len__(self):
        return len(self.links)


def boundary_chain(r):
    if r.e0 == r.e0p:
        raise IsomorphismError("E0 = E0': the map is an isomorphism of pairs")
    if not r.graph.is_tree():
        raise ValueError("boundary graph is not a tree")
    return r.graph.path(r.e0, r.e0p)


def _run_mmp(y, markers, order):
    pair = y
    while len(pair.boundary) > 2:
        g = pair.resolution
        inner = [v for v in pair.boundary if v != markers[1]]
        left_side = set(next(c for c in g.components(inner) if markers[0] in c))
        candidates = [v for v in pair.boundary
                      if v not in markers and len(pair.boundary_neighbors(v)) == 1]
        if order == "left":
            candidates.sort(key=lambda v: v not in left_side)
        elif order == "right":
            candidates.sort(key=lambda v: v in left_side)
        else:
            raise ValueError(f"unknown contraction order {order!r}")
        for v in candidates:
            try:
                pair = contract_extremity(pair, v)
                break
            except ValueError:
                continue
        else:
            raise AssertionError("no boundary extremity is K+B negative")
    return pair


def _same(a, b):
    return (a.resolution == b.resolution and a.boundary == b.boundary
            and set(a.chains) == set(b.chains))


def factorize(r, order="left"):
    """Decompose the map into ``len(boundary_chain(r)) - 1`` elementary links."""
    if r.e0 == r.e0p:
        return Factorization((), (r.source(),))
    problems = validate_map_constraints(r)
    if problems:
        raise ValueError("; ".join(p.message for p in problems))
    chain = boundary_chain(r)
    current = r.source()
    completions, links = [current], []
    for prev, nxt in zip(chain, chain[1:]):
        y_graph = contract_curves(r.graph, (*current.resolution.vertices, nxt)).resolution
        y = Completion(y_graph, y_graph.vertices, ())
        z = _run_mmp(y, (prev, nxt), order)
        z = Completion(z.resolution, (prev, nxt), z.chains)
        for b in z.boundary:
            if len(z.chains_on(b)) > 1:
                raise AssertionError(f"boundary curve {b} of Z supports two singular points")
        left = contract_extremity(z, nxt)
        right = contract_extremity(z, prev)
        if not _same(left, current):
            raise AssertionError(f"link {prev}->{nxt} does not start at the previous completion")
        if not _same(right, contract_curves(r.graph, nxt)):
            raise AssertionError(f"link {prev}->{nxt} does not reach the expected completion")
        links.append(Link((prev, nxt), z, left, right))
        completions.append(right)
        current = right
    return Factorization(tuple(links), tuple(completions))


def is_triangular(fz):
    return all(not c.is_smooth for c in fz.completions[1:-1])


def link_indices(fz):
    source = fz.completions[0]
    if not source.is_smooth:
        raise ValueError("source completion must be smooth")
    d = source.resolution.self_int(source.boundary_vertex)
    indices = [c.index() for c in fz.completions]
    if d <= 0 and any(i != 1 for i in indices):
        raise ValueError(f"boundary self-intersection {d} <= 0 but an intermediate completion is singular")
    return indices


class Choice(Enum):
    AT_SINGULAR_POINT = "up"
    ELSEWHERE = "down"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {"up": cls.AT_SINGULAR_POINT, "at_singular_point": cls.AT_SINGULAR_POINT,
                   "down": cls.ELSEWHERE, "elsewhere": cls.ELSEWHERE}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown choice {value!r}") from None


def simulate_indices(d, choices):
    """Indices of the completions met when each next base point is chosen as given."""
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ValueError("d must be a positive integer")
    states = [1]
    descending = False
    for step, raw in enumerate(choices, 1):
        choice = Choice.parse(raw)
        m = states[-1]
        if m == 1:
            if choice is Choice.ELSEWHERE:
                raise ValueError(f"step {step}: cannot descend below index 1")
            states.append(2)
            descending = False
        elif choice is Choice.AT_SINGULAR_POINT:
            if descending:
                raise ValueError(f"step {step}: descent is forced after a descent while the index is >= 2")
            states.append(m + 1)
        else:
            states.append(m - 1)
            descending = True
    return states


def _triangular_graph(d, k, src, dst, prefix=""):
    """Vertices and edges of the minimal resolution of a triangular map of peak index k."""
    centre, c = f"{prefix}M", f"{prefix}C"
    vertices = {src: -1, dst: -1, centre: -2, c: -k}
    edges = [(centre, c)]
    for side, marker in (("H", src), ("H'", dst)):
        arm = [f"{prefix}{side}{j}" for j in range(1, k - 1)]
        path = [marker, *arm, centre]
        vertices.update({v: -2 for v in arm})
        edges.extend(zip(path, path[1:]))
    tail = [c] + [f"{prefix}D{j}" for j in range(1, d)]
    vertices.update({v: -2 for v in tail[1:]})
    edges.extend(zip(tail, tail[1:]))
    order = [src, *[v for v in vertices if v not in (src, dst)], dst]
    return WeightedGraph([(v, vertices[v]) for v in order], edges)


def build_triangular_resolution(d, k, src="E0", dst="E0'", prefix=""):
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ValueError("d must be a positive integer")
    if isinstance(k, bool) or not isinstance(k, int) or k < 2:
        raise ValueError("k must be an integer >= 2")
    return MapResolution(_triangular_graph(d, k, src, dst, prefix), src, dst)


def minimize(r):
    """Blow down (-1)-curves exceptional on both sides until the resolution is minimal."""
    g = r.graph
    while True:
        bad = [v for v in g.vertices if v not in (r.e0, r.e0p) and g.self_int(v) == -1]
        if not bad:
            return MapResolution(g, r.e0, r.e0p)
        g = g.blow_down(bad[0])


def truncate(r, m):
    """Resolution of the map through the first ``m`` links of the factorization of ``r``."""
    chain = boundary_chain(r)
    if not 0 <= m < len(chain):
        raise ValueError(f"cannot keep {m} of {len(chain) - 1} links")
    if m == 0:
        return MapResolution(contract_curves(r.graph, r.e0).resolution, r.e0, r.e0)
    return minimize(MapResolution(r.graph, r.e0, chain[m]))


def glue(rf, rg):
    """Joint resolution of ``g o f`` from those of f and g, assuming disjoint base point towers.

    The result need not be minimal (see :func:`minimize`).
    """
    mid_f, mid_g = rf.target(), rg.source()
    if rf.e0p != rg.e0 or not _same(mid_f, mid_g):
        raise ValueError("target of the first map differs from the source of the second")
    middle = set(mid_f.resolution.vertices)
    fx, gx, mx = rf.graph, rg.graph, mid_f.resolution
    clash = (set(fx.vertices) - middle) & (set(gx.vertices) - middle)
    if clash:
        raise ValueError(f"vertex ids used on both sides: {sorted(clash)}")
    vertices = []
    for v in fx.vertices:
        s = fx.self_int(v) + gx.self_int(v) - mx.self_int(v) if v in middle else fx.self_int(v)
        vertices.append((v, s))
    vertices.extend((v, gx.self_int(v)) for v in gx.vertices if v not in middle)
    edges = set()
    for graph, other in ((fx, gx), (gx, fx)):
        for a, b in graph.edges:
            if a in middle and b in middle:
                if other.has_edge(a, b):
                    edges.add(frozenset((a, b)))
            else:
                edges.add(frozenset((a, b)))
    return MapResolution(WeightedGraph(vertices, [tuple(e) for e in edges]), rf.e0, rg.e0p)


def build_from_choices(d, choices):
    """Resolution of a map of smooth completions whose link indices follow ``choices``."""
    states = simulate_indices(d, choices)
    pieces, start = [], 0
    for i in range(1, len(states)):
        if states[i] == 1:
            pieces.append((start, i))
            start = i
    if start < len(states) - 1:
        pieces.append((start, len(states) - 1))
    if not pieces:
        return MapResolution(WeightedGraph([("B0", d)]), "B0", "B0")
    result = None
    for j, (a, b) in enumerate(pieces):
        segment = states[a:b + 1]
        peak = max(segment)
        r = build_triangular_resolution(d, peak, f"B{j}", f"B{j + 1}", prefix=f"T{j}.")
        if segment[-1] != 1:
            r = truncate(r, b - a)
            r = _rename(r, {r.e0p: f"B{j + 1}"})
        result = r if result is None else glue(result, r)
    return result


def _rename(r, mapping):
    g = r.graph
    name = lambda v: mapping.get(v, v)
    graph = WeightedGraph([(name(v), g.self_int(v)) for v in g.vertices],
                          [(name(a), name(b)) for a, b in g.edges])
    return MapResolution(graph, name(r.e0), name(r.e0p))


def sarkisov_lambda(a, m):
    """Ratios ``m_i / a_i`` and the set of curves attaining their maximum."""
    if set(a) != set(m):
        raise ValueError("discrepancy and multiplicity data must cover the same curves")
    lam = {}
    for v in a:
        av = Fraction(a[v])
        if av <= 0:
            raise ValueError(f"log discrepancy of {v} must be positive")
        lam[v] = Fraction(m[v]) / av
    if not lam:
        return lam, frozenset()
    top = max(lam.values())
    return lam, frozenset(v for v, x in lam.items() if x == top)


def lambda_exceeds_mu(lam, mu):
    """Whether the maximal multiplicity beats a caller-supplied degree mu."""
    return max(lam.values()) > Fraction(mu)


def check_maximal_extraction(fz, lam):
    if not fz.links:
        raise ValueError("factorization has no links")
    e1 = fz.links[0].extracted
    if e1 not in lam:
        raise KeyError(f"no multiplicity data for the first extracted curve {e1}")
    return lam[e1] == max(lam.values())


class ConcatResult(Enum):
    CONCATENATES = "concatenates"
    MUST_REDUCE = "must_reduce"


def concat_check(rf, rg, smooth_middle_point, general_position):
    if rf.e0p != rg.e0 or not _same(rf.target(), rg.source()):
        raise ValueError("target of the first map differs from the source of the second")
    if smooth_middle_point and general_position:
        return ConcatResult.CONCATENATES
    return ConcatResult.MUST_REDUCE
