"""dlt completions stored as minimal resolutions with singularity chain records."""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .cluster import WeightedGraph, intersection_matrix
from .hj import hj_contract
from .linalg import is_negative_definite, solve


class Violation(NamedTuple):
    code: str
    message: str


@dataclass(frozen=True)
class Completion:
    """A completion (or an intermediate pair with several boundary curves).

    ``resolution`` is the boundary graph of the minimal resolution. Each entry
    of ``chains`` lists the exceptional curves over one singular point, starting
    with the curve that meets the boundary.
    """

    resolution: WeightedGraph
    boundary: tuple
    chains: tuple = ()

    def __post_init__(self):
        boundary = (self.boundary,) if isinstance(self.boundary, str) else tuple(self.boundary)
        object.__setattr__(self, "boundary", boundary)
        object.__setattr__(self, "chains", tuple(tuple(c) for c in self.chains))

    @property
    def boundary_vertex(self):
        if len(self.boundary) != 1:
            raise ValueError(f"pair has {len(self.boundary)} boundary components")
        return self.boundary[0]

    @property
    def sing_chains(self):
        return self.chains

    def weights(self, chain):
        return [-self.resolution.self_int(v) for v in chain]

    def chains_on(self, v):
        return tuple(c for c in self.chains if self.resolution.has_edge(c[0], v))

    def boundary_neighbors(self, v):
        return [u for u in self.boundary if u != v and self.resolution.has_edge(u, v)]

    @property
    def is_smooth(self):
        return not self.chains

    def index(self):
        """1 for a smooth completion, else minus the self-intersection of the curve meeting the boundary."""
        if not self.chains:
            return 1
        if len(self.chains) > 1:
            raise ValueError("index is defined for at most one singular point")
        return -self.resolution.self_int(self.chains[0][0])

    def resolution_chain(self):
        """Self-intersections along boundary curve followed by its single chain."""
        v = self.boundary_vertex
        out = [self.resolution.self_int(v)]
        for chain in self.chains:
            out.extend(self.resolution.self_int(u) for u in chain)
        return tuple(out)

    def to_json(self):
        data = self.resolution.to_json()
        data["boundary"] = self.boundary[0] if len(self.boundary) == 1 else list(self.boundary)
        data["chains"] = [list(c) for c in self.chains]
        return data

    @classmethod
    def from_json(cls, data):
        graph = WeightedGraph.from_json(data)
        try:
            boundary = data["boundary"]
            chains = data.get("chains", [])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed completion JSON: {exc}") from None
        if not isinstance(boundary, (str, list)) or not all(isinstance(c, list) for c in chains):
            raise ValueError("malformed completion JSON")
        return cls(graph, boundary, chains)

    @classmethod
    def from_resolution(cls, graph, boundary):
        """Read the chain records off a resolution graph."""
        boundary = (boundary,) if isinstance(boundary, str) else tuple(boundary)
        inner = [v for v in graph.vertices if v not in boundary]
        chains = []
        for comp in graph.components(inner):
            attach = [v for v in comp if any(graph.has_edge(v, b) for b in boundary)]
            start = attach[0] if attach else comp[0]
            chain, prev = [start], None
            while len(chain) < len(comp):
                nxt = [u for u in graph.neighbors(chain[-1]) if u in comp and u != prev and u not in chain]
                if not nxt:
                    break
                prev = chain[-1]
                chain.append(nxt[0])
            chains.append(tuple(chain) if len(chain) == len(comp) else tuple(comp))
        return cls(graph, boundary, chains)


def contract_curves(graph, keep):
    """Minimal resolution of the surface obtained by contracting every curve outside ``keep``.

    (-1)-curves off ``keep`` are blown down until none remain.
    """
    keep = (keep,) if isinstance(keep, str) else tuple(keep)
    for v in keep:
        graph.self_int(v)
    graph = graph.blow_down_all({v for v in graph.vertices if v not in keep})
    return Completion.from_resolution(graph, keep)


def validate_dlt(c):
    """List the violations of the dlt conditions; empty iff valid."""
    g = c.resolution
    out = []
    for b in c.boundary:
        if b not in g:
            out.append(Violation("unknown_vertex", f"boundary curve {b!r} is not in the graph"))
    if out:
        return out
    if not g.is_connected():
        out.append(Violation("disconnected", "resolution graph is disconnected"))
    elif not g.is_tree():
        out.append(Violation("not_a_tree", "boundary and chains do not form a tree"))
    seen = {}
    for i, chain in enumerate(c.chains):
        if not chain:
            out.append(Violation("empty_chain", f"chain {i} is empty"))
            continue
        for v in chain:
            if v not in g:
                out.append(Violation("unknown_vertex", f"chain vertex {v!r} is not in the graph"))
                continue
            if v in c.boundary or v in seen:
                out.append(Violation("duplicate_vertex", f"{v} appears twice in the completion"))
            seen[v] = i
            if g.self_int(v) > -2:
                out.append(Violation("chain_not_minimal", f"chain vertex {v} has self-intersection {g.self_int(v)} > -2"))
        if any(v not in g for v in chain):
            continue
        for a, b in zip(chain, chain[1:]):
            if not g.has_edge(a, b):
                out.append(Violation("chain_broken", f"consecutive chain curves {a}, {b} do not meet"))
        for j, v in enumerate(chain):
            hits = [b for b in c.boundary if g.has_edge(v, b)]
            if j == 0 and len(hits) != 1:
                out.append(Violation("chain_detached", f"chain starting at {v} meets {len(hits)} boundary curves"))
            if j > 0 and hits:
                out.append(Violation("chain_attached_in_middle", f"chain curve {v} meets the boundary away from the chain start"))
            extra = [u for u in g.neighbors(v) if u not in c.boundary and u not in chain]
            if extra:
                out.append(Violation("chain_branches", f"chain curve {v} meets curves outside its chain"))
    for v in g.vertices:
        if v not in c.boundary and v not in seen:
            out.append(Violation("unrecorded_vertex", f"{v} is neither boundary nor in a chain"))
    for b in c.boundary:
        count = sum(1 for chain in c.chains if chain and chain[0] in g and g.has_edge(chain[0], b))
        if count > 2:
            out.append(Violation("too_many_singularities", f"{b} supports {count} singular points"))
    return out


def adjunction_degree(neighbors, sing_indices=()):
    """(K + B).C for a boundary rational curve with ``neighbors`` boundary neighbours."""
    if isinstance(neighbors, bool) or not isinstance(neighbors, int) or neighbors < 0:
        raise ValueError("neighbor count must be a nonnegative integer")
    total = Fraction(-2 + neighbors)
    for m in sing_indices:
        if isinstance(m, bool) or not isinstance(m, int) or m < 2:
            raise ValueError(f"singularity index {m!r} must be an integer >= 2")
        total += 1 - Fraction(1, m)
    return total


def _check_boundary(c, v):
    if v not in c.boundary:
        raise KeyError(f"{v!r} is not a boundary curve")


def curve_degree(c, v):
    _check_boundary(c, v)
    indices = [hj_contract(c.weights(chain))[0] for chain in c.chains_on(v)]
    return adjunction_degree(len(c.boundary_neighbors(v)), indices)


def is_negative_extremal_boundary(c, v):
    return curve_degree(c, v) < 0


def boundary_self_intersection(c, v):
    """Self-intersection of boundary curve ``v`` on the singular surface."""
    _check_boundary(c, v)
    g = c.resolution
    total = Fraction(g.self_int(v))
    for chain in c.chains_on(v):
        weights = c.weights(chain)
        if min(weights) >= 2:
            n, q = hj_contract(weights)
            total += Fraction(q, n)
        else:
            m = intersection_matrix(g, chain)
            total += solve(m, [-1] + [0] * (len(chain) - 1))[0]
    return total


def log_discrepancies(graph, boundary, exceptional):
    """Coefficients a_i in ``K_X + B_X = pi^*(K_S + B_S) + sum a_i C_i``."""
    boundary = set(boundary)
    exceptional = [v for v in graph.vertices if v in set(exceptional)]
    for v in boundary:
        graph.self_int(v)
    if not exceptional:
        return {}
    m = intersection_matrix(graph, exceptional)
    if not is_negative_definite(m):
        raise ValueError("exceptional curves do not span a negative definite lattice")
    rhs = []
    for v in exceptional:
        touching = sum(1 for u in graph.neighbors(v) if u in boundary)
        rhs.append(-2 + touching if v in boundary else -2 - graph.self_int(v) + touching)
    return dict(zip(exceptional, solve(m, rhs)))


def contract_extremity(c, v):
    """Contract the boundary extremity ``v`` by a divisorial K+B extremal contraction."""
    _check_boundary(c, v)
    if len(c.boundary_neighbors(v)) != 1:
        raise ValueError(f"{v} is not a boundary extremity")
    if len(c.chains_on(v)) > 1:
        raise ValueError(f"{v} supports more than one singular point")
    if not is_negative_extremal_boundary(c, v):
        raise ValueError(f"{v} is not K+B negative")
    if boundary_self_intersection(c, v) >= 0:
        raise ValueError(f"{v} has nonnegative self-intersection")
    return contract_curves(c.resolution, [b for b in c.boundary if b != v])


def _map_side(graph, marker, other, label):
    out = []
    try:
        side = contract_curves(graph, marker)
    except ValueError as exc:
        return None, [Violation(f"{label}_not_contractible", str(exc))]
    for item in validate_dlt(side):
        out.append(Violation(f"{label}_{item.code}", item.message))
    if len(side.chains) > 2:
        out.append(Violation(f"{label}_too_many_singularities", f"{label} completion has {len(side.chains)} singular points"))
    elif len(side.chains) == 2:
        rest = [u for u in graph.vertices if u != marker]
        tower = next(comp for comp in graph.components(rest) if other in comp)
        if not any(u in tower for chain in side.chains for u in chain):
            out.append(Violation(f"{label}_base_point_smooth",
                                 f"{label} completion has two singular points but its proper base point is smooth"))
    return side, out


def validate_map_constraints(r):
    """Check a map resolution (graph, e0, e0p) against the admissibility constraints."""
    g, e0, e0p = r.graph, r.e0, r.e0p
    out = []
    for m in (e0, e0p):
        if m not in g:
            out.append(Violation("unknown_vertex", f"marker {m!r} is not in the graph"))
    if out:
        return out
    if not g.is_tree():
        out.append(Violation("not_a_tree", "boundary graph is not a tree"))
        return out
    if e0 == e0p:
        out.append(Violation("markers_coincide", "E0 and E0' are the same curve"))
        return out
    for v in g.vertices:
        if g.self_int(v) >= 0:
            out.append(Violation("nonnegative_curve", f"{v} has self-intersection {g.self_int(v)} >= 0"))
        elif g.self_int(v) == -1 and v not in (e0, e0p):
            out.append(Violation("both_sides_minus_one", f"{v} is a (-1)-curve exceptional on both sides"))
    for attr, expected in (("exc_source", e0), ("exc_target", e0p)):
        given = getattr(r, attr, None)
        if given is not None and set(given) != set(g.vertices) - {expected}:
            out.append(Violation(f"{attr}_mismatch", f"{attr} must be every curve except {expected}"))
    for marker, other, label in ((e0, e0p, "source"), (e0p, e0, "target")):
        out.extend(_map_side(g, marker, other, label)[1])
    return out
