"""Catalog of smooth completions with boundary self-intersection 1 to 6.

Each model fixes a coordinate on its boundary curve. Boundary points are
parameters in Q or Q(w) together with infinity, and the automorphism group of
the pair acts on them by Moebius maps.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
import json
import os

from .params import INF, Mobius, field_of, format_param, parse_param

CATALOG_ENV = "BLINKS_CATALOG"
SUPPORTED_VERSIONS = (1,)
MAX_FINITE_GROUP = 64

# continuous group kinds and the parameters they fix, grouped into orbits
_SPECIAL_ORBITS = {
    "pgl2": (),
    "affine": ((INF,),),
    "torus": ((INF,), (0,)),
    "torus_swap": ((0, INF),),
}


@dataclass(frozen=True)
class FibrationProfile:
    """Multiplicities of the components of the degenerate fiber of a pencil's fibration."""

    multiplicities: tuple

    def __post_init__(self):
        ms = tuple(sorted(self.multiplicities))
        if not ms or any(isinstance(m, bool) or not isinstance(m, int) or m < 1 for m in ms):
            raise ValueError(f"profile must be a nonempty multiset of positive integers, got {ms}")
        object.__setattr__(self, "multiplicities", ms)

    def __str__(self):
        return "{" + ", ".join(map(str, self.multiplicities)) + "}"


@dataclass(frozen=True)
class OrbitClass:
    kind: str  # "fixed", "finite_generic" or "open"
    profile: FibrationProfile
    params: tuple = ()
    label: str = ""


@dataclass(frozen=True)
class ModelPoint:
    """A boundary point of a catalog model."""

    model: str
    param: object

    def __post_init__(self):
        m = model(self.model)
        object.__setattr__(self, "param", m.parse(self.param))

    def __str__(self):
        return f"{self.model}({format_param(self.param)})"

    def to_json(self):
        return {"model": self.model, "param": format_param(self.param)}

    @classmethod
    def from_json(cls, data):
        try:
            return cls(data["model"], data["param"])
        except (KeyError, TypeError):
            raise ValueError(f"malformed model point {data!r}") from None


@dataclass(frozen=True)
class ModelDescriptor:
    id: str
    surface: str
    n: object
    d: int
    field: object
    group_kind: str
    group_name: str
    generators: dict
    orbits: tuple
    points: dict = field(default_factory=dict)
    stub: bool = False
    note: str = ""

    def parse(self, value):
        p = parse_param(value, self.field)
        if field_of(p) not in (None, self.field):
            raise ValueError(f"parameter {value!r} is not in the field of {self.id}")
        return p

    def point(self, name):
        try:
            return ModelPoint(self.id, self.points[name])
        except KeyError:
            raise KeyError(f"{self.id} has no named point {name!r}") from None

    def class_of(self, p):
        p = self.parse(p)
        for c in self.orbits:
            if c.kind == "fixed" and p in c.params:
                return c
        for c in self.orbits:
            if c.kind != "fixed":
                return c
        raise AssertionError(f"{self.id}: no orbit class contains {format_param(p)}")

    def profile(self, p):
        return self.class_of(p).profile

    def group_elements(self):
        if self.group_kind != "finite":
            raise ValueError(f"{self.id}: the automorphism group is not finite")
        return _closure(self.id, tuple(self.generators.values()))

    def orbit(self, p):
        p = self.parse(p)
        return frozenset(g(p) for g in self.group_elements())

    def contains_action(self, g):
        """Whether the Moebius map ``g`` is induced by an automorphism of the pair."""
        if any(field_of(x) not in (None, self.field) for x in g.m):
            return False
        a, b, c, d = g.m
        kind = self.group_kind
        if kind == "pgl2":
            return True
        if kind == "affine":
            return c == 0
        if kind == "torus":
            return b == 0 and c == 0
        if kind == "torus_swap":
            return (b == 0 and c == 0) or (a == 0 and d == 0)
        return g in self.group_elements()

    def transporter(self, p, q):
        """An automorphism mapping ``p`` to ``q``; ValueError if they lie in different orbits."""
        p, q = self.parse(p), self.parse(q)
        if p == q:
            return Mobius.identity()
        if not same_orbit(self, p, q):
            raise ValueError(f"{self.id}: {format_param(p)} and {format_param(q)} lie in different orbits")
        kind = self.group_kind
        if kind == "pgl2":
            to_inf = lambda x: Mobius.identity() if x is INF else Mobius(x, 1, 1, 0)
            return to_inf(q) @ to_inf(p).inverse()
        if kind == "affine":
            return Mobius(1, q - p, 0, 1)
        if kind in ("torus", "torus_swap") and p not in (0, INF):
            return Mobius(q, 0, 0, p)
        if kind == "torus_swap":
            return Mobius(0, 1, 1, 0)
        return next(g for g in self.group_elements() if g(p) == q)

    def summary(self):
        return {
            "id": self.id, "surface": self.surface, "n": self.n, "d": self.d,
            "field": self.field, "group": self.group_name, "stub": self.stub,
            "orbits": [{"kind": c.kind, "label": c.label,
                        "params": [format_param(p) for p in c.params],
                        "profile": list(c.profile.multiplicities)} for c in self.orbits],
        }


@lru_cache(maxsize=None)
def _closure(model_id, gens):
    elements = {Mobius.identity()}
    frontier = list(elements)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g @ x
                if y not in elements:
                    elements.add(y)
                    nxt.append(y)
                    if len(elements) > MAX_FINITE_GROUP:
                        raise ValueError(f"{model_id}: generators do not span a small finite group")
        frontier = nxt
    return frozenset(elements)


@dataclass(frozen=True)
class Catalog:
    version: int
    models: dict
    connecting: tuple


def _load_model(raw):
    try:
        mid, d, fld = raw["id"], raw["d"], raw.get("field")
        kind, gname = raw["group"]["kind"], raw["group"].get("name", raw["group"]["kind"])
        gens = {name: Mobius.from_json(mat, fld) for name, mat in raw.get("generators", {}).items()}
        orbits = []
        for o in raw["orbits"]:
            params = tuple(parse_param(p, fld) for p in o.get("params", ()))
            orbits.append(OrbitClass(o["kind"], FibrationProfile(tuple(o["profile"])), params, o.get("label", "")))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed catalog entry {raw.get('id', raw)!r}: {exc}") from None
    m = ModelDescriptor(mid, raw.get("surface", ""), raw.get("n"), d, fld, kind, gname, gens,
                        tuple(orbits), {}, bool(raw.get("stub", False)), raw.get("note", ""))
    points = {name: m.parse(p) for name, p in raw.get("points", {}).items()}
    object.__setattr__(m, "points", points)
    _check_model(m)
    return m


def _check_model(m):
    if not isinstance(m.d, int) or not 1 <= m.d <= 6:
        raise ValueError(f"{m.id}: d must be in 1..6")
    if m.group_kind not in (*_SPECIAL_ORBITS, "finite"):
        raise ValueError(f"{m.id}: unknown group kind {m.group_kind!r}")
    rest = [c for c in m.orbits if c.kind != "fixed"]
    fixed = [c for c in m.orbits if c.kind == "fixed"]
    if len(rest) != 1:
        raise ValueError(f"{m.id}: exactly one complement orbit class is required")
    expected_rest = "finite_generic" if m.group_kind == "finite" else "open"
    if rest[0].kind != expected_rest:
        raise ValueError(f"{m.id}: complement class of a {m.group_kind} group must be {expected_rest}")
    seen = set()
    for c in fixed:
        if not c.params or seen & set(c.params):
            raise ValueError(f"{m.id}: fixed orbit classes must be nonempty and disjoint")
        seen |= set(c.params)
    for name, g in m.generators.items():
        if not m.contains_action(g):
            raise ValueError(f"{m.id}: generator {name} is not in the declared group")
    if m.group_kind == "finite":
        for c in fixed:
            if m.orbit(c.params[0]) != frozenset(c.params):
                raise ValueError(f"{m.id}: fixed class {c.label!r} is not a single orbit")
    else:
        declared = sorted(sorted(map(format_param, c.params)) for c in fixed)
        special = sorted(sorted(map(format_param, o)) for o in _SPECIAL_ORBITS[m.group_kind])
        if declared != special:
            raise ValueError(f"{m.id}: fixed classes {declared} do not match the {m.group_kind} orbits")
    for c in fixed:
        for p in c.params:
            for name, g in m.generators.items():
                if g(p) not in c.params:
                    raise ValueError(f"{m.id}: generator {name} moves {format_param(p)} out of its class")


def _parse_catalog(data):
    if not isinstance(data, dict) or data.get("version") not in SUPPORTED_VERSIONS:
        raise ValueError(f"unsupported catalog version {data.get('version') if isinstance(data, dict) else data!r}")
    models = {}
    for raw in data.get("models", ()):
        m = _load_model(raw)
        if m.id in models:
            raise ValueError(f"duplicate model id {m.id}")
        models[m.id] = m
    connecting = []
    for entry in data.get("connecting", ()):
        try:
            src, dst = entry["src"], entry["dst"]
            ms, md = models[src["model"]], models[dst["model"]]
            connecting.append({"tag": entry["tag"], "k": entry["k"],
                               "src": (ms.id, ms.parse(src["param"])),
                               "dst": (md.id, md.parse(dst["param"]))})
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed connecting entry {entry!r}: {exc}") from None
    return Catalog(data["version"], models, tuple(connecting))


@lru_cache(maxsize=8)
def _load(path):
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = json.loads(resources.files("blinks").joinpath("data/catalog.json").read_text("utf-8"))
    return _parse_catalog(data)


def load_catalog():
    """The active catalog: the embedded resource unless BLINKS_CATALOG names another file."""
    return _load(os.environ.get(CATALOG_ENV) or None)


def model(model_id):
    try:
        return load_catalog().models[model_id]
    except KeyError:
        raise ValueError(f"unknown model {model_id!r}") from None


def catalog(d):
    if isinstance(d, bool) or not isinstance(d, int) or not 1 <= d <= 6:
        raise ValueError(f"d must be an integer in 1..6, got {d!r}")
    return [m for m in load_catalog().models.values() if m.d == d]


def _as_model(m):
    return m if isinstance(m, ModelDescriptor) else model(m)


def same_orbit(m, p, q):
    m = _as_model(m)
    p, q = m.parse(p), m.parse(q)
    cp, cq = m.class_of(p), m.class_of(q)
    if cp is not cq:
        return False
    if cp.kind == "finite_generic":
        return q in m.orbit(p)
    return True


def _connected(src, dst):
    key_s = (src.model, model(src.model).class_of(src.param))
    key_d = (dst.model, model(dst.model).class_of(dst.param))
    for entry in load_catalog().connecting:
        a = (entry["src"][0], model(entry["src"][0]).class_of(entry["src"][1]))
        b = (entry["dst"][0], model(entry["dst"][0]).class_of(entry["dst"][1]))
        if (key_s, key_d) in ((a, b), (b, a)):
            return True
    return False


def letter_admissible(src, dst):
    """Whether a triangular map from ``src`` to ``dst`` may exist between the two pencils."""
    ms, md = model(src.model), model(dst.model)
    if ms.d != md.d:
        raise ValueError(f"boundary self-intersections differ: {ms.d} vs {md.d}")
    if ms.profile(src.param) != md.profile(dst.param):
        return False
    if ms.id == md.id and same_orbit(ms, src.param, dst.param):
        return True
    if ms.profile(src.param).multiplicities == (1, 1):
        return True
    return _connected(src, dst)


def connecting_phi0():
    """The quadratic triangular map from F2_D2 at p0 to F0_D0 at p1'."""
    from .words import Triangular

    entry = next(e for e in load_catalog().connecting if e["tag"] == "Phi0")
    return Triangular.new(ModelPoint(*entry["src"]), ModelPoint(*entry["dst"]), entry["k"], entry["tag"])
