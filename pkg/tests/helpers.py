"""Shared builders for the test suite."""

import json
from fractions import Fraction
from pathlib import Path

from blinks.cluster import ClusterState, PointSpec, WeightedGraph, blow_up, run_script
from blinks.factor import Choice, MapResolution
from blinks.models import ModelPoint, catalog, letter_admissible, model, same_orbit
from blinks.params import INF
from blinks.words import Iso, Triangular, Word

DATA = Path(__file__).parent / "data"


def shear_script():
    return json.loads((DATA / "shear_cluster.json").read_text())


def shear_state():
    data = shear_script()
    return run_script(WeightedGraph.from_json(data["graph"]), data["events"])


def shear_resolution():
    return MapResolution(shear_state().graph, "C0", "C4")


def three_blowup_graph():
    """Three blow-ups over a line: at a point of it, then twice at the node with the line."""
    state = ClusterState.start(WeightedGraph([("E0", 1)]))
    state = blow_up(state, PointSpec(("E0",)), "E")
    state = blow_up(state, PointSpec(("E0", "E")), "E0'")
    state = blow_up(state, PointSpec(("E0", "E0'")), "E0''")
    return state.graph


def random_choices(rng, max_steps=12):
    """A valid up/down sequence: a descent forces descents until index 1."""
    out, state, descending = [], 1, False
    for _ in range(rng.randint(0, max_steps)):
        if state == 1:
            choice = Choice.AT_SINGULAR_POINT
        elif descending:
            choice = Choice.ELSEWHERE
        else:
            choice = rng.choice([Choice.AT_SINGULAR_POINT, Choice.ELSEWHERE])
        out.append(choice)
        if choice is Choice.AT_SINGULAR_POINT:
            state, descending = state + 1, False
        else:
            state, descending = state - 1, True
    return out


# boundary parameters used when sampling points of rational models
PARAMS = [Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2), Fraction(-3), INF]
TAGS = ["a", "b", "c"]


def random_point(rng, models):
    m = rng.choice(models)
    return ModelPoint(m.id, rng.choice(PARAMS))


def random_letter(rng, src, models):
    """An admissible triangular letter starting at ``src`` (None when no target is found)."""
    for _ in range(20):
        dst = random_point(rng, models)
        if letter_admissible(src, dst):
            return Triangular.new(src, dst, rng.randint(2, 4), rng.choice(TAGS))
    return None


def random_iso(rng, model_id):
    gens = list(model(model_id).generators)
    iso = Iso.named(model_id, rng.choice(gens))
    return iso.inverse() if rng.random() < 0.5 else iso


def random_word(rng, d=4, max_letters=8, model_ids=None):
    """Random composable word over the degree ``d`` catalog.

    Letters are biased towards special position and formal inverses so that
    merges and cancellations happen often.
    """
    models = [m for m in catalog(d) if not m.stub and (model_ids is None or m.id in model_ids)]
    letters = []
    here = random_point(rng, models)
    for _ in range(rng.randint(0, max_letters)):
        r = rng.random()
        tri = [x for x in letters if isinstance(x, Triangular)]
        if r < 0.2:
            letters.append(random_iso(rng, here.model))
            here = letters[-1](here)
            continue
        if r < 0.4 and tri and tri[-1].dst.model == here.model:
            x = tri[-1].inverse()
            if letters[-1] is not tri[-1]:
                # re-enter at the inverse's source through an automorphism
                g = model(here.model).transporter(here.param, x.src.param) if _same_orbit(here, x.src) else None
                if g is None:
                    continue
                letters.append(Iso(here.model, here.model, g))
            letters.append(x)
            here = x.dst
            continue
        src = here if r < 0.8 else random_point(rng, [m for m in models if m.id == here.model])
        x = random_letter(rng, src, models)
        if x is None:
            continue
        if src != here:
            if not _same_orbit(here, src):
                continue
            letters.append(Iso(here.model, here.model, model(here.model).transporter(here.param, src.param)))
        letters.append(x)
        here = x.dst
    return Word(tuple(letters))


def _same_orbit(p, q):
    return p.model == q.model and same_orbit(p.model, p.param, q.param)


def close_word(rng, w, models_d=4):
    """Append a letter so that the word maps a model to itself."""
    tri = w.triangular
    if not tri:
        return w
    start, end = tri[0].src, tri[-1].dst
    if start.model == end.model:
        return w
    models = [m for m in catalog(models_d) if m.id == start.model]
    for _ in range(30):
        dst = random_point(rng, models)
        if letter_admissible(end, dst):
            return w.then(Word((Triangular.new(end, dst, 2, rng.choice(TAGS)),)))
    return None
