"""Command line front end: ``blinks <subcommand> [--json] ...``."""

import argparse
from fractions import Fraction
import json
import sys

from . import factor, hj, models, pairs, words
from .cluster import WeightedGraph, run_script, total_transform_coeffs
from .params import format_param

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _q(x):
    return format_param(Fraction(x))


def _ints(text):
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a list of integers, got {text!r}") from None


def _names(text):
    return [t for t in text.replace(",", " ").split() if t]


def _load(path):
    if path is None:
        raise UsageError("an input file is required (--input FILE)")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"file not found: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _table(rows, header):
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    line = lambda cells: "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    return "\n".join([line(header), line(["-" * w for w in widths]), *map(line, rows)])


def cmd_hj(args):
    if args.weights is not None:
        n, q = hj.hj_contract(_ints(args.weights))
        return {"n": n, "q": q}, f"n={n} q={q}"
    if args.n is None or args.q is None:
        raise UsageError("give --n and --q, or --weights")
    w = hj.hj_expand(args.n, args.q)
    return w, json.dumps(w, separators=(",", ":"))


def cmd_discrepancy(args):
    if args.weights is not None:
        c = hj.chain_discrepancies(_ints(args.weights))
        out = [_q(x) for x in c]
        return out, " ".join(out)
    data = _load(args.input)
    graph = WeightedGraph.from_json(data)
    boundary = _names(args.boundary) if args.boundary else data.get("log_boundary", list(graph.vertices))
    exceptional = _names(args.exceptional) if args.exceptional else data.get("exceptional")
    if not exceptional:
        raise UsageError("name the exceptional curves with --exceptional")
    a = pairs.log_discrepancies(graph, boundary, exceptional)
    out = {v: _q(x) for v, x in a.items()}
    return out, _table(out.items(), ["curve", "log discrepancy"])


def _cluster_state(data):
    try:
        graph = WeightedGraph.from_json(data["graph"])
        events = data["events"]
    except (KeyError, TypeError) as exc:
        raise UsageError(f"cluster script needs 'graph' and 'events': {exc}") from None
    return run_script(graph, events)


def cmd_cluster(args):
    data = _load(args.input)
    state = _cluster_state(data)
    boundary = data.get("log_boundary", list(state.graph.vertices))
    out = {"graph": state.graph.to_json(), "exceptional": list(state.exceptional)}
    lines = [_table([(v, state.graph.self_int(v), ",".join(state.graph.neighbors(v)))
                     for v in state.graph.vertices], ["curve", "self", "meets"])]
    a = pairs.log_discrepancies(state.graph, boundary, state.exceptional)
    out["log_discrepancies"] = {v: _q(x) for v, x in a.items()}
    rows = {v: [_q(a[v])] for v in state.exceptional}
    header = ["curve", "a"]
    out["total_transform"] = {}
    for aux in state.aux_names:
        m = total_transform_coeffs(state, aux)
        out["total_transform"][aux] = m
        header.append(f"m[{aux}]")
        for v in state.exceptional:
            rows[v].append(m[v])
    lines.append(_table([(v, *r) for v, r in rows.items()], header))
    return out, "\n\n".join(lines)


def _factorization_json(fz):
    return {
        "links": [{"contracted": l.contracted, "extracted": l.extracted} for l in fz.links],
        "completions": [c.to_json() for c in fz.completions],
        "indices": [c.index() for c in fz.completions],
    }


def cmd_factorize(args):
    r = factor.MapResolution.from_json(_load(args.input))
    fz = factor.factorize(r, order=args.order)
    out = _factorization_json(fz)
    rows = []
    for i, (l, c) in enumerate(zip(fz.links, fz.completions[1:]), 1):
        b = c.boundary_vertex
        rows.append((i, l.extracted, l.contracted, b, _q(pairs.boundary_self_intersection(c, b)), c.index()))
    text = _table(rows, ["link", "extracted", "contracted", "boundary", "self", "index"])
    return out, f"{len(fz)} links\n{text}"


def cmd_simulate(args):
    if (args.peak is None) == (args.choices is None):
        raise UsageError("give exactly one of --peak and --choices")
    if args.peak is not None:
        if args.peak < 2:
            raise UsageError("--peak must be at least 2")
        choices = ["up"] * (args.peak - 1) + ["down"] * (args.peak - 1)
    else:
        choices = _names(args.choices)
    indices = factor.simulate_indices(args.d, choices)
    out = {"indices": indices, "links": len(indices) - 1}
    if args.check:
        fz = factor.factorize(factor.build_from_choices(args.d, choices))
        out["factorized_indices"] = factor.link_indices(fz)
        out["agrees"] = out["factorized_indices"] == indices
    text = f"indices {' '.join(map(str, indices))}\nlinks {out['links']}"
    if args.check:
        text += f"\nfactorization agrees: {'yes' if out['agrees'] else 'no'}"
    return out, text


def cmd_sarkisov(args):
    data = _load(args.input)
    if "events" in data:
        state = _cluster_state(data)
        boundary = data.get("log_boundary", list(state.graph.vertices))
        a = pairs.log_discrepancies(state.graph, boundary, state.exceptional)
        aux = args.aux or (state.aux_names[0] if state.aux_names else None)
        if aux is None:
            raise UsageError("cluster script has no auxiliary curve")
        m = total_transform_coeffs(state, aux)
    else:
        try:
            a = {v: Fraction(x) for v, x in data["a"].items()}
            m = {v: int(x) for v, x in data["m"].items()}
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise UsageError(f"expected 'a' and 'm' maps: {exc}") from None
    lam, top = factor.sarkisov_lambda(a, m)
    out = {"lambda": {v: _q(x) for v, x in lam.items()}, "argmax": sorted(top),
           "max": _q(max(lam.values())) if lam else None}
    rows = [(v, _q(a[v]), m[v], _q(lam[v]), "*" if v in top else "") for v in lam]
    return out, _table(rows, ["curve", "a", "m", "lambda", "max"])


def _word(args):
    return words.Word.from_json(_load(args.file or args.input))


def cmd_word(args):
    if args.action == "reduce":
        w = _word(args)
        r = words.reduce(w, strategy=args.strategy)
        ends = words.proper_base_points(r)
        out = {"word": r.to_json(), "length": len(r.triangular)}
        text = [f"length {out['length']}"] + [f"  {x}" for x in r.letters]
        if ends is words.IsIsomorphism:
            out["proper_base_points"] = None
            text.append("isomorphism of pairs")
        else:
            out["proper_base_points"] = [ends[0].to_json(), ends[1].to_json()]
            text.append(f"base points {ends[0]} / {ends[1]}")
        return out, "\n".join(text)
    if args.action == "normal-form":
        w = _word(args)
        conj, core, cls = words.normal_form(w, args.budget)
        out = {"conjugator": conj.to_json(), "core": core.to_json(), "class": cls.value}
        text = [f"class {cls.value}", f"core length {len(core.triangular)}",
                f"conjugator length {len(conj.triangular)}"] + [f"  {x}" for x in core.letters]
        return out, "\n".join(text)
    if args.model is None or args.bs is None or args.bsinv is None:
        raise UsageError("tame-check needs --model, --bs and --bsinv")
    src, dst = models.ModelPoint(args.model, args.bs), models.ModelPoint(args.model, args.bsinv)
    admissible = models.letter_admissible(src, dst)
    tame = models.same_orbit(args.model, src.param, dst.param)
    out = {"model": args.model, "bs": format_param(src.param), "bsinv": format_param(dst.param),
           "admissible": admissible, "tame": tame}
    text = "tame" if tame else "not tame"
    if not admissible:
        text += " (no triangular map joins these pencils)"
    return out, text


def cmd_catalog(args):
    ms = models.catalog(args.d)
    out = [m.summary() for m in ms]
    rows = []
    for m in ms:
        for c in m.orbits:
            params = ",".join(format_param(p) for p in c.params) or "*"
            rows.append((m.id, m.surface + ("" if m.n is None else f"({m.n})"), m.group_name,
                         c.kind, params, str(c.profile)))
    return out, _table(rows, ["model", "surface", "group", "orbit", "params", "profile"])


def cmd_validate(args):
    data = _load(args.input)
    if isinstance(data, dict) and "e0" in data:
        problems = pairs.validate_map_constraints(factor.MapResolution.from_json(data))
    elif isinstance(data, dict) and "boundary" in data:
        problems = pairs.validate_dlt(pairs.Completion.from_json(data))
    else:
        raise UsageError("input is neither a map resolution nor a completion")
    out = {"valid": not problems, "violations": [{"code": p.code, "message": p.message} for p in problems]}
    text = "valid" if not problems else "\n".join(f"{p.code}: {p.message}" for p in problems)
    return out, text


def build_parser():
    p = argparse.ArgumentParser(prog="blinks", description=__doc__)
    p.add_argument("--json", action="store_true", help="machine readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        s.add_argument("--input", help="input JSON file")
        s.set_defaults(func=func)
        return s

    s = add("hj", cmd_hj, "continued fraction of a cyclic quotient singularity")
    s.add_argument("--n", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--weights", help="chain weights, e.g. 2,3 (contract instead)")
    s = add("discrepancy", cmd_discrepancy, "chain or log discrepancies")
    s.add_argument("--weights")
    s.add_argument("--boundary", help="boundary curves for log discrepancies")
    s.add_argument("--exceptional")
    add("cluster", cmd_cluster, "run a blow-up script")
    s = add("factorize", cmd_factorize, "factorize a map resolution into links")
    s.add_argument("--order", choices=["left", "right"], default="left")
    s = add("simulate", cmd_simulate, "index sequence of a triangular map")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--peak", type=int)
    s.add_argument("--choices", help="comma separated up/down choices")
    s.add_argument("--check", action="store_true", help="also build and factorize the map")
    s = add("sarkisov", cmd_sarkisov, "maximal multiplicity diagnostics")
    s.add_argument("--aux")
    s = add("word", cmd_word, "word calculus")
    s.add_argument("action", choices=["reduce", "normal-form", "tame-check"])
    s.add_argument("file", nargs="?")
    s.add_argument("--strategy", choices=["left", "right"], default="left")
    s.add_argument("--budget", type=int)
    s.add_argument("--model")
    s.add_argument("--bs")
    s.add_argument("--bsinv")
    s = add("catalog", cmd_catalog, "dump the model catalog")
    s.add_argument("--d", type=int, required=True)
    add("validate", cmd_validate, "validate a completion or map resolution")
    return p


def _plain(x):
    if isinstance(x, Fraction):
        return _q(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        out, text = args.func(args)
    except (UsageError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps(out, default=_plain), file=stdout)
    else:
        print(text, file=stdout)
    if args.command == "validate" and not out["valid"]:
        return EXIT_INVALID
    return EXIT_OK


def main():
    sys.exit(run())
