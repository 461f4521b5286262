"""Command line entry point: ``makerbreaker {sample,verify,play,experiment}``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import networkx as nx

from .errors import MakerBreakerError
from .game import play
from .graph import hamilton_cycle, read_edge_list, write_edge_list
from .harness import ExperimentConfig, run_experiment
from .random_process import prefix_graph, sample_gnm, sample_gnp, sample_process
from .strategies.registry import make_strategy, roster
from .verifiers import (
    berge_tutte_value,
    boosters,
    check_m1_m2,
    check_q1,
    check_q2,
    has_min_degree,
    is_k_edge_connected,
    is_k_vertex_connected,
    is_rc_expander,
    maximum_matching,
    parse_property,
    property_predicate,
)

PROPERTIES = ("mindeg", "kconn", "kedge", "pm", "ham", "expander", "m1m2", "q1", "q2", "boosters")


def _number(text: str):
    """Integers stay integers; anything else goes through float (fractions like 9/40 allowed)."""
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    try:
        return int(text)
    except ValueError:
        return float(text)


def _json_arg(text: str) -> dict:
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"not valid JSON: {exc}") from None
    if not isinstance(value, dict):
        raise argparse.ArgumentTypeError("expected a JSON object")
    return value


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, default=str) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- sample ---------------------------------------------------------------------------

def cmd_sample(args) -> int:
    if args.model == "process":
        pi = sample_process(args.n, args.seed)
        steps = len(pi) if args.M is None else args.M
        write_edge_list(prefix_graph(pi, steps), args.out)
        sidecar = Path(str(args.out) + ".order.json")
        sidecar.write_text(json.dumps({
            "schema": "makerbreaker.order/1", "n": args.n, "seed": args.seed,
            "steps": steps, "order": pi.order.tolist(),
        }) + "\n")
    elif args.model == "gnm":
        if args.M is None:
            raise MakerBreakerError("--model gnm needs --M")
        write_edge_list(sample_gnm(args.n, args.M, args.seed), args.out)
    else:
        if args.p is None:
            raise MakerBreakerError("--model gnp needs --p")
        write_edge_list(sample_gnp(args.n, args.p, args.seed), args.out)
    return 0


# -- verify ---------------------------------------------------------------------------

def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise MakerBreakerError(f"--property {args.property} needs {' '.join(missing)}")


def verify_graph(g, args) -> dict:
    prop = args.property
    if prop == "mindeg":
        _need(args, "k")
        low = [v for v in range(g.n) if g.degree(v) < args.k]
        ok = has_min_degree(g, args.k)
        return {"result": ok, "certificate": None if ok else {"vertex": low[0], "degree": g.degree(low[0])}}
    if prop == "kconn":
        _need(args, "k")
        ok = is_k_vertex_connected(g, args.k, method="flow")
        cert = None
        if not ok:
            cert = {"separator": sorted(nx.minimum_node_cut(g.to_networkx()))} if g.n > args.k + 1 else None
        return {"result": ok, "certificate": cert}
    if prop == "kedge":
        _need(args, "k")
        ok = is_k_edge_connected(g, args.k, method="flow")
        cert = None
        if not ok:
            cut = nx.minimum_edge_cut(g.to_networkx()) if g.m else set()
            cert = {"cut": sorted(tuple(sorted(e)) for e in cut)}
        return {"result": ok, "certificate": cert}
    if prop == "pm":
        matching = sorted(maximum_matching(g))
        ok = len(matching) == g.n // 2
        if ok:
            return {"result": True, "certificate": {"matching": [list(e) for e in matching]}}
        cert = {"matching_size": len(matching)}
        try:
            value, bt = berge_tutte_value(g)
            cert.update({"tutte_set": sorted(bt.S), "berge_tutte_value": value})
        except MakerBreakerError:
            pass  # too large for the exhaustive witness; the matching size still decides
        return {"result": False, "certificate": cert}
    if prop == "ham":
        cyc = hamilton_cycle(g, args.exact_cap if args.exact_cap is not None else g.n)
        return {"result": cyc is not None, "certificate": {"cycle": cyc} if cyc else None}
    if prop == "expander":
        _need(args, "R", "c")
        return _check_dict(is_rc_expander(g, args.R, args.c))
    if prop == "m1m2":
        _need(args, "r", "c")
        return _check_dict(check_m1_m2(g, args.r, args.c))
    if prop == "q1":
        _need(args, "eps", "c", "r")
        return _check_dict(check_q1(g, args.eps, args.c, args.r))
    if prop == "q2":
        _need(args, "r", "K")
        return _check_dict(check_q2(g, args.r, args.K))
    cap = args.exact_cap if args.exact_cap is not None else g.n
    found = sorted(boosters(g, cap))
    return {"result": [list(e) for e in found], "certificate": None}


def _check_dict(res) -> dict:
    d = res.as_dict()
    out = {"result": d.pop("result"), "certificate": d.pop("certificate", None)}
    if d:
        out["detail"] = d
    return out


def cmd_verify(args) -> int:
    g = read_edge_list(args.input)
    _emit(verify_graph(g, args), args.out)
    return 0


# -- play -------------------------------------------------------------------------------

def cmd_play(args) -> int:
    g = read_edge_list(args.board)
    stop = None
    if args.stop is not None:
        parse_property(args.stop)
        stop = property_predicate(args.stop, g.n)
    maker = make_strategy(args.maker, g, args.seed, args.maker_params, stop_property=args.stop)
    breaker = make_strategy(args.breaker, g, args.seed, args.breaker_params, stop_property=args.stop)
    tr = play(g, breaker, maker, stop=stop, stop_name=args.stop)
    text = tr.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return 0


# -- experiment ---------------------------------------------------------------------------

def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    report = run_experiment(cfg, jobs=args.jobs)
    out_dir = args.out_dir or cfg.output
    if out_dir:
        report.write(out_dir)
    sys.stdout.write(json.dumps(report.summary, indent=2, default=str) + "\n")
    return 0 if report.summary["deterministic_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="makerbreaker", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a random graph and write it as an edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--model", choices=("process", "gnm", "gnp"), default="process")
    p.add_argument("--M", type=int, help="edge count (gnm) or process step (process; default: all pairs)")
    p.add_argument("--p", type=float, help="edge probability (gnp)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="edge-list file; process runs also write <out>.order.json")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="decide a property of an edge-list graph")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--property", choices=PROPERTIES, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--R", type=_number)
    p.add_argument("--c", type=_number)
    p.add_argument("--r", type=int)
    p.add_argument("--eps", type=_number)
    p.add_argument("--K", type=_number)
    p.add_argument("--exact-cap", dest="exact_cap", type=int,
                   help="largest n for exact path and cycle searches (default: n)")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("play", help="play Maker against Breaker on a board (Breaker moves first)")
    p.add_argument("--board", required=True)
    p.add_argument("--maker", required=True, choices=roster(), metavar="MAKER_ID")
    p.add_argument("--breaker", required=True, choices=roster(), metavar="BREAKER_ID")
    p.add_argument("--stop", help="property id that ends the game once Maker has it, e.g. mindeg:2, pm, ham")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--maker-params", dest="maker_params", type=_json_arg, default=None)
    p.add_argument("--breaker-params", dest="breaker_params", type=_json_arg, default=None)
    p.add_argument("--out", help="write the transcript here instead of stdout")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("experiment", help="run a batch experiment from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MakerBreakerError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
