"""Strategy ids, parameter schemas and construction by id.

The schemas live in ``data/strategies.json`` so that the CLI and external
tools read the same source.  Every call to ``make_strategy`` returns a fresh
instance; strategies are never shared between games.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np

from ..errors import InvalidInput
from ..game import Hypergraph, Strategy, minimal_winning_sets
from ..graph import Graph
from ..verifiers import property_predicate
from .baselines import breaker_lexicographic, breaker_min_degree_attack, breaker_random, maker_random
from .expander import L_CAP, ExpanderSubgame, default_eps
from .pairing import MinDegreePairing
from .pipelines import CONSTRUCTION_ERRORS, PipelineConfig, default_r, maker_ham, maker_kconn, maker_pm
from .spoiler import ErdosSelfridgeSpoiler
from .subgames import SubgameStrategy

_TYPES = {
    "int": (int,),
    "number": (int, float),
    "bool": (bool,),
    "str": (str,),
}


@lru_cache(maxsize=1)
def registry() -> dict:
    text = resources.files("makerbreaker").joinpath("data/strategies.json").read_text()
    return json.loads(text)


def roster() -> list[str]:
    return [s["id"] for s in registry()["strategies"]]


def describe(sid: str) -> dict:
    for s in registry()["strategies"]:
        if s["id"] == sid:
            return s
    raise InvalidInput(f"unknown strategy id {sid!r}; known: {', '.join(roster())}")


def role_of(sid: str) -> str:
    return describe(sid)["role"]


def schema_of(sid: str) -> dict:
    entry = describe(sid)
    params = dict(entry["params"])
    if entry.get("pipeline"):
        params.update(registry()["pipeline_params"])
    return params


def resolve_params(sid: str, params: dict | None) -> dict:
    """Defaults filled in, unknown keys and wrong types rejected."""
    schema = schema_of(sid)
    params = dict(params or {})
    unknown = set(params) - set(schema)
    if unknown:
        raise InvalidInput(f"{sid}: unknown parameters {sorted(unknown)}")
    out = {}
    for key, spec in schema.items():
        value = params.get(key, spec["default"])
        if value is not None:
            ok = isinstance(value, _TYPES[spec["type"]])
            if spec["type"] != "bool" and isinstance(value, bool):
                ok = False
            if not ok:
                raise InvalidInput(f"{sid}: parameter {key} must be {spec['type']}, got {value!r}")
            if "choices" in spec and value not in spec["choices"]:
                raise InvalidInput(f"{sid}: parameter {key} must be one of {spec['choices']}")
        out[key] = value
    return out


class _Fallback(SubgameStrategy):
    """Pairing towards a small minimum degree, used when a Maker strategy
    cannot be built on the given board and strictness is off."""

    def __init__(self, board: Graph, k: int, name: str, error: Exception):
        super().__init__(MinDegreePairing(board, max(1, k), allow_degenerate=True), name)
        self.error = error

    def report(self):
        out = super().report()
        out.update({"status": "construction-failed", "error": f"{type(self.error).__name__}: {self.error}"})
        return out


def _int_seed(seed) -> int:
    if isinstance(seed, (int, np.integer)):
        return int(seed)
    if isinstance(seed, tuple):
        ss = np.random.SeedSequence(int(seed[0]), spawn_key=(int(seed[1]),))
        return int(ss.generate_state(1, dtype=np.uint32)[0])
    raise InvalidInput(f"pipeline strategies need an integer or (master, index) seed, got {seed!r}")


def make_strategy(sid: str, board: Graph | None = None, seed=0, params: dict | None = None,
                  stop_property: str | None = None) -> Strategy:
    p = resolve_params(sid, params)
    if sid == "breaker_random":
        return breaker_random(seed)
    if sid == "maker_random":
        return maker_random(seed)
    if sid == "breaker_lexicographic":
        return breaker_lexicographic()
    if sid == "breaker_min_degree_attack":
        return breaker_min_degree_attack()
    if board is None:
        raise InvalidInput(f"{sid} needs the board graph")
    if sid == "erdos_selfridge_spoiler":
        prop = p["property"] or stop_property
        if prop is None:
            raise InvalidInput("erdos_selfridge_spoiler needs a property id")
        wins = minimal_winning_sets(board, property_predicate(prop))
        return ErdosSelfridgeSpoiler(Hypergraph(board.edges, wins), force=p["force"])
    if sid == "maker_min_degree_pairing":
        sg = MinDegreePairing(board, p["k"], allow_degenerate=not p["strict"])
        return SubgameStrategy(sg, sid)
    if sid == "maker_expander":
        try:
            r = p["r"] if p["r"] is not None else default_r(board.n, p["c"], p["l_cap"] or L_CAP)[0]
            eps = default_eps(board.min_degree(), p["eps"])
            sg = ExpanderSubgame(board, eps, p["c"], r, seed=seed, max_retries=p["max_retries"],
                                 require_q2=p["require_q2"], l_cap=p["l_cap"])
        except CONSTRUCTION_ERRORS as exc:
            if p["strict"]:
                raise
            return _Fallback(board, int(p["c"]), sid, exc)
        return SubgameStrategy(sg, sid)
    config = {k: v for k, v in p.items() if k in PipelineConfig.__dataclass_fields__}
    config["seed"] = _int_seed(seed)
    if sid == "maker_kconn":
        return maker_kconn(board, p["k"], config)
    if sid == "maker_pm":
        return maker_pm(board, config)
    if sid == "maker_ham":
        return maker_ham(board, config)
    raise InvalidInput(f"unknown strategy id {sid!r}")  # pragma: no cover
