import itertools
import json
import random
from fractions import Fraction

import numpy as np
import pytest

from makerbreaker.errors import InvalidInput, PreconditionError, SplitFailed, ThinningFailed
from makerbreaker.game import FirstFree, Hypergraph, Role, Strategy, adversarial_search, exhaustive_solve, play
from makerbreaker.graph import Graph, verify_hamilton_cycle
from makerbreaker.random_process import min_degree_hitting_time, prefix_graph, sample_process
from makerbreaker.strategies.baselines import breaker_lexicographic, breaker_min_degree_attack, breaker_random
from makerbreaker.strategies.expander import ExpanderSubgame, bipartite_family, family_size, largest_r_within
from makerbreaker.strategies.pairing import MinDegreePairing, PairingPlan, euler_orientation, maker_min_degree_pairing
from makerbreaker.strategies.pipelines import PipelineConfig, default_r, maker_ham
from makerbreaker.strategies.registry import describe, make_strategy, resolve_params, role_of, roster
from makerbreaker.strategies.spoiler import ErdosSelfridgeSpoiler, criterion_holds, selfridge_sum
from makerbreaker.strategies.split import ThinTargets, split_edges, thin_subgraph
from makerbreaker.strategies.subgames import SubgameStrategy, parallel_play_violations
from makerbreaker.verifiers import has_min_degree, is_rc_expander

from oracles import random_edges, random_hypergraph


# -- pairing ---------------------------------------------------------------------

def test_pools_on_a_cycle():
    plan = PairingPlan.build(Graph.cycle(4))
    assert [len(p) for p in plan.pools] == [1, 1, 1, 1]
    assert plan.aux is None


def test_pool_invariants_on_random_graphs():
    rng = random.Random(20)
    for _ in range(300):
        n = rng.randint(1, 10)
        g = Graph(n, random_edges(rng, n, rng.uniform(0.1, 0.9)))
        plan = PairingPlan.build(g)
        seen = set()
        for v, pool in enumerate(plan.pools):
            assert all(v in e for e in pool)
            assert not seen & set(pool)
            seen |= set(pool)
            assert len(pool) >= g.degree(v) // 2
        # every real edge is owned exactly once
        assert seen == set(g.edges)


def test_euler_orientation_balances_degrees():
    rng = random.Random(21)
    for _ in range(100):
        n = rng.randint(1, 9)
        edges = random_edges(rng, n, 0.6)
        odd = [v for v in range(n) if sum(v in e for e in edges) % 2]
        full = edges + [(v, n) for v in odd]
        arcs = euler_orientation(n + 1, full)
        out = [0] * (n + 1)
        inn = [0] * (n + 1)
        for a, b in arcs:
            out[a] += 1
            inn[b] += 1
        assert out == inn
        assert sorted(tuple(sorted(a)) for a in arcs) == sorted(tuple(sorted(e)) for e in full)


def test_pairing_precondition():
    with pytest.raises(PreconditionError):
        MinDegreePairing(Graph.cycle(4), 1)
    assert MinDegreePairing(Graph.cycle(4), 1, allow_degenerate=True).degenerate


def test_pairing_reaches_min_degree_on_k6():
    k6 = Graph.complete(6)
    for breaker in (breaker_lexicographic(), breaker_random(3), breaker_min_degree_attack()):
        tr = play(k6, breaker, maker_min_degree_pairing(k6, 1), stop=lambda h: has_min_degree(h, 1))
        assert tr.stopped and len(tr.maker_claimed) <= 6


# -- spoiler ----------------------------------------------------------------------

def test_criterion_is_exact():
    assert criterion_holds([3, 3, 3])  # 3/8 < 1/2
    assert not criterion_holds([2, 2])  # exactly 1/2
    assert criterion_holds([])
    assert selfridge_sum([1, 2]) == Fraction(3, 4)
    with pytest.raises(PreconditionError):
        ErdosSelfridgeSpoiler(Hypergraph("ab", ["a"]))


def test_spoiler_blocks_a_single_set():
    h = Hypergraph("abc", ["abc"])
    spoiler = ErdosSelfridgeSpoiler(h)
    tr = play(["a", "b", "c"], spoiler, FirstFree())
    assert tr.moves[0][1] in "abc" and set(tr.maker_claimed) != {"a", "b", "c"}
    tr = play(["a", "b"], ErdosSelfridgeSpoiler(Hypergraph("ab", [])), FirstFree())
    assert len(tr.moves) == 2


def _spoiler_verdict(sets):
    def verdict(state):
        if any(a <= state.maker for a in sets):
            return False
        if all(a & state.breaker for a in sets):
            return True
        return None

    return verdict


def test_spoiler_never_loses_against_every_claimer():
    rng = random.Random(22)
    done = 0
    while done < 40:
        universe, sets = random_hypergraph(rng, rng.randint(2, 8), rng.randint(1, 4), lo=2)
        if not criterion_holds([len(a) for a in sets]):
            continue
        done += 1
        h = Hypergraph(universe, sets)
        for first in Role:
            # the oracle agrees the claimer cannot win at all
            assert exhaustive_solve(h, first) is Role.BREAKER
            res = adversarial_search(universe, ErdosSelfridgeSpoiler(h), Role.BREAKER,
                                     _spoiler_verdict(h.sets), first_mover=first)
            assert res.holds, res.counterexample


# -- split and thinning --------------------------------------------------------------

def test_split_is_self_certifying():
    k20 = Graph.complete(20)
    res = split_edges(k20, 0.2, 2, max_retries=50, seed=1, require_q2=False)
    g1 = Graph(20, res.E1)
    assert g1.min_degree() >= Fraction(1, 5) * 19
    assert set(res.E1) | set(res.E2) == set(k20.edges) and not set(res.E1) & set(res.E2)


def test_split_zero_retries_fails():
    with pytest.raises(SplitFailed):
        split_edges(Graph.complete(20), 0.2, 2, max_retries=0)
    with pytest.raises(PreconditionError):
        split_edges(Graph.complete(20), 0.6, 2)


def test_thinning():
    k20 = Graph.complete(20)
    assert thin_subgraph(k20, 1.0, ThinTargets(edge_budget=190)).graph == k20
    res = thin_subgraph(k20, 0.5, ThinTargets(edge_budget=120), seed=3)
    assert res.graph.m <= 120 and res.report["edge_budget"]
    with pytest.raises(ThinningFailed):
        thin_subgraph(k20, 0.5, ThinTargets(edge_budget=5), max_retries=3)


# -- expander game ---------------------------------------------------------------------

def test_bipartite_family_counts():
    n, r = 6, 2
    element_id = np.full((n, n), -1, dtype=np.int64)
    pairs = list(itertools.combinations(range(n), 2))
    for i, (u, v) in enumerate(pairs):
        element_id[u, v] = element_id[v, u] = i
    fam = bipartite_family(n, r, element_id)
    assert len(fam) == family_size(n, r) == 45
    assert all(sorted(x for x in row if x >= 0) == sorted(set(x for x in row if x >= 0)) for row in fam)
    assert largest_r_within(20, 5, cap=10**5) == 2
    assert largest_r_within(20, 5, cap=10) == 1  # never below 1


def test_expander_game_parallel_play_is_legal():
    rng = random.Random(23)
    for trial in range(6):
        g = Graph.complete(12).without_edges(rng.sample(Graph.complete(12).edges, 6))
        sg = ExpanderSubgame(g, Fraction(1, 4), 1, 2, seed=trial, require_q2=False)
        breaker = breaker_random(trial) if trial % 2 else breaker_lexicographic()
        play(g, breaker, SubgameStrategy(sg, "maker_expander"))
        assert not parallel_play_violations(sg.log, 2)
        rep = sg.report()
        if rep["certified"]:
            assert is_rc_expander(sg.maker_graph(), sg.R, sg.c)


# -- pipelines and registry ------------------------------------------------------------

def test_roster_contents():
    ids = roster()
    assert "breaker_min_degree_attack" in ids and "maker_ham" in ids
    assert role_of("maker_pm") == "maker" and role_of("breaker_random") == "breaker"
    with pytest.raises(InvalidInput):
        describe("nope")


def test_every_id_is_constructible():
    g = Graph.complete(6)
    for sid in roster():
        params = {"property": "mindeg:1", "force": True} if sid == "erdos_selfridge_spoiler" else None
        s = make_strategy(sid, g, 0, params, stop_property="mindeg:1")
        assert isinstance(s, Strategy)
        tr = play(g, s, FirstFree()) if role_of(sid) == "breaker" else play(g, FirstFree(), s)
        assert len(tr.moves) == g.m


def test_param_validation():
    assert resolve_params("maker_min_degree_pairing", {"k": 2})["k"] == 2
    with pytest.raises(InvalidInput):
        resolve_params("maker_min_degree_pairing", {"k": "2"})
    with pytest.raises(InvalidInput):
        resolve_params("maker_min_degree_pairing", {"q": 1})
    with pytest.raises(InvalidInput):
        resolve_params("maker_ham", {"phase1_target": "other"})
    with pytest.raises(InvalidInput):
        resolve_params("maker_expander", {"strict": 1})
    with pytest.raises(PreconditionError):
        make_strategy("maker_min_degree_pairing", Graph.cycle(5), 0, {"strict": True})
    fb = make_strategy("maker_expander", Graph.path(6), 0, {})  # min degree 1: no valid split
    assert fb.report()["status"] == "construction-failed"


def test_default_r_clamps():
    r, source = default_r(40, 3)
    assert 1 <= r <= 40 // 5
    r, source = default_r(200, 2, cap=10**6)
    assert family_size(200, r) <= 10**6 and source == "clamped"


def test_min_degree_attack_wins_below_the_threshold():
    for i in range(10):
        pi = sample_process(20, (30, i))
        g = prefix_graph(pi, min_degree_hitting_time(pi, 2) - 1)
        # some vertex has degree at most 1, so Breaker takes its only edge
        tr = play(g, breaker_min_degree_attack(), make_strategy("maker_random", g, i),
                  stop=lambda h: has_min_degree(h, 1))
        assert not has_min_degree(tr.maker_graph(), 2)


def test_ham_pipeline_phase_two_is_monotone():
    for i in range(4):
        pi = sample_process(24, (31, i))
        g = prefix_graph(pi, min_degree_hitting_time(pi, 4))
        maker = maker_ham(g, PipelineConfig(seed=i))
        tr = play(g, breaker_random(i), maker)
        rep = tr.reports["maker"]
        ell = rep["ell"]
        assert all(a < b for a, b in zip(ell, ell[1:]))
        assert rep["t2"] <= g.n
        if rep["outcome"] == "hamiltonian":
            assert verify_hamilton_cycle(tr.maker_graph(), rep["cycle"])
        json.dumps(tr.to_dict(), default=str)


def test_calibration_fixture_reproduces():
    import sys
    from pathlib import Path

    root = Path(__file__).resolve().parent.parent
    sys.path.insert(0, str(root / "benchmarks"))
    from calibrate import calibrate

    frozen = json.loads((root / "tests" / "fixtures" / "calibration.json").read_text())
    fresh = calibrate(seeds=10)
    for key, values in fresh["retries"].items():
        assert values == frozen["retries"][key][:10]
    assert frozen["success_rate"]["split_k20_eps0.2_r2"] >= 0.95
