"""Regenerates tests/fixtures/calibration.json.

Records, per seed, whether the K_20 edge split and the K_20 thinning
succeed within their retry budgets.  The observed rates are data, not
targets: tests only check that the recorded outcomes reproduce.
"""

import json
import sys
from pathlib import Path

from makerbreaker.errors import SplitFailed, ThinningFailed
from makerbreaker.graph import Graph
from makerbreaker.strategies.split import ThinTargets, split_edges, thin_subgraph

SEEDS = 100
OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "calibration.json"


def split_outcome(seed, require_q2):
    try:
        res = split_edges(Graph.complete(20), 0.2, 2, max_retries=50, seed=seed, require_q2=require_q2)
    except SplitFailed:
        return None
    return res.retries


def thin_outcome(seed):
    try:
        res = thin_subgraph(Graph.complete(20), 0.5, ThinTargets(edge_budget=110), max_retries=50, seed=seed)
    except ThinningFailed:
        return None
    return res.retries


def calibrate(seeds=SEEDS):
    runs = {
        "split_k20_eps0.2_r2": [split_outcome(s, False) for s in range(seeds)],
        "split_k20_eps0.2_r2_q2": [split_outcome(s, True) for s in range(seeds)],
        "thin_k20_gamma0.5_budget110": [thin_outcome(s) for s in range(seeds)],
    }
    return {
        "schema": "makerbreaker.calibration/1",
        "seeds": list(range(seeds)),
        "max_retries": 50,
        "retries": runs,
        "success_rate": {k: sum(v is not None for v in runs[k]) / seeds for k in runs},
    }


if __name__ == "__main__":
    data = calibrate()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=1) + "\n")
    json.dump(data["success_rate"], sys.stdout, indent=2)
    print()
