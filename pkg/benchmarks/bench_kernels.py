"""Times the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import itertools
import random
import time

from makerbreaker.kernels import available_backends

BIG = 10**12


def masks(n, edges):
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def random_graph(rng, n, p):
    return masks(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def cases():
    rng = random.Random(0)
    dense = random_graph(rng, 22, 0.85)  # passes, so every subset is visited
    sparse = random_graph(random.Random(1), 20, 0.18)
    hamiltonian = random_graph(random.Random(7), 20, 0.18)
    return [
        ("expansion n=22 |U|<=5 c=2", lambda k: k.expansion_violation(dense, 22, 5, 2, 1, BIG)),
        ("density n=22 |U|<=5", lambda k: k.density_violation(dense, 22, 5, 3, 1, BIG)),
        ("min_cross n=14 r=4", lambda k: k.min_cross(random_graph(random.Random(1), 14, 0.5), 14, 4, BIG)),
        ("berge_tutte n=14", lambda k: k.berge_tutte(random_graph(random.Random(2), 14, 0.2), 14)),
        ("longest_path n=20 sparse", lambda k: k.longest_path(sparse, 20, BIG)),
        ("hamilton_cycle n=20", lambda k: k.hamilton_cycle(hamiltonian, 20, BIG)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available_backends()
    print(f"{'kernel':32s}" + "".join(f"{name:>12s}" for name in backends) + "     speedup")
    for label, fn in cases():
        times = {}
        results = {}
        for name, mod in backends.items():
            best = float("inf")
            for _ in range(args.repeat):
                start = time.perf_counter()
                results[name] = fn(mod)
                best = min(best, time.perf_counter() - start)
            times[name] = best
        agree = len({repr(r) for r in results.values()}) == 1
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:32s}" + "".join(f"{t:12.4f}" for t in times.values())
              + f"  {speed:9.1f}x" + ("" if agree else "  MISMATCH"))


if __name__ == "__main__":
    main()
