"""Compare the compiled and pure layout kernels on identical workloads.

Run:  python benchmarks/bench_kernels.py
"""

import math
import random
import time

from tristeiner.kernels import pure

try:
    from tristeiner.kernels import _fast
except ImportError:
    _fast = None


def make_cases(n):
    rng = random.Random(11)
    cases = []
    while len(cases) < n:
        pts = [(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(3)]
        area2 = abs(
            (pts[1][0] - pts[0][0]) * (pts[2][1] - pts[0][1])
            - (pts[2][0] - pts[0][0]) * (pts[1][1] - pts[0][1])
        )
        if area2 < 0.05:
            continue
        tri = (pts[0][0], pts[0][1], pts[1][0], pts[1][1], pts[2][0], pts[2][1])
        kind = rng.choice([1, 2, 3])
        dim = {1: 6, 2: 4, 3: 2}[kind]
        cx = sum(p[0] for p in pts) / 3
        cy = sum(p[1] for p in pts) / 3
        x0 = []
        for _ in range(dim // 2):
            x0 += [cx + rng.uniform(-0.3, 0.3), cy + rng.uniform(-0.3, 0.3)]
        per = sum(math.dist(pts[i], pts[(i + 1) % 3]) for i in range(3))
        cases.append((kind, rng.randrange(3), tri, rng.uniform(0.5, 1.0) * per, x0))
    return cases


def run(mod, cases):
    t0 = time.perf_counter()
    acc = 0.0
    evals = 0
    for kind, aux, tri, budget, x0 in cases:
        x, f, ne = mod.minimize_layout(
            kind, aux, tri, budget, 1e5, x0, 0.05, 1e-10, 1e-13, 2000
        )
        acc += f
        evals += ne
    return time.perf_counter() - t0, acc, evals


def main():
    cases = make_cases(200)
    t_pure, acc_pure, ev_pure = run(pure, cases)
    print(f"pure : {t_pure:8.3f} s   {ev_pure} evaluations")
    if _fast is None:
        print("fast : not built")
        return
    t_fast, acc_fast, ev_fast = run(_fast, cases)
    print(f"fast : {t_fast:8.3f} s   {ev_fast} evaluations")
    print(f"speedup: {t_pure / t_fast:.1f}x")
    same = acc_pure == acc_fast and ev_pure == ev_fast
    print(f"identical results: {same}")
    if not same:
        raise SystemExit("backends disagree")


if __name__ == "__main__":
    main()
