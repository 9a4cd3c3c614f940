"""Compare the compiled and pure-Python graph kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--states N ...]

Two workloads: random sparse graphs of increasing size, and the labelled
transition graph of a replicated forwarder, which is what the bisimilarity
check actually feeds the kernels.
"""
import argparse
import random
import time

from secretpi import _pykernels
from secretpi.lts import TAU, Mode, NameBudget, build_graph
from secretpi.parser import parse

try:
    from secretpi import _ckernels
except ImportError:
    _ckernels = None


def random_graph(n, degree, labels, rng):
    m = n * degree
    src = [rng.randrange(n) for _ in range(m)]
    lab = [rng.randrange(labels) for _ in range(m)]
    dst = [rng.randrange(n) for _ in range(m)]
    return n, src, lab, dst


def lts_graph(max_states):
    g = build_graph(parse("!a(x).b!<x> | !b(y).a!<y> | a!<c>"), Mode.PLAIN,
                    NameBudget(frozenset({"a", "b", "c"})), max_states)
    ids = {}
    lab = []
    for _, act, _ in g.edges:
        lab.append(0 if act.kind == TAU else ids.setdefault(act, len(ids) + 1))
    return len(g.states), [s for s, _, _ in g.edges], lab, [d for _, _, d in g.edges]


def timed(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def run(impl, graph, repeat):
    n, src, lab, dst = graph

    def work():
        weak = impl.saturate(n, src, lab, dst, 0)
        return weak, impl.refine(n, *weak)

    return timed(work, repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--states", type=int, nargs="+", default=[200, 800, 2000])
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    workloads = [(f"random n={n}", random_graph(n, 3, 4, rng)) for n in args.states]
    workloads.append(("replicated forwarder", lts_graph(400)))

    print(f"{'workload':<24}{'states':>8}{'edges':>8}{'python s':>12}{'cython s':>12}{'speedup':>9}")
    for name, graph in workloads:
        t_py, res_py = run(_pykernels, graph, args.repeat)
        if _ckernels is None:
            print(f"{name:<24}{graph[0]:>8}{len(graph[1]):>8}{t_py:>12.4f}{'n/a':>12}{'':>9}")
            continue
        t_c, res_c = run(_ckernels, graph, args.repeat)
        if res_c != res_py:
            raise SystemExit(f"{name}: kernels disagree")
        print(f"{name:<24}{graph[0]:>8}{len(graph[1]):>8}{t_py:>12.4f}{t_c:>12.4f}"
              f"{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
