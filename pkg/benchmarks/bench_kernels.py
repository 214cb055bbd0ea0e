"""Time the compiled kernels against the pure-Python ones on realistic inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both implementations are imported directly, so the comparison does not depend
on which backend the package picked at import.
"""

import argparse
import timeit
from array import array

from univjac._kernels import INF, _pykernels
from univjac.classify import census_problem, singleton
from univjac.corpus import fig4
from univjac.domain import DomainConfig

try:
    from univjac._kernels import _ckernels
except ImportError:
    _ckernels = None


def workloads():
    graph = fig4(7)  # 13 vertices
    nv = len(graph.vertices)
    adj = list(graph.adjacency)
    us = [a for a, _ in graph.edges]
    vs = [b for _, b in graph.edges]
    masks = _pykernels.biconnected_masks(nv, adj)

    cfg = DomainConfig(2, 4, 0)
    problem = census_problem(cfg)
    arrs = problem.arrays()
    nvar = len(problem.variables)

    def propagate(mod):
        lo = array("q", [-INF] * nvar)
        hi = array("q", [INF] * nvar)
        for j in range(1, cfg.n + 1):
            v = problem.index[singleton(j)]
            lo[v] = hi[v] = 1 if j == 1 else 0
        mod.propagate(lo, hi, *arrs, True, None)

    return {
        "biconnected_masks (13 vertices)": lambda mod: mod.biconnected_masks(nv, adj),
        f"mask_edge_stats ({len(masks)} masks)": lambda mod: mod.mask_edge_stats(us, vs, masks),
        f"propagate ((2,4) census, {len(problem.rows)} rows)": propagate,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; only the Python timings are shown")
    print(f"{'kernel':45s} {'python (ms)':>12s} {'cython (ms)':>12s} {'speedup':>8s}")
    for name, fn in workloads().items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:45s} {py:12.2f} {'-':>12s} {'-':>8s}")
            continue
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:45s} {py:12.2f} {cy:12.2f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
