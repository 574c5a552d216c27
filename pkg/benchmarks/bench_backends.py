"""Time the numba and numpy kernel backends on the same chain-union graphs.

    python3 benchmarks/bench_backends.py --sizes 90x100,30x300 --repeats 5

Prints one CSV row per (size, strategy, backend) and checks that both
backends report identical iteration counts.
"""

import argparse
import sys

from perturbcc._kernels import BACKENDS, HAVE_NUMBA
from perturbcc.bench import SuiteSpec, parse_sizes, run_bench


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="90x100,30x300,300x10")
    ap.add_argument("--strategies", default="bfs,sis,gss")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = BACKENDS if HAVE_NUMBA else ("numpy",)
    runs = {}
    for b in backends:
        spec = SuiteSpec(sizes=parse_sizes(args.sizes), strategies=args.strategies.split(","),
                         seed=args.seed, repeats=args.repeats, backend=b)
        runs[b] = run_bench(spec)

    print("n,K,strategy,backend,total_iterations,wall_ms,speedup_vs_numpy")
    ok = True
    for idx, ref in enumerate(runs["numpy"]):
        for b in backends:
            r = runs[b][idx]
            ok &= r.iterations == ref.iterations
            print(f"{r.n},{r.K},{r.strategy},{b},{r.total_iterations},{r.wall_ns / 1e6:.3f},{ref.wall_ns / r.wall_ns:.1f}")
    if not ok:
        print("backends disagree on iteration counts", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
