"""Compare the compiled and pure-Python free-group kernels.

    python3 benchmarks/bench_kernels.py [--r 4] [--maxlen 5] [--repeat 3]

Prints wall-clock times for ``substitute`` on long words and for the
free-generation ``probe`` used by the monodromy module, and checks that
both backends return identical results.
"""

import argparse
import random
import sys
import timeit

from splicekit import _pykernels, kernels
from splicekit.monodromy import BraidWord, FreeGroupEndo, artin_action, local_monodromies


def probe_tables(r):
    n = r + 1
    tables = [None] * (2 * r + 1)
    tables[r] = FreeGroupEndo.identity(n).table()
    for i, h in enumerate(local_monodromies(r), 1):
        tables[r + i] = artin_action(h).table()
        tables[r - i] = artin_action(h.inverse()).table()
    return tables


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=4, help="number of local monodromies")
    ap.add_argument("--maxlen", type=int, default=5, help="probe word length")
    ap.add_argument("--words", type=int, default=2000, help="substitute: number of words")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    compiled = kernels.compiled_backend
    if compiled is None:
        print("compiled backend not available; only the pure-Python kernel is timed")
    backends = [("python", _pykernels)] + ([("cython", compiled)] if compiled else [])

    n = args.r + 1
    rng = random.Random(0)
    tab = artin_action(BraidWord(n, [rng.choice([1, -1]) * rng.randint(1, n - 1)
                                     for _ in range(12)])).table()
    words = [[rng.choice([1, -1]) * rng.randint(1, n) for _ in range(40)]
             for _ in range(args.words)]
    tables = probe_tables(args.r)

    results = {}
    print(f"{'kernel':<12}{'backend':<10}{'seconds':>12}")
    for name, kern in backends:
        t_sub = best(lambda: [kern.substitute(w, tab, n) for w in words], args.repeat)
        t_probe = best(lambda: kern.probe(tables, args.r, n, args.maxlen, [1]), args.repeat)
        results[name] = ([list(kern.substitute(w, tab, n)) for w in words],
                         kern.probe(tables, args.r, n, args.maxlen, [1]))
        print(f"{'substitute':<12}{name:<10}{t_sub:>12.4f}")
        print(f"{'probe':<12}{name:<10}{t_probe:>12.4f}")
        results[name + "_times"] = (t_sub, t_probe)
    if compiled:
        same = results["python"] == results["cython"]
        ps, pp = results["python_times"]
        cs, cp = results["cython_times"]
        print(f"speed-up: substitute x{ps / cs:.1f}, probe x{pp / cp:.1f}; "
              f"results identical: {same}")
        return 0 if same else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
