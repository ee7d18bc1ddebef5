"""Compare the compiled and pure-Python Luxemburg kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--atoms 16 64 256 1024] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from varlp import _backend


def cases(atoms, seed=0):
    rng = np.random.default_rng(seed)
    a = np.abs(rng.normal(size=atoms))
    p = rng.uniform(1.0, 10.0, atoms)
    w = np.full(atoms, 1.0 / atoms)
    rows = np.abs(rng.normal(size=(64, atoms)))
    return a, p, w, rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--atoms", type=int, nargs="+", default=[16, 64, 256, 1024])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    names = _backend.available()
    if "compiled" not in names:
        print("compiled kernels are not built; only the Python backend is timed")
    print(f"{'atoms':>6} {'kernel':>16} " + " ".join(f"{n:>12}" for n in names) + "   speedup")
    for atoms in args.atoms:
        a, p, w, rows = cases(atoms)
        for label, call in (
            ("luxemburg", lambda k: k.luxemburg(a, p, w, 1e-12, 200)),
            ("batch x64", lambda k: k.luxemburg_batch(rows, p, w, 1e-12, 200)),
        ):
            times = {}
            for name in names:
                k = _backend.get(name)
                timer = timeit.Timer(lambda: call(k))
                number, _ = timer.autorange()
                times[name] = min(timer.repeat(args.repeat, number)) / number
            speed = (f"{times['python'] / times['compiled']:8.1f}x"
                     if "compiled" in times else "")
            cells = " ".join(f"{times[n] * 1e6:10.1f}us" for n in names)
            print(f"{atoms:>6} {label:>16} {cells} {speed}")


if __name__ == "__main__":
    main()
