"""Compare the compiled and pure-Python Jacobi kernels.

Usage: python3 benchmarks/bench_kernels.py [--sizes 2,4,9,16,25] [--repeat 5]

Prints the best-of-``repeat`` time per call for each backend plus the
largest eigenvalue disagreement between them.
"""

import argparse
import timeit

import numpy as np

from gencomm.kernels import available_backends


def random_hermitian(rng, k):
    x = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    return x + x.conj().T


def best_time(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="2,4,9,16,25")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the Python fallback is available")
    rng = np.random.default_rng(0)
    names = sorted(backends)
    print(f"{'kernel':<16}{'n':>4}" + "".join(f"{name + ' (us)':>16}" for name in names) + f"{'speedup':>10}{'max diff':>12}")
    for k in sizes:
        h = random_hermitian(rng, k)
        x = h[:, : max(1, k // 2)]
        cases = {
            "jacobi_eigh": lambda mod: mod.jacobi_eigh(h, 1e-14, 64, True),
            "singular_values": lambda mod: mod.singular_values(x, 1e-14, 64),
        }
        for label, call in cases.items():
            times = {name: best_time(lambda: call(backends[name]), args.repeat) for name in names}
            outs = [np.sort(np.asarray(call(backends[name])[0])) for name in names]
            diff = max(float(np.max(np.abs(o - outs[0]))) for o in outs)
            row = f"{label:<16}{k:>4}" + "".join(f"{times[name] * 1e6:>16.1f}" for name in names)
            speedup = times["python"] / times["cython"] if len(names) == 2 else float("nan")
            print(row + f"{speedup:>10.1f}{diff:>12.1e}")


if __name__ == "__main__":
    main()
