"""Time the compiled and numpy clock-reading kernels on an oracle-sized workload.

Usage: python benchmarks/bench_pwcore.py [--points 256] [--dim 64] [--nodes 1024] [--repeat 3]
"""
import argparse
import timeit

import numpy as np

from qtdilation import _kernels


def workload(points, dim, seed=0):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=(points, dim)) + 1j * rng.normal(size=(points, dim))
    psi /= np.linalg.norm(psi)
    spectrum = rng.uniform(0, 1e-3, size=(points, dim))
    bra = np.exp(1j * rng.uniform(0, 2 * np.pi, size=dim)) / np.sqrt(dim)
    return psi, spectrum, bra


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=256)
    ap.add_argument("--dim", type=int, default=64)
    ap.add_argument("--nodes", type=int, default=1024)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    psi, spectrum, bra = workload(args.points, args.dim)
    t0, dt = -3.0e5, 600.0
    backends = {"numpy": _kernels.python_backend}
    if _kernels.compiled_backend is not None:
        backends["cython"] = _kernels.compiled_backend
    else:
        print("compiled core not built; timing the numpy kernels only")

    calls = {
        "reading_series": lambda b: b.reading_series(psi, spectrum, t0, dt, args.nodes),
        "projected_series": lambda b: b.projected_series(psi, spectrum, bra, t0, dt, args.nodes),
    }
    print(f"workload: {args.points} momenta x {args.dim} clock levels, {args.nodes} t nodes")
    print(f"{'kernel':<18}{'backend':<9}{'best [s]':>10}{'speedup':>9}{'max rel diff':>14}")
    for name, call in calls.items():
        results, times = {}, {}
        for label, backend in backends.items():
            results[label] = call(backend)
            times[label] = min(timeit.repeat(lambda: call(backend), number=1, repeat=args.repeat))
        for label in backends:
            speedup = times["numpy"] / times[label]
            rel = np.abs(results[label] - results["numpy"]).max() / np.abs(results["numpy"]).max()
            print(f"{name:<18}{label:<9}{times[label]:>10.3f}{speedup:>8.1f}x{rel:>14.1e}")


if __name__ == "__main__":
    main()
