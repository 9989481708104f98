"""Benchmark the eigensolver backends on the package's real workloads.

Three sections: single Hermitian eigendecompositions across the dimensions
the package actually touches, the batched min-eigenvalue kernel behind the
positivity scans, and one end-to-end witness-splitting run.  Invoke as

    python benchmarks/bench_backends.py [--samples 2000]

The numbers motivate the default backend choice: numpy's LAPACK path wins
at every size on dense inputs (the Jacobi core only draws level on the very
sparse matrices the witness splitter produces, where most rotations hit
exact zeros), so ``auto`` resolves to numpy and the compiled core is an
opt-in cross-check.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from posmaps import _backend, linalg, maps, optim


def time_call(fn, repeats: int) -> float:
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_eigh(backends, rng) -> None:
    print("single eigh (mean per call)")
    print(f"{'dim':>5} " + " ".join(f"{b:>12}" for b in backends))
    for dim in (2, 3, 4, 6, 9, 16, 36):
        h = linalg.random_hermitian(dim, rng)
        row = []
        for b in backends:
            _backend.use_backend(b)
            reps = 2000 if dim <= 6 else 300
            row.append(time_call(lambda: _backend.eigh_desc(h), reps))
        print(f"{dim:>5} " + " ".join(f"{t * 1e6:>10.1f}us" for t in row))


def bench_min_eig_batch(backends, rng, samples: int) -> None:
    print(f"\nbatched min-eig over {samples} matrices (total)")
    print(f"{'dim':>5} " + " ".join(f"{b:>12}" for b in backends))
    for dim in (3, 4, 6):
        stack = np.stack([linalg.random_hermitian(dim, rng) for _ in range(samples)])
        row = []
        for b in backends:
            _backend.use_backend(b)
            row.append(time_call(lambda: _backend.min_eig_batch(stack), 3))
        print(f"{dim:>5} " + " ".join(f"{t * 1e3:>10.1f}ms" for t in row))


def bench_witness_split(backends) -> None:
    print("\nwitness splitting, extended reduction d=4 (runs to the stall point)")
    w = maps.jamiolkowski_witness(
        maps.extended_reduction_map(4, maps.antisymmetric_unitary(4)))
    for b in backends:
        _backend.use_backend(b)
        t0 = time.perf_counter()
        rep = optim.decompose_witness(w, max_iter=2000, tol=1e-9)
        dt = time.perf_counter() - t0
        print(f"{b:>10}: {dt * 1e3:8.1f}ms for {rep.iterations} iterations "
              f"(residual {rep.residual:.4f})")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=2000,
                        help="batch size for the min-eig section")
    args = parser.parse_args()
    backends = _backend.available_backends()
    if "compiled" not in backends:
        print("note: posmaps._jacobi is not built; benchmarking numpy only")
    default = _backend.backend_name()
    rng = linalg.rng_from_seed(0)
    try:
        bench_eigh(backends, rng)
        bench_min_eig_batch(backends, rng, args.samples)
        bench_witness_split(backends)
    finally:
        _backend.use_backend(default)


if __name__ == "__main__":
    main()
