"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import timeit

from cracklat import _pykernels, kernels
from cracklat.polytope import LatticePolytope, lattice_points, polar_dual


def workloads():
    rng = random.Random(5)
    masks = [rng.getrandbits(40) | rng.getrandbits(40) for _ in range(60)]
    pos, neg = list(range(0, 60, 2)), list(range(1, 60, 2))
    A = [[rng.randint(-99, 99) for _ in range(40)] for _ in range(40)]
    rows = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(12)]
    yield "adjacent_pairs 60 rays", "adjacent_pairs", (pos, neg, masks)
    yield "matmul_int 40x40", "matmul_int", (A, A)
    yield "box_points 31^3 box", "box_points", ([-15] * 3, [15] * 3, rows, [-40] * 12)


def end_to_end():
    P = LatticePolytope.from_vertices([(-9, -7, -5), (11, 0, 3), (0, 12, -6), (2, 3, 10), (-5, 8, 7)], 3)
    yield "lattice_points (3-polytope)", lambda: lattice_points(P)
    rng = random.Random(9)
    pts = [tuple(rng.randint(-6, 6) for _ in range(4)) for _ in range(40)]
    yield "polar dual of a 4-polytope", lambda: polar_dual(LatticePolytope.from_vertices(pts, 4))


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not kernels.compiled_available():
        print("compiled extension not built; nothing to compare")
        return
    from cracklat import _ckernels

    print(f"{'kernel':32} {'python':>10} {'cython':>10} {'speedup':>8}")
    for label, name, argv in workloads():
        tp = best(lambda: getattr(_pykernels, name)(*argv), args.repeat)
        tc = best(lambda: getattr(_ckernels, name)(*argv), args.repeat)
        assert getattr(_pykernels, name)(*argv) == getattr(_ckernels, name)(*argv)
        print(f"{label:32} {tp * 1e3:9.2f}ms {tc * 1e3:9.2f}ms {tp / tc:7.1f}x")
    for label, fn in end_to_end():
        prev = kernels.use_backend("python")
        tp = best(fn, args.repeat)
        kernels.use_backend("cython")
        tc = best(fn, args.repeat)
        kernels.use_backend(prev)
        print(f"{label:32} {tp * 1e3:9.2f}ms {tc * 1e3:9.2f}ms {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
