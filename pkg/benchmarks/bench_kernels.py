"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]

Each kernel runs on the same inputs under every available backend; outputs
are checked for equality before any timing is reported.
"""

import argparse
import random
import timeit

import numpy as np

from vknot import kernels
from vknot.fuzz import random_gauss
from vknot.diagram import shadow


def string_inputs(rng, rank):
    s = shadow(random_gauss(rng, rank))
    pos = s.positions()
    order = list(s.arrows)
    return [pos[a][0] for a in order], [pos[a][1] for a in order], 2 * rank


def matrix_inputs(rng, size, twins):
    """Random skew matrix with a few duplicated rows to exercise twin pruning."""
    b = np.zeros((size, size), dtype=np.int64)
    for i in range(size):
        for j in range(i + 1, size):
            b[i, j] = rng.randint(-2, 2)
            b[j, i] = -b[i, j]
    for k in range(twins):
        src, dst = size - 1 - 2 * k, size - 2 - 2 * k
        if dst <= 1:
            break
        b[dst] = b[src]
        b[:, dst] = b[:, src]
        b[dst, src] = b[src, dst] = 0
    return b


def bench(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled extension not built; only the fallback is available")

    cases = [("string_matrix", f"rank {n}", string_inputs(rng, n)) for n in (25, 100, 300)]
    cases += [
        ("canonical_perm", f"size {n}, {t} twin pairs", (matrix_inputs(rng, n, t), 1))
        for n, t in ((8, 0), (11, 2), (13, 0))
    ]
    print(f"{'kernel':<16}{'input':<24}" + "".join(f"{k:>12}" for k in impls) + f"{'speedup':>10}")
    for name, label, inp in cases:
        outs = {k: np.asarray(getattr(m, name)(*inp)) for k, m in impls.items()}
        ref = outs["python"]
        for k, v in outs.items():
            if name == "canonical_perm":
                # permutations may differ on ties; the encodings must agree
                b = inp[0]
                same = np.array_equal(b[np.ix_(v, v)], b[np.ix_(ref, ref)])
            else:
                same = np.array_equal(v, ref)
            if not same:
                raise SystemExit(f"{name} {label}: backend {k} disagrees with the fallback")
        times = {k: bench(getattr(m, name), inp, args.repeat) for k, m in impls.items()}
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        row = "".join(f"{times[k] * 1e3:>10.3f}ms" for k in impls)
        print(f"{name:<16}{label:<24}{row}{speed:>9.1f}x")


if __name__ == "__main__":
    main()
