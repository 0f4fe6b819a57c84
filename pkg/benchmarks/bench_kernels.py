"""Time kernel cross-matrix assembly for each available backend.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Also checks that every backend returns the same matrices.
"""
import argparse
import timeit

import numpy as np

from redsbo._backend import available_backends, load_backend

CASES = [
    ("se_cross 1000x2000 d=2", "se_cross", (1000, 2000, 2), (0.2,)),
    ("se_cross 500x20000 d=6", "se_cross", (500, 20000, 6), (1.0,)),
    ("matern_cross nu=2.5 1000x2000 d=2", "matern_cross", (1000, 2000, 2), (2.5, 0.2)),
    ("cosine_features 4096 x J=500", "cosine_features", (4096, 500, 1), None),
]


def _inputs(shape, rng):
    n, m, d = shape
    return np.ascontiguousarray(rng.uniform(size=(n, d))), np.ascontiguousarray(rng.uniform(size=(m, d)))


def _call(mod, fn, shape, extra, X, Y):
    if fn == "cosine_features":
        scale = np.sqrt(2.0 * np.arange(1, shape[1] + 1, dtype=float) ** -2.0)
        return lambda: mod.cosine_features(np.ascontiguousarray(X[:, 0]), scale)
    return lambda: getattr(mod, fn)(X, Y, *extra)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = {name: load_backend(name) for name in available_backends()}
    rng = np.random.default_rng(0)
    print(f"{'case':<36}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for label, fn, shape, extra in CASES:
        X, Y = _inputs(shape, rng)
        times, outs = {}, {}
        for name, mod in backends.items():
            call = _call(mod, fn, shape, extra, X, Y)
            outs[name] = call()
            times[name] = min(timeit.repeat(call, number=1, repeat=args.repeat))
        ref = outs["python"]
        for name, out in outs.items():
            np.testing.assert_allclose(out, ref, rtol=1e-12, atol=1e-13, err_msg=f"{name} disagrees on {label}")
        speedup = times["python"] / times.get("cython", times["python"])
        print(f"{label:<36}" + "".join(f"{times[b] * 1e3:>10.1f}ms" for b in backends) + f"{speedup:>9.2f}x")


if __name__ == "__main__":
    main()
