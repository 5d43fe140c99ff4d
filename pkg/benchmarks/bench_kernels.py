"""Compare the numba and numpy kernel backends on representative workloads.

The backend is fixed at import time, so the comparison runs this script
twice as a subprocess with LAMBDAHULL_BACKEND set, then prints one table.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quad 200000]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _workloads(quad_count):
    from lambdahull import bodies, harness, radii, sphere_quad, steiner_mixed

    K2 = harness.gen_random_polytope(2, 1.0, 0.4, 5, seed=1)
    K3 = harness.gen_random_polytope(3, 1.0, 0.4, 6, seed=1)
    rule = sphere_quad.sample_directions(3, "symmetrized", quad_count, seed=2)
    U = rule.nodes[:20_000]
    X = 0.35 * harness._sample_sphere(np.random.default_rng(3), 50_000, 3)

    return {
        "support 2e4 dirs (n=3)": lambda: bodies.support(K3, U),
        "bisect support 2e4 dirs": lambda: bodies.support_bisect(K3, U),
        f"intrinsic_v1 {quad_count} dirs": lambda: sphere_quad.intrinsic_v1(K3, rule),
        "contains 5e4 points": lambda: bodies.contains(K3, X),
        "inradius + circumradius": lambda: (radii.inradius(K3),
                                            radii.circumradius(K3)),
        "steiner_intrinsic 2e5 (n=2)": lambda: steiner_mixed.steiner_intrinsic(
            K2, N=200_000, seed=4),
        "af_residual 2e4 (lens,ball)": lambda: steiner_mixed.af_residual(
            bodies.lens(2, 1.0, 0.5), bodies.ball(2, 1.0), N=20_000, seed=5),
    }


def _child(args):
    times = {}
    for name, fn in _workloads(args.quad).items():
        fn()  # warm cache / JIT before timing
        runs = []
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            fn()
            runs.append(time.perf_counter() - t0)
        times[name] = min(runs)
    from lambdahull import _backend
    json.dump({"backend": _backend.BACKEND, "times": times}, sys.stdout)


def _run_backend(backend, argv):
    env = dict(os.environ, LAMBDAHULL_BACKEND=backend)
    proc = subprocess.run([sys.executable, __file__, "--as-child", *argv],
                          capture_output=True, text=True, env=env)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise SystemExit(f"{backend} child failed")
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quad", type=int, default=200_000)
    ap.add_argument("--as-child", action="store_true")
    args = ap.parse_args()
    if args.as_child:
        _child(args)
        return

    argv = ["--repeat", str(args.repeat), "--quad", str(args.quad)]
    nb = _run_backend("numba", argv)
    np_ = _run_backend("numpy", argv)
    assert nb["backend"] == "numba" and np_["backend"] == "numpy"

    width = max(len(k) for k in nb["times"])
    print(f"{'workload':<{width}}  {'numba':>9}  {'numpy':>9}  {'speedup':>8}")
    print("-" * (width + 32))
    for name, t_nb in nb["times"].items():
        t_np = np_["times"][name]
        print(f"{name:<{width}}  {t_nb:>8.4f}s  {t_np:>8.4f}s  "
              f"{t_np / t_nb:>7.2f}x")


if __name__ == "__main__":
    main()
