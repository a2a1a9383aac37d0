"""Compare the compiled and pure-Python kernels on typical workloads.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``. Each workload
is run on both backends and the outputs are checked for equality.
"""

import argparse
import time

from bicagg import _backend
from bicagg.aggregate import single_linkage
from bicagg.core import remove_non_maximal
from bicagg.enumeration import EnumParams, enumerate_maximal
from bicagg.synthgen import SynthSpec, add_noise, generate


def _best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads():
    art1 = generate(SynthSpec("art1", seed=1))
    noisy = add_noise(art1.matrix, 0.6, 2)
    art3 = add_noise(generate(SynthSpec("art3", seed=3)).matrix, 0.4, 1)
    yield "enumerate art1 sigma=0.6 eps=6", lambda b: enumerate_maximal(noisy, EnumParams(50, 4, 6), backend=b)
    yield "enumerate art3 sigma=0.4 eps=4", lambda b: enumerate_maximal(art3, EnumParams(50, 4, 4), backend=b)
    frags = remove_non_maximal(enumerate_maximal(art3, EnumParams(50, 4, 2)))
    yield f"single linkage, {len(frags)} fragments", lambda b: single_linkage(frags, backend=b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _backend.available()
    print(f"backends: {', '.join(backends)} (default {_backend.NAME})")
    print(f"{'workload':42s}" + "".join(f"{b:>12s}" for b in backends) + "   speedup")
    for name, fn in workloads():
        times, outs = [], []
        for b in backends:
            t, out = _best_of(lambda: fn(b), args.repeat)
            times.append(t)
            outs.append(out)
        if any(o != outs[0] for o in outs[1:]):
            raise SystemExit(f"backends disagree on {name!r}")
        speed = f"{times[-1] / times[0]:8.1f}x" if len(times) > 1 else ""
        print(f"{name:42s}" + "".join(f"{t:11.3f}s" for t in times) + "  " + speed)


if __name__ == "__main__":
    main()
