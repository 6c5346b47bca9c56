"""Compare the compiled and pure-Python series multiplication kernels.

Micro: ``mul_blocks`` on two dense graded series.  Macro: ``assemble_F`` and a
Toda check run in subprocesses with and without ``HCIZ_PURE_PYTHON=1``.

    python3 benchmarks/bench_kernels.py [--weight 7] [--repeat 3]
"""

import argparse
import os
import subprocess
import sys
import time

from hciz.algebra import _kernel_py
from hciz.algebra.multiseries import Ring

try:
    from hciz.algebra import _kernel as _kernel_c
except ImportError:
    _kernel_c = None


def dense_series(W, nvars):
    ring = Ring([f"t{q}" for q in range(1, nvars + 1)], list(range(1, nvars + 1)))
    s = ring.one(W)
    for q in range(1, nvars + 1):
        s = s + ring.gen(f"t{q}", W) * q
    return (s ** 3).log(), ring


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def micro(W, repeat):
    s, ring = dense_series(W, W)
    a, b = s._b, (s * 2 + 1)._b
    caps = ring._cap_checks
    out = {}
    out["python"] = best_of(lambda: _kernel_py.mul_blocks(a, b, W, caps), repeat)
    if _kernel_c is not None:
        out["cython"] = best_of(lambda: _kernel_c.mul_blocks(a, b, W, caps), repeat)
        r1 = _kernel_py.mul_blocks(a, b, W, caps)
        r2 = _kernel_c.mul_blocks(a, b, W, caps)
        assert r1 == r2, "kernels disagree"
    return s.nterms(), out


MACRO = {
    "assemble_F": "from hciz.large_n.free_energy import assemble_F; assemble_F({W})",
    "toda": "from hciz.toda_ladder import verify_toda; verify_toda(4, {W})",
}


def macro(name, W, pure, repeat):
    env = dict(os.environ)
    if pure:
        env["HCIZ_PURE_PYTHON"] = "1"
    else:
        env.pop("HCIZ_PURE_PYTHON", None)
    code = (
        "import time; t = time.perf_counter(); "
        + MACRO[name].format(W=W)
        + "; print(time.perf_counter() - t)"
    )
    times = []
    for _ in range(repeat):
        r = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                           capture_output=True, text=True)
        times.append(float(r.stdout.strip()))
    return min(times)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--weight", type=int, default=7)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    W = args.weight

    n, t = micro(2 * W, args.repeat)
    print(f"micro mul_blocks, {n}-term operands (W={2 * W})")
    for k, v in t.items():
        print(f"  {k:7s} {v * 1e3:9.2f} ms")
    if "cython" in t:
        print(f"  speedup {t['python'] / t['cython']:.2f}x")
    else:
        print("  compiled kernel not built")

    for name, w in (("assemble_F", W), ("toda", W - 2)):
        tp = macro(name, w, True, args.repeat)
        tc = macro(name, w, False, args.repeat)
        print(f"macro {name} W={w}: python {tp:.3f}s  default backend {tc:.3f}s  speedup {tp / tc:.2f}x")


if __name__ == "__main__":
    main()
