"""Benchmark the compiled term kernels against the pure-Python fallback.

Runs the same workload twice in subprocesses: once with the default backend
(the compiled extension when built) and once with LGMF_PURE=1.  The workload
exercises the three hot paths: dense-ish polynomial products, a Groebner
basis with normal forms, and a Koszul-unit tensor square.

    python3 bench/bench_kernel.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
from fractions import Fraction
from lgmf import KERNEL_BACKEND
from lgmf.ring import RingContext
from lgmf.ideal import groebner, normal_form
from lgmf.unit import koszul_unit
from lgmf.mf import tensor, mf_rename

timings = {"backend": KERNEL_BACKEND}

ctx = RingContext(["x", "y", "z"])
x, y, z = (ctx.gen(n) for n in "xyz")

t0 = time.perf_counter()
p = (x + 2*y + 3*z + 1)
q = (x*y + y*z + z*x - 7)
for _ in range(6):
    p = p * q + p
timings["poly_products_s"] = time.perf_counter() - t0
checksum = sum(p.terms.values())

t0 = time.perf_counter()
W = x**4 + y**4 + z**4 + x*y*z
gens = [W.ctx.zero() + g for g in
        [4*x**3 + y*z, 4*y**3 + x*z, 4*z**3 + x*y]]
gb = groebner(gens)
acc = ctx.zero()
for i in range(40):
    acc = acc + normal_form((x + y + z + 1)**3 * ctx.const(Fraction(i + 1)),
                            gb)
timings["groebner_nf_s"] = time.perf_counter() - t0

t0 = time.perf_counter()
u = koszul_unit(x**3 + y**3 + z**3)
u2 = mf_rename(u, {n: n + "b" for n in u.prime_names})
T = tensor(u, mf_rename(u2, dict(zip(u2.ctx.names, u2.ctx.names))))
timings["unit_tensor_s"] = time.perf_counter() - t0

timings["checksum"] = str(checksum)
print(json.dumps(timings))
"""


def run_once(pure: bool):
    env = dict(os.environ)
    env.pop("LGMF_PURE", None)
    if pure:
        env["LGMF_PURE"] = "1"
    src = os.path.join(os.path.dirname(__file__), os.pardir, "src")
    if os.path.isdir(src):
        env["PYTHONPATH"] = os.path.abspath(src) + os.pathsep + env.get(
            "PYTHONPATH", "")
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    best = {}
    for pure in (False, True):
        runs = [run_once(pure) for _ in range(args.repeat)]
        label = runs[0]["backend"]
        best[label] = {
            k: min(r[k] for r in runs)
            for k in runs[0] if k.endswith("_s")
        }
        best[label]["checksum"] = runs[0]["checksum"]

    labels = list(best)
    print(f"{'workload':<18}" + "".join(f"{l:>12}" for l in labels)
          + ("   speedup" if len(labels) == 2 else ""))
    keys = [k for k in next(iter(best.values())) if k.endswith("_s")]
    for k in keys:
        row = f"{k:<18}"
        vals = [best[l][k] for l in labels]
        row += "".join(f"{v:>12.4f}" for v in vals)
        if len(vals) == 2 and vals[0] > 0:
            row += f"{vals[1] / vals[0]:>9.2f}x"
        print(row)
    checks = {best[l]["checksum"] for l in labels}
    print("checksums agree" if len(checks) == 1
          else f"CHECKSUM MISMATCH: {checks}")


if __name__ == "__main__":
    main()
