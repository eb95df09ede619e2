"""Time the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter because the flag is read at import.
The first numba call (compilation or cache load) is timed separately.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from surrogate_mix import backend, oracles
from surrogate_mix.model import HiDimSpec, MixtureConfig, SequenceModelSpec

repeat = int(sys.argv[1])
spec = HiDimSpec(2.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.1)
k = np.arange(1, 100_001, dtype=float)
seq = SequenceModelSpec(k ** -1.5, k ** -1.5, k ** 2, 1.0, 1.0, 100, 100, 1.0, 1.0)

t0 = time.perf_counter()
oracles.hidim_asymptotic_risk(spec, 0.5)
oracles.sequence_risk(seq, MixtureConfig(0.5, 0.01))
warm = time.perf_counter() - t0


def best(fn):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


out = {
    "backend": backend(),
    "first_call_s": warm,
    "fixed_point_x1000_s": best(lambda: [oracles.hidim_fixed_point(spec, 0.5, 0.3, 0.4, 0.001 * i)
                                         for i in range(1000)]),
    "hidim_risk_s": best(lambda: oracles.hidim_asymptotic_risk(spec, 0.3)),
    "sequence_risk_x100_s": best(lambda: [oracles.sequence_risk(seq, MixtureConfig(0.5, 0.01))
                                          for _ in range(100)]),
}
print(json.dumps(out))
"""


def run(disable, repeat):
    env = dict(os.environ)
    env.pop("SURROGATE_MIX_DISABLE_NUMBA", None)
    if disable:
        env["SURROGATE_MIX_DISABLE_NUMBA"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="timed repetitions; the best is kept")
    args = ap.parse_args(argv)
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    print(f"{'case':<24}{fast['backend']:>12}{slow['backend']:>12}{'speedup':>10}")
    for key in fast:
        if key == "backend":
            continue
        f, s = fast[key], slow[key]
        print(f"{key:<24}{f:>12.4f}{s:>12.4f}{s / f:>10.1f}")


if __name__ == "__main__":
    main()
