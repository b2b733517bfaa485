"""Time the DP backward sweep with the compiled kernel and the numpy fallback.

Usage::

    python3 benchmarks/bench_dp.py --nt 2000 --nx 4001 --repeat 5
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from growthpmp import Params
from growthpmp.oracle import COMPILED_AVAILABLE, DpConfig
from growthpmp.oracle.dp import _split_shift, stage_coefficients
from growthpmp.oracle.kernels import get_backward_sweep


def sweep_inputs(params: Params, config: DpConfig):
    times = np.linspace(params.t0, params.T, config.nt + 1)
    grid = np.linspace(config.x_min, config.x_max, config.nx)
    dt = params.horizon / config.nt
    dx = (config.x_max - config.x_min) / (config.nx - 1)
    controls = np.array(config.control_set)
    c0, c1 = stage_coefficients(params, times, controls)
    shifts = [_split_shift(-params.a * u * dt / dx) for u in controls]
    idx = np.array([k for k, _ in shifts], dtype=np.intp)
    w = np.array([w for _, w in shifts])
    return c0, c1, grid, idx, w


def bench(backend: str, inputs, repeat: int):
    sweep = get_backward_sweep(backend)
    sweep(*inputs)  # warm-up
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        V = sweep(*inputs)
        samples.append(time.perf_counter() - start)
    return samples, V


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nt", type=int, default=2000)
    ap.add_argument("--nx", type=int, default=4001)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--offgrid", action="store_true",
                    help="use a grid where steps land between nodes (interpolating path)")
    args = ap.parse_args()

    params = Params("fp2", 1.0, 2.0, 0.0, 2.0, 0.0)
    config = DpConfig.covering(params, args.nt, args.nx)
    if args.offgrid:
        config = DpConfig(args.nt, args.nx + 7, config.x_min, config.x_max)
    inputs = sweep_inputs(params, config)

    backends = ["python"] + (["compiled"] if COMPILED_AVAILABLE else [])
    results = {b: bench(b, inputs, args.repeat) for b in backends}
    print(f"grid nt={config.nt} nx={config.nx}, {args.repeat} runs each")
    for b, (samples, _) in results.items():
        print(f"  {b:9s} median {statistics.median(samples) * 1e3:8.2f} ms   "
              f"min {min(samples) * 1e3:8.2f} ms")
    if "compiled" in results:
        py, cc = results["python"], results["compiled"]
        speedup = statistics.median(py[0]) / statistics.median(cc[0])
        fin = np.isfinite(py[1])
        diff = float(np.max(np.abs(py[1][fin] - cc[1][fin]))) if fin.any() else 0.0
        same_inf = bool(np.array_equal(fin, np.isfinite(cc[1])))
        print(f"  speedup {speedup:.2f}x, max |V_py - V_c| {diff:.1e}, same inf mask {same_inf}")
    else:
        print("  compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
