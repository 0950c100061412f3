"""Compare the compiled and numpy kernel backends on the hot paths.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import time

import numpy as np

from revram import kernels
from revram.gates import builtin_gate
from revram.netlist import check_reversibility
from revram.sim import ClockedMachine, exhaustive_equivalence
from revram.synth import RamConfig, build_rram
from revram import qalgebra


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def single_cycles(backend):
    cfg = RamConfig(2, 4, "functional")
    machine = ClockedMachine(build_rram(cfg), backend=backend)
    rng = random.Random(0)

    def run():
        for _ in range(500):
            ins = {f"a{k}": rng.randrange(2) for k in range(cfg.n)}
            ins["w"] = rng.randrange(2)
            ins.update({f"d{c}": rng.randrange(2) for c in range(cfg.m)})
            machine.step_cycle(ins)
    return run


def exhaustive_check(backend):
    netlist = build_rram(RamConfig(1, 2))

    def run():
        assert check_reversibility(netlist, backend=backend)
    return run


def batch_scripts(backend):
    def run():
        assert exhaustive_equivalence(RamConfig(1, 1, "functional"), 6, backend=backend).ok
    return run


def matmul(backend):
    rng = np.random.default_rng(0)
    mats = [tuple(rng.integers(-8, 9, (8, 8)).astype(np.int64) * 64 for _ in range(2)) for _ in range(200)]

    def run():
        for (ar, ai), (br, bi) in zip(mats, mats[1:]):
            backend.matmul_shift(ar, ai, br, bi, 6)
    return run


def search(backend):
    def run():
        saved = qalgebra.kernels
        qalgebra.kernels = backend
        try:
            qalgebra.search_min_decomposition(builtin_gate("FRG"), 5)
        finally:
            qalgebra.kernels = saved
    return run


CASES = [
    ("500 RAM cycles, n=2 m=4 (single state)", single_cycles),
    ("reversibility check, RAM n=1 m=2 (2^14 states)", exhaustive_check),
    ("all RAM scripts len<=6, n=1 m=1 (batched)", batch_scripts),
    ("200 exact 8x8 Gaussian matmuls", matmul),
    ("FRG decomposition search, max_len 5", search),
]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    found = kernels.backends()
    print(f"backends: {', '.join(found)} (active: {kernels.BACKEND})")
    header = f"{'case':<50}" + "".join(f"{name:>12}" for name in found)
    if "cython" in found:
        header += f"{'speedup':>10}"
    print(header)
    for label, make in CASES:
        times = {name: timed(make(mod), args.repeat) for name, mod in found.items()}
        row = f"{label:<50}" + "".join(f"{times[name] * 1e3:>10.1f}ms" for name in found)
        if "cython" in found:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
