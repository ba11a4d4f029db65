"""Benchmark the compiled simplex kernel against the pure-Python fallback.

Run with ``python -m effix.benchmark``.  The workload is the profile-level
equivalence decision (the dominant consumer of kernel time) over a batch
of random strict profiles, with the kernel backend forced each way; both
backends follow the same pivot order, so outputs are checked identical
while only the runtime differs.
"""

from __future__ import annotations

import argparse
import random
import time

from . import _kernel
from .efficiency import _support_decision, equivalence
from .mechanisms import pareto_set
from .oracle import random_strict_profile


def _run_batch(profiles) -> tuple[float, list[bool]]:
    _support_decision.cache_clear()
    started = time.perf_counter()
    verdicts = [equivalence(p).coincide for p in profiles]
    return time.perf_counter() - started, verdicts


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--profiles", type=int, default=200)
    parser.add_argument("--agents", type=int, default=4)
    parser.add_argument("--outcomes", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = random.Random(args.seed)
    labels = tuple(f"x{i + 1}" for i in range(args.outcomes))
    profiles = [
        random_strict_profile(args.agents, labels, rng)
        for _ in range(args.profiles)
    ]
    # warm the Pareto sets so both runs measure kernel work
    for p in profiles:
        pareto_set(p)

    if not _kernel.HAVE_SPEEDUPS:
        print("compiled kernel unavailable; timing the pure kernel only")
        elapsed, _ = _run_batch(profiles)
        print(f"pure:     {elapsed:8.3f} s")
        return 0

    fast = _kernel.fast
    try:
        _kernel.fast = None
        _kernel.HAVE_SPEEDUPS = False
        pure_time, pure_verdicts = _run_batch(profiles)
    finally:
        _kernel.fast = fast
        _kernel.HAVE_SPEEDUPS = True
    fast_time, fast_verdicts = _run_batch(profiles)

    if pure_verdicts != fast_verdicts:
        raise AssertionError("backends disagree; kernel bug")
    print(f"profiles: {args.profiles} (agents={args.agents}, outcomes={args.outcomes})")
    print(f"pure:     {pure_time:8.3f} s")
    print(f"compiled: {fast_time:8.3f} s")
    print(f"speedup:  {pure_time / fast_time:8.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
