"""Parity between the compiled simplex kernel and the pure-Python one.

Both follow the same pivot order, so on any instance the final tableau,
basis, objective row and certificates must be bit-identical; the compiled
backend may only differ by raising OverflowError, after which the caller
reruns on the pure kernel.
"""

import random
from fractions import Fraction

import pytest

from effix import _kernel
from effix.lp import LinearSystem, solve_feasibility

needs_speedups = pytest.mark.skipif(
    not _kernel.HAVE_SPEEDUPS, reason="compiled kernel not built"
)


@pytest.fixture
def forced_pure(monkeypatch):
    monkeypatch.setattr(_kernel, "HAVE_SPEEDUPS", False)
    monkeypatch.setattr(_kernel, "fast", None)


def random_system(rng, num_vars):
    ineq = tuple(
        (
            tuple(rng.randint(-4, 4) for _ in range(num_vars)),
            rng.randint(-4, 4),
        )
        for _ in range(rng.randint(1, num_vars + 3))
    )
    eq = tuple(
        (
            tuple(rng.randint(-4, 4) for _ in range(num_vars)),
            rng.randint(-4, 4),
        )
        for _ in range(rng.randint(0, 2))
    )
    return LinearSystem(num_vars, ineq, eq)


@needs_speedups
def test_backends_agree_on_random_systems(monkeypatch):
    rng = random.Random(2718)
    systems = [random_system(rng, rng.randint(1, 5)) for _ in range(200)]
    fast_results = [solve_feasibility(s) for s in systems]
    monkeypatch.setattr(_kernel, "HAVE_SPEEDUPS", False)
    monkeypatch.setattr(_kernel, "fast", None)
    pure_results = [solve_feasibility(s) for s in systems]
    assert fast_results == pure_results


@needs_speedups
def test_raw_kernel_parity_on_tableau():
    from effix._kernel import fast, pure

    rng = random.Random(31415)
    for _ in range(100):
        nrows = rng.randint(1, 5)
        extra = rng.randint(1, 4)
        ncols = nrows + extra + 1
        tab = []
        basis = []
        for r in range(nrows):
            row = [rng.randint(-5, 5) for _ in range(extra)]
            marker = [0] * nrows
            marker[r] = 1
            tab.append(row + marker + [rng.randint(0, 6)])
            basis.append(extra + r)
        cost = [rng.randint(-3, 3) for _ in range(ncols - 1)]
        fast_out = fast.simplex_min([r[:] for r in tab], basis[:], cost)
        pure_out = pure.simplex_min([r[:] for r in tab], basis[:], cost)
        assert fast_out == (pure_out[0], *pure_out[1:])


def test_overflow_falls_back_to_pure():
    # coefficients far beyond int64: the compiled kernel must bail out and
    # the wrapper rerun the instance unchanged on the pure kernel
    big = 10**30
    system = LinearSystem(
        2,
        ineq=(((big, 0), big), ((-1, 0), -2)),
        eq=(((0, 1), 7 * big),),
    )
    if _kernel.HAVE_SPEEDUPS:
        with pytest.raises(OverflowError):
            _kernel.fast.simplex_min([[big, 1, big]], [1], [0, 1])
    result = solve_feasibility(system)
    assert result.feasible
    x = result.solution
    assert big * x[0] >= big and x[0] <= 2
    assert x[1] == 7 * big


def test_pure_kernel_standalone(forced_pure):
    result = solve_feasibility(LinearSystem(1, ineq=(((1,), 1), ((-1,), 0))))
    assert not result.feasible
    result = solve_feasibility(LinearSystem(1, eq=(((2,), 5),)))
    assert result.solution == (Fraction(5, 2),)
