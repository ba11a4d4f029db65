import itertools
import random
from fractions import Fraction

import pytest

from effix.errors import InputError
from effix.lp import (
    LinearSystem,
    hadamard_bound,
    integralize,
    nontrivial_homogeneous,
    solve_feasibility,
)

from conftest import strict_profile


def contour_rows(profile):
    """Strict-upper-contour 0/1 rows over all outcomes, (agent, outcome)
    ordered; rebuilt here independently of the library's helper."""
    rows = []
    for _, order in profile.agents:
        for x in profile.outcomes:
            r = order.rank(x)
            above = set().union(*order.classes[:r]) if r else set()
            rows.append([1 if y in above else 0 for y in profile.outcomes])
    return rows


# ---------------------------------------------------------------------------
# solve_feasibility basics


def test_contradictory_pair_gives_farkas():
    result = solve_feasibility(LinearSystem(1, ineq=(((1,), 1), ((-1,), 0))))
    assert not result.feasible
    lam = result.farkas_ineq
    assert all(l >= 0 for l in lam)
    # recombine: lam . A = 0, lam . b > 0
    assert lam[0] * 1 + lam[1] * (-1) == 0
    assert lam[0] * 1 + lam[1] * 0 > 0


def test_pinned_variable_solution():
    result = solve_feasibility(LinearSystem(1, ineq=(((1,), 0),), eq=(((1,), 3),)))
    assert result.feasible
    assert result.solution == (Fraction(3),)


def test_welfare_system_for_cycle_lottery(cycles_profile):
    # full pairwise representation system with zero welfare on {a, b, c}
    # and nonpositive welfare elsewhere, built from scratch
    profile = cycles_profile
    agents = profile.agent_ids
    outcomes = profile.outcomes
    var = {(a, x): i for i, (a, x) in enumerate(itertools.product(agents, outcomes))}
    ineq = []
    eq = []
    for a in agents:
        order = profile.order_of(a)
        for x in outcomes:
            for y in outcomes:
                if order.rank(x) < order.rank(y):
                    row = [0] * len(var)
                    row[var[(a, x)]] = 1
                    row[var[(a, y)]] = -1
                    ineq.append((row, 1))
    for x in outcomes:
        row = [0] * len(var)
        for a in agents:
            row[var[(a, x)]] = 1
        if x in ("a", "b", "c"):
            eq.append((row, 0))
        else:
            ineq.append(([-v for v in row], 0))
    result = solve_feasibility(LinearSystem(len(var), tuple(ineq), tuple(eq)))
    assert result.feasible
    # representation property by exhaustive scan
    for a in agents:
        order = profile.order_of(a)
        for x in outcomes:
            for y in outcomes:
                ux = result.solution[var[(a, x)]]
                uy = result.solution[var[(a, y)]]
                assert (ux >= uy) == (order.rank(x) <= order.rank(y))


# ---------------------------------------------------------------------------
# nontrivial_homogeneous


def test_cycle_profile_direction(cycles_profile):
    rows = contour_rows(cycles_profile)
    alpha = nontrivial_homogeneous(rows, range(6), (), zero_sum=True)
    assert alpha == (1, 1, 1, -1, -1, -1)


def test_single_variable_zero_sum_has_no_direction():
    assert nontrivial_homogeneous([[1]], [0], [], zero_sum=True) is None


def test_single_peaked_profile_has_no_direction():
    # peaks at both ends of the axis a < b < c < d, so the Pareto set is
    # the full axis and the system ranges over every outcome
    profile = strict_profile(
        ["a", "b", "c", "d"],
        [["a", "b", "c", "d"], ["d", "c", "b", "a"], ["b", "c", "a", "d"]],
    )
    rows = contour_rows(profile)
    assert nontrivial_homogeneous(rows, range(4), (), zero_sum=True) is None


def test_sign_constrained_direction(five_agent_approvals):
    rows = contour_rows(five_agent_approvals)
    # support {c, d}: free there, nonnegative on {a, b}
    alpha = nontrivial_homogeneous(rows, [2, 3], [0, 1], zero_sum=True)
    assert alpha == (1, 1, -1, -1)


# ---------------------------------------------------------------------------
# integralize


def integrality_checks(rows, witness):
    assert all(isinstance(v, int) for v in witness.x)
    values = [sum(c * v for c, v in zip(row, witness.x)) for row in rows]
    assert all(v <= 0 for v in values)
    assert values[witness.strict_row] < 0
    n, m = len(rows), len(witness.x)
    max_abs = max(abs(c) for row in rows for c in row)
    assert max(abs(v) for v in witness.x) <= hadamard_bound(max_abs, n, m)


def test_one_row_witness():
    rows = [[1, -2]]
    witness = integralize(rows, (Fraction(-1, 2), Fraction(0)))
    integrality_checks(rows, witness)
    assert witness.bound <= 2  # largest 1x1 subdeterminant


def test_integralize_idempotent_on_vertices():
    rows = [[1, -2]]
    first = integralize(rows, (Fraction(-1, 2), Fraction(0)))
    again = integralize(rows, tuple(Fraction(v) for v in first.x))
    assert again.x == first.x


def test_cycle_direction_integralizes_to_unit_vector(cycles_profile):
    rows = contour_rows(cycles_profile)
    alpha = nontrivial_homogeneous(rows, range(6), (), zero_sum=True)
    negated = [[-c for c in row] for row in rows]
    negated.append([1] * 6)
    negated.append([-1] * 6)
    witness = integralize(negated, alpha)
    integrality_checks(negated, witness)
    assert witness.x == (1, 1, 1, -1, -1, -1)
    # the expected unit direction verifies by substitution
    expected = (1, 1, 1, -1, -1, -1)
    for row in negated:
        assert sum(c * v for c, v in zip(row, expected)) <= 0


def test_integralize_rejects_non_solutions():
    with pytest.raises(InputError, match="not a solution"):
        integralize([[1, 0]], (Fraction(1), Fraction(0)))
    with pytest.raises(InputError, match="trivial"):
        integralize([[1, 0]], (Fraction(0), Fraction(0)))


# ---------------------------------------------------------------------------
# hadamard_bound


@pytest.mark.parametrize(
    "c, n, m, expected",
    [(1, 1, 1, 1), (1, 4, 4, 16), (2, 3, 3, 42), (1, 9, 4, 16), (3, 1, 7, 3)],
)
def test_hadamard_values(c, n, m, expected):
    assert hadamard_bound(c, n, m) == expected


def test_hadamard_rejects_bad_dimensions():
    with pytest.raises(InputError):
        hadamard_bound(1, 0, 3)


# ---------------------------------------------------------------------------
# fuzz against a vertex-enumeration oracle

BOX = 10**7  # safely beyond any vertex coordinate of the fuzzed systems


def gauss_solve(matrix, rhs):
    """Exact Gaussian elimination; None when singular."""
    m = len(matrix)
    a = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(matrix, rhs)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col]
        a[col] = [v / inv for v in a[col]]
        for r in range(m):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * p for v, p in zip(a[r], a[col])]
    return [a[r][m] for r in range(m)]


def oracle_feasible(num_vars, ineq, eq):
    """Feasibility by enumerating candidate vertices of the system plus a
    huge bounding box (any feasible rational system of this size has a
    solution well inside the box)."""
    rows = [(list(a), Fraction(b)) for a, b in ineq]
    rows += [(list(c), Fraction(d)) for c, d in eq]
    for j in range(num_vars):
        unit = [0] * num_vars
        unit[j] = 1
        rows.append((unit, Fraction(-BOX)))
        rows.append(([-v for v in unit], Fraction(-BOX)))

    def satisfies(x):
        for a, b in ineq:
            if sum(Fraction(c) * v for c, v in zip(a, x)) < b:
                return False
        for c, d in eq:
            if sum(Fraction(cc) * v for cc, v in zip(c, x)) != d:
                return False
        return all(abs(v) <= BOX for v in x)

    for subset in itertools.combinations(range(len(rows)), num_vars):
        matrix = [rows[i][0] for i in subset]
        rhs = [rows[i][1] for i in subset]
        x = gauss_solve(matrix, rhs)
        if x is not None and satisfies(x):
            return True
    return False


def random_system(rng, num_vars):
    n_ineq = rng.randint(1, num_vars + 2)
    n_eq = rng.randint(0, 1)
    ineq = tuple(
        (
            tuple(rng.randint(-3, 3) for _ in range(num_vars)),
            rng.randint(-3, 3),
        )
        for _ in range(n_ineq)
    )
    eq = tuple(
        (
            tuple(rng.randint(-3, 3) for _ in range(num_vars)),
            rng.randint(-3, 3),
        )
        for _ in range(n_eq)
    )
    return LinearSystem(num_vars, ineq, eq)


def test_fuzz_against_vertex_oracle():
    rng = random.Random(99)
    feasible_seen = infeasible_seen = 0
    for _ in range(150):
        num_vars = rng.randint(1, 3)
        system = random_system(rng, num_vars)
        result = solve_feasibility(system)
        expected = oracle_feasible(num_vars, system.ineq, system.eq)
        assert result.feasible == expected
        # exactly one certificate kind, and it verifies by substitution
        if result.feasible:
            feasible_seen += 1
            assert result.farkas_ineq is None and result.farkas_eq is None
            for a, b in system.ineq:
                assert sum(c * v for c, v in zip(a, result.solution)) >= b
            for c, d in system.eq:
                assert sum(cc * v for cc, v in zip(c, result.solution)) == d
        else:
            infeasible_seen += 1
            assert result.solution is None
            lam, mu = result.farkas_ineq, result.farkas_eq
            assert all(l >= 0 for l in lam)
            for j in range(system.num_vars):
                total = sum(l * a[j] for l, (a, _) in zip(lam, system.ineq))
                total += sum(m * c[j] for m, (c, _) in zip(mu, system.eq))
                assert total == 0
            gain = sum(l * b for l, (_, b) in zip(lam, system.ineq))
            gain += sum(m * d for m, (_, d) in zip(mu, system.eq))
            assert gain > 0
    assert feasible_seen > 20 and infeasible_seen > 20
