"""Exact-rational linear feasibility with Farkas certificates.

Systems are ``A x >= b`` (inequalities) together with ``C x = d``
(equalities) over free rational variables.  ``solve_feasibility`` returns
either an exact solution or an exact Farkas certificate, never both, and
both kinds are re-verified by substitution before being handed out.

On top of the feasibility engine the module offers the two homogeneous
primitives the efficiency analysis is built on: a nontrivial-solution
search for systems of the form ``A a >= 0`` with at least one strict row
(decided through a family of problems with one row normalized to
``>= 1``), and ``integralize``, which turns a rational nontrivial
solution of ``A x <= 0`` into an integral one whose entries respect the
Hadamard determinant bound, by re-solving at a vertex of the
box-constrained polytope and scaling by the least common multiple of the
vertex denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

from . import _kernel
from .errors import EffixError, InputError

Vector = tuple[Fraction, ...]

_ONE = Fraction(1)


def _dot(coeffs: Sequence, x: Sequence) -> Fraction:
    return sum((c * v for c, v in zip(coeffs, x)), Fraction(0))


def _as_row(coeffs: Sequence, rhs, num_vars: int) -> tuple[tuple, Fraction]:
    # ints are exact rationals already; avoid wrapping them (hot path)
    coeffs = tuple(c if type(c) is int else Fraction(c) for c in coeffs)
    if len(coeffs) != num_vars:
        raise InputError(
            f"row has {len(coeffs)} coefficients, expected {num_vars}"
        )
    return coeffs, rhs if type(rhs) is int else Fraction(rhs)


@dataclass(frozen=True)
class LinearSystem:
    """``ineq`` rows mean ``a . x >= b``; ``eq`` rows mean ``c . x = d``."""

    num_vars: int
    ineq: tuple[tuple[tuple, Fraction], ...] = ()
    eq: tuple[tuple[tuple, Fraction], ...] = ()

    def __post_init__(self):
        if self.num_vars < 0:
            raise InputError("negative variable count")
        object.__setattr__(
            self,
            "ineq",
            tuple(_as_row(a, b, self.num_vars) for a, b in self.ineq),
        )
        object.__setattr__(
            self,
            "eq",
            tuple(_as_row(c, d, self.num_vars) for c, d in self.eq),
        )


@dataclass(frozen=True)
class FeasibilityResult:
    """Exactly one of ``solution`` and the Farkas pair is present.

    In the infeasible case the multipliers witness
    ``lam . A + mu . C = 0`` with ``lam . b + mu . d > 0`` and
    ``lam >= 0``, an exact contradiction.
    """

    solution: Vector | None = None
    farkas_ineq: Vector | None = None
    farkas_eq: Vector | None = None

    @property
    def feasible(self) -> bool:
        return self.solution is not None


@dataclass(frozen=True)
class IntegralWitness:
    """Integral nontrivial solution of a homogeneous system ``A x <= 0``.

    ``bound`` is the scale factor actually used (the lcm of the vertex
    coordinate denominators); it divides the determinant of the active
    submatrix and therefore never exceeds the Hadamard bound.
    """

    x: tuple[int, ...]
    strict_row: int
    bound: int


def _integerize(coeffs: Sequence, rhs):
    """Scale a row to coprime integers; returns (coeffs, rhs, factor)
    with ``factor`` the positive rational the row was multiplied by."""
    if type(rhs) is int and all(type(c) is int for c in coeffs):
        ints = list(coeffs)
        r = rhs
        mult = 1
    else:
        mult = lcm(*(c.denominator for c in coeffs), Fraction(rhs).denominator)
        ints = [int(c * mult) for c in coeffs]
        r = int(rhs * mult)
    content = 0
    for v in ints:
        content = gcd(content, v)
    content = gcd(content, r if r >= 0 else -r)
    if content > 1:
        ints = [v // content for v in ints]
        r //= content
        return ints, r, Fraction(mult, content)
    return ints, r, _ONE if mult == 1 else Fraction(mult)


def _verify_solution(system: LinearSystem, x: Vector) -> None:
    for a, b in system.ineq:
        if _dot(a, x) < b:
            raise EffixError("internal error: solution fails an inequality")
    for c, d in system.eq:
        if _dot(c, x) != d:
            raise EffixError("internal error: solution fails an equality")


def _verify_farkas_normalized(norm, m, numerators) -> None:
    """Check the multiplier combination against the sign-normalized
    integer rows the simplex actually ran on.

    Each normalized row is a positive scaling (with flips absorbed into
    both its coefficients and its multiplier) of an original row, so a
    valid integer combination here certifies the original system too.
    """
    for j in range(m):
        total = 0
        for (ints, _, _, _), num in zip(norm, numerators):
            if num and ints[j]:
                total += num * ints[j]
        if total != 0:
            raise EffixError("internal error: Farkas combination is nonzero")
    gain = sum(num * rhs for (_, rhs, _, _), num in zip(norm, numerators))
    if gain <= 0:
        raise EffixError("internal error: Farkas certificate not contradictory")


def solve_feasibility(system: LinearSystem) -> FeasibilityResult:
    """Decide ``A x >= b, C x = d`` exactly.

    Free variables are split into differences of nonnegative ones and a
    phase-one simplex with Bland's rule runs on the integer tableau;
    artificial variables are only introduced for rows the all-zero point
    violates.  The verdict is always re-checked by substitution.
    """
    m = system.num_vars
    n_ineq = len(system.ineq)
    n_eq = len(system.eq)

    # per-row integerization, sign normalization and bookkeeping
    norm = []  # (ints, rhs, flipped, factor)
    for a, b in system.ineq:
        ints, r, factor = _integerize(a, b)
        if r > 0:
            norm.append((ints, r, False, factor))
        else:
            norm.append(([-v for v in ints], -r, True, factor))
    for c, d in system.eq:
        ints, r, factor = _integerize(c, d)
        if r >= 0:
            norm.append((ints, r, False, factor))
        else:
            norm.append(([-v for v in ints], -r, True, factor))

    slack_col = {}
    art_col = {}
    next_col = 2 * m
    for r in range(n_ineq):
        slack_col[r] = next_col
        next_col += 1
    for r in range(n_ineq + n_eq):
        _, rhs, flipped, _ = norm[r]
        needs_art = r >= n_ineq or not flipped
        if needs_art:
            art_col[r] = next_col
            next_col += 1
    ncols = next_col + 1  # + rhs

    tab = []
    basis = []
    for r, (ints, rhs, flipped, _) in enumerate(norm):
        row = [0] * ncols
        for j, v in enumerate(ints):
            row[j] = v
            row[m + j] = -v
        if r < n_ineq:
            # not flipped: a.x - s (+ w) = rhs; flipped: -a.x + s = -b >= 0
            row[slack_col[r]] = 1 if flipped else -1
        if r in art_col:
            row[art_col[r]] = 1
            basis.append(art_col[r])
        else:
            basis.append(slack_col[r])
        row[-1] = rhs
        tab.append(row)

    cost = [0] * (ncols - 1)
    for col in art_col.values():
        cost[col] = 1

    status, tab, basis, obj, scale = _kernel.simplex_min(tab, basis, cost)
    if status != _kernel.OPTIMAL:
        raise EffixError("internal error: phase one cannot be unbounded")

    if obj[-1] == 0:
        values = {}
        for r in range(len(tab)):
            values[basis[r]] = Fraction(tab[r][-1], tab[r][basis[r]])
        x = tuple(
            values.get(j, Fraction(0)) - values.get(m + j, Fraction(0))
            for j in range(m)
        )
        _verify_solution(system, x)
        return FeasibilityResult(solution=x)

    # infeasible: recover multipliers from the reduced costs of the row
    # marker columns (slack for inequalities, artificial for equalities)
    numerators = []
    lam = []
    for r in range(n_ineq):
        marker = -obj[slack_col[r]]
        if marker < 0:
            raise EffixError("internal error: negative Farkas multiplier")
        _, _, flipped, factor = norm[r]
        numerators.append(-marker if flipped else marker)
        lam.append(Fraction(marker, scale) * factor)
    mu = []
    for r in range(n_ineq, n_ineq + n_eq):
        numerator = scale + obj[art_col[r]]
        _, _, flipped, factor = norm[r]
        numerators.append(numerator)
        mu.append((-1 if flipped else 1) * Fraction(numerator, scale) * factor)
    _verify_farkas_normalized(norm, m, numerators)
    return FeasibilityResult(farkas_ineq=tuple(lam), farkas_eq=tuple(mu))


def nontrivial_homogeneous(
    rows: Sequence[Sequence],
    free_vars: Iterable[int],
    nonneg_vars: Iterable[int],
    zero_sum: bool = True,
) -> Vector | None:
    """Find ``a`` with ``rows . a >= 0`` componentwise, at least one row
    strict, the given sign constraints, and (optionally) ``sum(a) = 0``.

    The strictness requirement is decided through a family of feasibility
    problems, one per candidate row, with that row's value normalized to
    ``>= 1``; the first feasible member (lowest row index) wins.  Returns
    ``None`` when the whole family is infeasible.
    """
    rows = [
        tuple(c if type(c) is int else Fraction(c) for c in row) for row in rows
    ]
    if not rows:
        return None
    m = len(rows[0])
    free = frozenset(free_vars)
    nonneg = frozenset(nonneg_vars)
    if free | nonneg != frozenset(range(m)) or free & nonneg:
        raise InputError("free and nonnegative index sets must partition the variables")

    sign_rows = []
    for j in sorted(nonneg):
        unit = [0] * m
        unit[j] = 1
        sign_rows.append((tuple(unit), 0))
    eq = (((1,) * m, 0),) if zero_sum else ()

    tried = set()
    for idx, row in enumerate(rows):
        if all(c == 0 for c in row):
            continue
        ints, _, _ = _integerize(row, Fraction(0))
        key = tuple(ints)
        if key in tried:
            continue
        tried.add(key)
        ineq = [(other, 0) for k, other in enumerate(rows) if k != idx]
        ineq.append((row, 1))
        ineq.extend(sign_rows)
        result = solve_feasibility(LinearSystem(m, tuple(ineq), eq))
        if result.feasible:
            return result.solution
    return None


def hadamard_bound(max_abs_coeff: int, n: int, m: int) -> int:
    """Ceiling of ``(sqrt(k) * max_abs_coeff) ** k`` with ``k = min(n, m)``.

    Upper bound on any ``k x k`` subdeterminant of an integer matrix with
    entries of magnitude at most ``max_abs_coeff``.
    """
    if n <= 0 or m <= 0:
        raise InputError("matrix dimensions must be positive")
    if max_abs_coeff < 0:
        raise InputError("negative coefficient magnitude")
    if max_abs_coeff == 0:
        return 1
    k = min(n, m)
    squared = max_abs_coeff ** (2 * k) * k**k
    root = isqrt(squared)
    return root if root * root == squared else root + 1


def integralize(rows: Sequence[Sequence], alpha: Sequence) -> IntegralWitness:
    """Turn a rational nontrivial solution of ``rows . x <= 0`` into an
    integral one within the Hadamard bound.

    Re-solves at a vertex of the polytope ``rows . x <= 0, -1 <= x <= 1``
    that keeps the first strict row of ``alpha`` strictly negative, then
    clears denominators with their lcm.  The lcm divides the determinant
    of the active submatrix, so the bound is inherited rather than
    computed.
    """
    alpha = tuple(Fraction(v) for v in alpha)
    m = len(alpha)
    A = []
    for row in rows:
        ints, _, _ = _integerize(tuple(Fraction(c) for c in row), Fraction(0))
        if len(ints) != m:
            raise InputError("row length does not match the solution vector")
        A.append(ints)

    strict = -1
    for r, row in enumerate(A):
        value = _dot(row, alpha)
        if value > 0:
            raise InputError("alpha is not a solution of the system")
        if value < 0 and strict < 0:
            strict = r
    if strict < 0:
        raise InputError("alpha is a trivial solution (no strict row)")

    # polytope in shifted coordinates t = x + 1, 0 <= t <= 2:
    #   A t <= A 1    (slack per row; artificial when the row sum is negative)
    #   t_j <= 2      (slack per coordinate)
    n = len(A)
    slack_col = {}
    box_col = {}
    art_col = {}
    next_col = m
    for r in range(n):
        slack_col[r] = next_col
        next_col += 1
    for j in range(m):
        box_col[j] = next_col
        next_col += 1
    rowsums = [sum(row) for row in A]
    for r in range(n):
        if rowsums[r] < 0:
            art_col[r] = next_col
            next_col += 1
    ncols = next_col + 1

    tab = []
    basis = []
    for r, row in enumerate(A):
        line = [0] * ncols
        if rowsums[r] >= 0:
            for j, v in enumerate(row):
                line[j] = v
            line[slack_col[r]] = 1
            line[-1] = rowsums[r]
            basis.append(slack_col[r])
        else:
            for j, v in enumerate(row):
                line[j] = -v
            line[slack_col[r]] = -1
            line[art_col[r]] = 1
            line[-1] = -rowsums[r]
            basis.append(art_col[r])
        tab.append(line)
    for j in range(m):
        line = [0] * ncols
        line[j] = 1
        line[box_col[j]] = 1
        line[-1] = 2
        tab.append(line)
        basis.append(box_col[j])

    cost = [0] * (ncols - 1)
    for col in art_col.values():
        cost[col] = 1
    status, tab, basis, obj, scale = _kernel.simplex_min(tab, basis, cost)
    if status != _kernel.OPTIMAL or obj[-1] != 0:
        raise EffixError("internal error: box polytope must be feasible")

    # drive leftover zero-valued artificials out of the basis
    art_cols = set(art_col.values())
    keep = []
    for r in range(len(tab)):
        if basis[r] in art_cols:
            target = next(
                (
                    j
                    for j in range(ncols - 1)
                    if j not in art_cols and tab[r][j] != 0
                ),
                None,
            )
            if target is None:
                continue  # redundant row
            _kernel.force_pivot(tab, basis, r, target)
        keep.append(r)
    tab = [tab[r] for r in keep]
    basis = [basis[r] for r in keep]

    cost = [0] * (ncols - 1)
    for j, v in enumerate(A[strict]):
        cost[j] = v
    status, tab, basis, obj, scale = _kernel.simplex_min(
        tab, basis, cost, barred=tuple(art_cols)
    )
    if status != _kernel.OPTIMAL:
        raise EffixError("internal error: box polytope is bounded")

    values = {}
    for r in range(len(tab)):
        values[basis[r]] = Fraction(tab[r][-1], tab[r][basis[r]])
    z = [values.get(j, Fraction(0)) - 1 for j in range(m)]

    if _dot(A[strict], z) >= 0:
        raise EffixError("internal error: vertex lost the strict row")
    scale_factor = lcm(*(v.denominator for v in z)) if z else 1
    witness = tuple(int(v * scale_factor) for v in z)

    max_abs = max((abs(v) for row in A for v in row), default=0)
    limit = hadamard_bound(max_abs, n, m)
    for r, row in enumerate(A):
        value = sum(c * v for c, v in zip(row, witness))
        if value > 0 or (r == strict and value >= 0):
            raise EffixError("internal error: integral witness fails the system")
    if witness and max(abs(v) for v in witness) > limit:
        raise EffixError("internal error: integral witness exceeds the Hadamard bound")
    return IntegralWitness(x=witness, strict_row=strict, bound=scale_factor)
