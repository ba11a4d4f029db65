"""Brute-force graders and profile enumerators for cross-validating the
LP-based decisions at desk scale.

The efficiency oracle is one-sided by design: a grid search can certify
inefficiency by exhibiting a dominating lottery, but its "efficient"
answers are trustworthy only where a completeness argument bounds the
denominators of potential dominators to the grid.  Each test suite using
it states its grid explicitly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, lcm
from typing import Iterator, Sequence

import numpy as np

from .efficiency import STRICTLY_DOMINATES, sd_compare
from .errors import CapExceededError, InputError
from .model import Lottery, Outcome, PreferenceProfile, WeakOrder

ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class GridSpec:
    """All lotteries whose weights are multiples of ``1/d`` for some
    ``d <= max_denominator``, over a fixed outcome tuple."""

    max_denominator: int
    outcomes: tuple[Outcome, ...]

    def __post_init__(self):
        if self.max_denominator < 1:
            raise InputError("max_denominator must be at least 1")
        if not self.outcomes:
            raise InputError("grid needs at least one outcome")


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ways to write ``total`` as an ordered sum of ``parts``
    nonnegative integers, lexicographically."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def grid_lotteries(spec: GridSpec) -> Iterator[Lottery]:
    """Deterministic, duplicate-free stream of grid lotteries.

    Iterates denominators in increasing order and compositions
    lexicographically, deduplicating equal rationals.
    """
    seen = set()
    m = len(spec.outcomes)
    for d in range(1, spec.max_denominator + 1):
        for comp in _compositions(d, m):
            weights = tuple(Fraction(k, d) for k in comp)
            if weights in seen:
                continue
            seen.add(weights)
            yield Lottery(
                tuple((x, w) for x, w in zip(spec.outcomes, weights))
            )


@lru_cache(maxsize=256)
def _grid_tables(profile: PreferenceProfile, spec: GridSpec):
    """Integer strict-upper-contour sums of every grid lottery.

    Returns (lottery index map, contour matrix) with weights scaled by
    lcm(1..max_denominator) so all arithmetic is exact int64.
    """
    scale = lcm(*range(1, spec.max_denominator + 1))
    outcome_pos = {x: j for j, x in enumerate(spec.outcomes)}

    lotteries = list(grid_lotteries(spec))
    index = {}
    weight_rows = np.zeros((len(lotteries), len(spec.outcomes)), dtype=np.int64)
    for i, lot in enumerate(lotteries):
        key = tuple(lot.weight(x) for x in spec.outcomes)
        index[key] = i
        for x, w in lot.entries:
            weight_rows[i, outcome_pos[x]] = int(w * scale)

    # one 0/1 selector per (agent, outcome): the strict upper contour
    selectors = []
    for _, order in profile.agents:
        rank = {x: order.rank(x) for x in profile.outcomes}
        for x in profile.outcomes:
            selectors.append(
                [
                    1 if y in outcome_pos and rank[y] < rank[x] else 0
                    for y in spec.outcomes
                ]
            )
    contour = weight_rows @ np.array(selectors, dtype=np.int64).T
    return index, contour, lotteries


def oracle_is_efficient(
    profile: PreferenceProfile, p: Lottery, spec: GridSpec
) -> bool:
    """Grid search for a strictly dominating lottery.

    Scans every grid lottery's exact contour sums; a candidate that beats
    ``p`` on every (agent, outcome) pair with one strict is re-confirmed
    through ``sd_compare`` before declaring ``p`` inefficient.
    """
    if set(spec.outcomes) != set(profile.outcomes):
        raise InputError("grid outcomes must match the profile")
    index, contour, lotteries = _grid_tables(profile, spec)
    key = tuple(p.weight(x) for x in spec.outcomes)
    if key not in index:
        raise InputError("lottery is not on the grid")
    row = contour[index[key]]
    geq = (contour >= row).all(axis=1)
    strict = (contour > row).any(axis=1)
    candidates = np.flatnonzero(geq & strict)
    for i in candidates:
        verdict = sd_compare(profile, lotteries[int(i)], p)
        if verdict.relation == STRICTLY_DOMINATES:
            return False
    return True


# ---------------------------------------------------------------------------
# Exhaustive profile enumeration


def _ordered_partitions(items: tuple) -> Iterator[tuple[frozenset, ...]]:
    """All ordered set partitions (sequences of disjoint non-empty blocks)."""
    if not items:
        yield ()
        return
    n = len(items)
    # nonempty subsets as bitmasks, in increasing mask order
    for mask in range(1, 1 << n):
        first = frozenset(items[i] for i in range(n) if mask >> i & 1)
        rest = tuple(items[i] for i in range(n) if not mask >> i & 1)
        for tail in _ordered_partitions(rest):
            yield (first,) + tail


def _ordered_bell(m: int) -> int:
    counts = [1]
    for k in range(1, m + 1):
        counts.append(sum(comb(k, j) * counts[k - j] for j in range(1, k + 1)))
    return counts[m]


def enumerate_profiles(
    n_agents: int, outcomes: Sequence[Outcome], kind: str
) -> Iterator[PreferenceProfile]:
    """Exhaustive stream of profiles of the given kind.

    ``strict`` ranges over all ``(m!)**n`` strict profiles, ``dichotomous``
    over all ``2**(n*m)`` approval matrices (the all-approve and
    none-approve rows encode the same single-class order), and ``weak``
    over all ordered set partitions per agent.  A cap guards against
    accidentally unbounded sweeps.
    """
    outcomes = tuple(outcomes)
    m = len(outcomes)
    if n_agents < 1 or m < 1:
        raise InputError("need at least one agent and one outcome")
    ids = tuple(str(i + 1) for i in range(n_agents))

    if kind == "strict":
        per_agent = [
            WeakOrder(tuple(frozenset((x,)) for x in perm))
            for perm in itertools.permutations(outcomes)
        ]
        count = factorial(m) ** n_agents
    elif kind == "dichotomous":
        per_agent = []
        for mask in range(1 << m):
            approved = frozenset(outcomes[j] for j in range(m) if mask >> j & 1)
            rest = frozenset(outcomes) - approved
            if approved and rest:
                per_agent.append(WeakOrder((approved, rest)))
            else:
                per_agent.append(WeakOrder((frozenset(outcomes),)))
        count = (1 << m) ** n_agents
    elif kind == "weak":
        per_agent = [
            WeakOrder(partition) for partition in _ordered_partitions(outcomes)
        ]
        count = _ordered_bell(m) ** n_agents
    else:
        raise InputError(f"unknown profile kind {kind!r}")

    if count > ENUMERATION_CAP:
        raise CapExceededError(
            f"{kind} enumeration would produce {count} profiles (cap {ENUMERATION_CAP})"
        )
    for combo in itertools.product(per_agent, repeat=n_agents):
        yield PreferenceProfile(outcomes=outcomes, agents=tuple(zip(ids, combo)))


# ---------------------------------------------------------------------------
# Random profile generators (census and property tests)


def random_strict_profile(
    n_agents: int, outcomes: Sequence[Outcome], rng: random.Random
) -> PreferenceProfile:
    outcomes = tuple(outcomes)
    agents = []
    for i in range(n_agents):
        perm = list(outcomes)
        rng.shuffle(perm)
        agents.append(
            (str(i + 1), WeakOrder(tuple(frozenset((x,)) for x in perm)))
        )
    return PreferenceProfile(outcomes=outcomes, agents=tuple(agents))


def random_dichotomous_profile(
    n_agents: int, outcomes: Sequence[Outcome], rng: random.Random
) -> PreferenceProfile:
    outcomes = tuple(outcomes)
    agents = []
    for i in range(n_agents):
        approved = frozenset(x for x in outcomes if rng.getrandbits(1))
        rest = frozenset(outcomes) - approved
        if approved and rest:
            order = WeakOrder((approved, rest))
        else:
            order = WeakOrder((frozenset(outcomes),))
        agents.append((str(i + 1), order))
    return PreferenceProfile(outcomes=outcomes, agents=tuple(agents))


def random_weak_profile(
    n_agents: int, outcomes: Sequence[Outcome], rng: random.Random
) -> PreferenceProfile:
    """Uniform-ish weak orders: a random permutation cut into classes by
    independent coin flips between adjacent positions."""
    outcomes = tuple(outcomes)
    agents = []
    for i in range(n_agents):
        perm = list(outcomes)
        rng.shuffle(perm)
        classes = []
        current = [perm[0]]
        for x in perm[1:]:
            if rng.getrandbits(1):
                classes.append(frozenset(current))
                current = [x]
            else:
                current.append(x)
        classes.append(frozenset(current))
        agents.append((str(i + 1), WeakOrder(tuple(classes))))
    return PreferenceProfile(outcomes=outcomes, agents=tuple(agents))
