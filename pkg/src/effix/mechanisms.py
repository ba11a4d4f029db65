"""Pareto-optimal outcomes, serial dictatorship and the random serial
dictatorship lottery with exact probabilities.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm

from .errors import CapExceededError, InputError
from .model import (
    AgentId,
    Lottery,
    Outcome,
    PreferenceProfile,
    check_lottery_outcomes,
)

DEFAULT_FACTORIAL_CAP = 8


@dataclass(frozen=True)
class DictatorOrder:
    """A permutation of the profile's agents."""

    sequence: tuple[AgentId, ...]

    def validate_for(self, profile: PreferenceProfile) -> None:
        if sorted(self.sequence) != sorted(profile.agent_ids):
            raise InputError("dictator order is not a permutation of the agent set")


def pareto_set(profile: PreferenceProfile) -> tuple[Outcome, ...]:
    """All Pareto-optimal outcomes, in profile file order.

    Quadratic scan: x survives unless some y is weakly preferred to x by
    every agent and strictly by at least one.
    """
    ranks = [
        {x: order.rank(x) for x in profile.outcomes} for _, order in profile.agents
    ]
    out = []
    for x in profile.outcomes:
        dominated = False
        for y in profile.outcomes:
            if y == x:
                continue
            weakly = all(r[y] <= r[x] for r in ranks)
            if weakly and any(r[y] < r[x] for r in ranks):
                dominated = True
                break
        if not dominated:
            out.append(x)
    return tuple(out)


def serial_dictatorship(
    profile: PreferenceProfile, order: DictatorOrder
) -> tuple[Outcome, ...]:
    """Maximal outcomes of the lexicographic preference induced by ``order``.

    Each dictator in turn keeps only her most preferred outcomes among
    those left by the earlier dictators; the result can contain several
    outcomes only if some agents are indifferent.
    """
    order.validate_for(profile)
    current = list(profile.outcomes)
    orders = dict(profile.agents)
    for agent in order.sequence:
        ranking = orders[agent]
        best = min(ranking.rank(x) for x in current)
        current = [x for x in current if ranking.rank(x) == best]
        if len(current) == 1:
            break
    return tuple(current)


def _selection_counts(profile, sigma_indices, orders, base):
    """Outcome -> accumulated base/|selection| units for one dictator order."""
    current = list(range(len(profile.outcomes)))
    for agent_idx in sigma_indices:
        rank = orders[agent_idx]
        best = min(rank[x] for x in current)
        current = [x for x in current if rank[x] == best]
        if len(current) == 1:
            break
    share = base // len(current)
    return current, share


def rsd(
    profile: PreferenceProfile,
    trials: int | None = None,
    seed: int = 0,
    factorial_cap: int | None = None,
) -> Lottery:
    """The random serial dictatorship lottery.

    With ``trials=None`` the exact lottery is returned: the average over
    all ``n!`` dictator orders of the uniform lottery on each order's
    selection, as exact rationals.  Exact mode enumerates every
    permutation and is guarded by ``factorial_cap`` (default
    ``DEFAULT_FACTORIAL_CAP`` agents).  With ``trials`` set, dictator
    orders are drawn uniformly with a seeded generator and the empirical
    frequency lottery is returned.
    """
    n = len(profile.agents)
    m = len(profile.outcomes)
    orders = [
        {
            i: order.rank(x)
            for i, x in enumerate(profile.outcomes)
        }
        for _, order in profile.agents
    ]
    base = lcm(*range(1, m + 1))

    if trials is None:
        cap = DEFAULT_FACTORIAL_CAP if factorial_cap is None else factorial_cap
        if n > cap:
            raise CapExceededError(
                f"exact mode enumerates {n}! dictator orders; cap is {cap} agents "
                "(pass trials=... to sample instead)"
            )
        counts = [0] * m
        for sigma in itertools.permutations(range(n)):
            selected, share = _selection_counts(profile, sigma, orders, base)
            for x in selected:
                counts[x] += share
        denom = factorial(n) * base
    else:
        if trials <= 0:
            raise InputError("trials must be positive")
        rng = random.Random(seed)
        agent_indices = list(range(n))
        counts = [0] * m
        for _ in range(trials):
            sigma = rng.sample(agent_indices, n)
            selected, share = _selection_counts(profile, sigma, orders, base)
            for x in selected:
                counts[x] += share
        denom = trials * base

    weights = tuple(
        (x, Fraction(counts[i], denom))
        for i, x in enumerate(profile.outcomes)
        if counts[i]
    )
    return Lottery(weights)


def rsd_is_ex_post_efficient(profile: PreferenceProfile, lottery: Lottery) -> bool:
    """True iff the lottery is supported on Pareto-optimal outcomes."""
    check_lottery_outcomes(profile, lottery)
    return lottery.restricted_to(pareto_set(profile))
