"""Stochastic-dominance comparison of lotteries, efficiency certificates,
and the profile-level decision whether ex-ante and ex-post efficiency
coincide.

The decision machinery is two-sided.  A lottery (equivalently, by support
closure, a support set) is either certified efficient by a utilitarian
representation under which its support maximizes welfare, or certified
dominated by an explicit integral improvement direction ``alpha`` and the
strictly dominating lottery it induces.  The profile-level decision
applies the same machinery to the uniform lottery over the Pareto set and
additionally extracts the combinatorial witness sequences from ``alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

from . import lp
from .errors import EffixError, InfeasibleRepresentationError, InputError
from .mechanisms import pareto_set
from .model import (
    AgentId,
    Lottery,
    Outcome,
    PreferenceProfile,
    UtilityProfile,
    WeakOrder,
    check_lottery_outcomes,
    lottery_json_dict,
)

STRICTLY_DOMINATES = "strictly_dominates"
WEAKLY_DOMINATES_EQUAL = "weakly_dominates_equal"
INCOMPARABLE = "incomparable"

EFFICIENT = "efficient"
DOMINATED = "dominated"


@dataclass(frozen=True)
class DominanceVerdict:
    """Directional stochastic-dominance verdict for a pair ``(p, q)``.

    ``strict_witness`` is the first (agent, outcome) pair, in profile
    order, at which p's strict-upper-contour mass strictly exceeds q's.
    """

    relation: str
    strict_witness: tuple[AgentId, Outcome] | None = None


def _contour_diffs(profile, p, q, weak=False):
    """Yield (agent, outcome, upper-contour mass difference p-q) in
    (agent order, outcome file order)."""
    for agent, order in profile.agents:
        cumulative = Fraction(0)
        values = {}
        for cls in order.classes:
            class_mass = sum(
                ((p.weight(x) - q.weight(x)) for x in cls), Fraction(0)
            )
            if weak:
                cumulative += class_mass
                value = cumulative
            else:
                value = cumulative
                cumulative += class_mass
            for x in cls:
                values[x] = value
        for x in profile.outcomes:
            yield agent, x, values[x]


def sd_compare(profile: PreferenceProfile, p: Lottery, q: Lottery) -> DominanceVerdict:
    """Does ``p`` stochastically dominate ``q`` for every agent?

    Evaluates the strict-upper-contour mass of both lotteries at every
    (agent, outcome) pair exactly.  ``strictly_dominates`` needs all
    comparisons ``>=`` with at least one ``>``; all equal gives
    ``weakly_dominates_equal``; any ``<`` gives ``incomparable``.
    """
    check_lottery_outcomes(profile, p)
    check_lottery_outcomes(profile, q)
    witness = None
    for agent, x, value in _contour_diffs(profile, p, q):
        if value < 0:
            return DominanceVerdict(INCOMPARABLE)
        if value > 0 and witness is None:
            witness = (agent, x)
    if witness is None:
        return DominanceVerdict(WEAKLY_DOMINATES_EQUAL)
    return DominanceVerdict(STRICTLY_DOMINATES, strict_witness=witness)


def sd_compare_weak_contours(profile, p, q) -> DominanceVerdict:
    """Same verdict computed from weak upper contours; equivalent for weak
    orders and asserted equal to ``sd_compare`` in the test suite."""
    check_lottery_outcomes(profile, p)
    check_lottery_outcomes(profile, q)
    witness = None
    for agent, x, value in _contour_diffs(profile, p, q, weak=True):
        if value < 0:
            return DominanceVerdict(INCOMPARABLE)
        if value > 0 and witness is None:
            witness = (agent, x)
    if witness is None:
        return DominanceVerdict(WEAKLY_DOMINATES_EQUAL)
    return DominanceVerdict(STRICTLY_DOMINATES, strict_witness=witness)


# ---------------------------------------------------------------------------
# Witness sequences


@dataclass(frozen=True)
class WitnessSequences:
    """Equal-length outcome multisets certifying a failed support.

    Built from an integral improvement direction: positive entries feed
    ``a_seq`` (repeated by their value), negative entries feed ``b_seq``.
    For every agent and Pareto-optimal outcome, at least as many a-terms
    as b-terms lie strictly above it, strictly more for some pair.
    """

    a_seq: tuple[Outcome, ...]
    b_seq: tuple[Outcome, ...]

    @property
    def length(self) -> int:
        return len(self.a_seq)

    def to_json_dict(self) -> dict:
        return {"a_seq": list(self.a_seq), "b_seq": list(self.b_seq)}


def witness_sequences(
    profile: PreferenceProfile, alpha: Mapping[Outcome, int]
) -> WitnessSequences:
    """Expand an integral direction over the Pareto set into sequences.

    ``alpha`` must be integral with zero sum, supported on Pareto-optimal
    outcomes, and must satisfy every strict-upper-contour inequality with
    at least one strict; those preconditions are re-checked here.
    """
    star = pareto_set(profile)
    star_set = set(star)
    for x, v in alpha.items():
        if not isinstance(v, int):
            raise InputError(f"alpha entry for {x!r} is not integral")
        if v != 0 and x not in star_set:
            raise InputError(f"alpha is supported outside the Pareto set at {x!r}")
    if sum(alpha.values()) != 0:
        raise InputError("alpha entries must sum to zero")
    if all(v == 0 for v in alpha.values()):
        raise InputError("alpha is trivial")

    strict_seen = False
    for _, order in profile.agents:
        cumulative = 0
        for cls in order.classes:
            for x in cls:
                if x in star_set and cumulative < 0:
                    raise InputError("alpha violates an upper-contour inequality")
                if x in star_set and cumulative > 0:
                    strict_seen = True
            cumulative += sum(alpha.get(x, 0) for x in cls)
    if not strict_seen:
        raise InputError("alpha satisfies no inequality strictly")

    a_seq = []
    b_seq = []
    for x in star:
        v = alpha.get(x, 0)
        if v > 0:
            a_seq.extend([x] * v)
        elif v < 0:
            b_seq.extend([x] * (-v))
    limit = lp.hadamard_bound(1, len(star), len(star))
    repetitions = max(abs(v) for v in alpha.values())
    if repetitions > limit:
        raise EffixError("internal error: witness repetitions exceed the bound")
    return WitnessSequences(a_seq=tuple(a_seq), b_seq=tuple(b_seq))


# ---------------------------------------------------------------------------
# Efficiency certificates


@dataclass(frozen=True)
class EfficiencyCertificate:
    """Two-sided certificate for a lottery's ex-ante efficiency.

    ``efficient`` carries a utilitarian representation under which the
    certified support lies in the welfare argmax (computed lazily, it is
    reproducible for a given profile and support).  ``dominated`` carries
    the integral direction ``alpha`` and the strictly dominating lottery
    built from it.
    """

    kind: str
    profile: PreferenceProfile = field(repr=False)
    support: tuple[Outcome, ...]
    alpha: tuple[tuple[Outcome, int], ...] | None = None
    dominating: Lottery | None = None

    @cached_property
    def utilities(self) -> UtilityProfile | None:
        if self.kind != EFFICIENT:
            return None
        return utilitarian_certificate(
            self.profile, Lottery.uniform(self.support)
        )

    def alpha_dict(self) -> dict[Outcome, int]:
        return dict(self.alpha) if self.alpha is not None else {}

    def to_json_dict(self) -> dict:
        if self.kind == EFFICIENT:
            return {"kind": EFFICIENT, "utilities": self.utilities.to_json_dict()}
        return {
            "kind": DOMINATED,
            "alpha": {x: v for x, v in self.alpha},
            "dominating": lottery_json_dict(self.dominating),
        }


def _upper_contour_rows(profile, star):
    """Strict-upper-contour indicator rows over the Pareto set, one per
    (agent, outcome) pair in (agent order, outcome file order).  The row
    order fixes which strict row a dominated certificate reports."""
    rows = []
    for _, order in profile.agents:
        rank = {x: order.rank(x) for x in star}
        for x in star:
            rows.append(tuple(1 if rank[y] < rank[x] else 0 for y in star))
    return rows


def _dominating_from_alpha(p: Lottery, alpha: Mapping[Outcome, int]) -> Lottery:
    """Largest-step improvement ``q = p + eps * alpha``.

    ``eps`` is maximal subject to q staying a lottery: the minimum of
    ``p_x / |alpha_x|`` over negative entries.
    """
    eps = min(
        Fraction(p.weight(x), -v) for x, v in alpha.items() if v < 0
    )
    if eps <= 0:
        raise EffixError("internal error: alpha removes mass the lottery lacks")
    weights = {x: p.weight(x) for x in p.support()}
    for x, v in alpha.items():
        if v:
            weights[x] = weights.get(x, Fraction(0)) + eps * v
    return Lottery.from_weights(weights)


def _mass_shift_alpha(profile, support):
    """Direction moving all mass off the first non-Pareto support outcome
    onto an outcome that Pareto-dominates it."""
    star = set(pareto_set(profile))
    ranks = [
        {x: order.rank(x) for x in profile.outcomes} for _, order in profile.agents
    ]
    for s in profile.sorted_by_file_order(support):
        if s in star:
            continue
        for y in profile.outcomes:
            if y == s:
                continue
            if all(r[y] <= r[s] for r in ranks) and any(r[y] < r[s] for r in ranks):
                return {y: 1, s: -1}
    raise EffixError("internal error: no dominated outcome in support")


@lru_cache(maxsize=8192)
def _support_decision(
    profile: PreferenceProfile, support: frozenset[Outcome]
) -> EfficiencyCertificate:
    star = pareto_set(profile)
    ordered_support = profile.sorted_by_file_order(support)

    if not support <= set(star):
        alpha = _mass_shift_alpha(profile, support)
        uniform = Lottery.uniform(ordered_support)
        dominating = _dominating_from_alpha(uniform, alpha)
        cert = EfficiencyCertificate(
            kind=DOMINATED,
            profile=profile,
            support=ordered_support,
            alpha=tuple(sorted(alpha.items(), key=lambda kv: profile.outcome_index(kv[0]))),
            dominating=dominating,
        )
    else:
        rows = _upper_contour_rows(profile, star)
        index = {x: j for j, x in enumerate(star)}
        free = [index[x] for x in ordered_support]
        nonneg = [j for j in range(len(star)) if star[j] not in support]
        alpha_frac = lp.nontrivial_homogeneous(rows, free, nonneg, zero_sum=True)
        if alpha_frac is None:
            return EfficiencyCertificate(
                kind=EFFICIENT, profile=profile, support=ordered_support
            )
        negated = [[-c for c in row] for row in rows]
        for j in nonneg:
            unit = [0] * len(star)
            unit[j] = -1
            negated.append(unit)
        negated.append([1] * len(star))
        negated.append([-1] * len(star))
        witness = lp.integralize(negated, alpha_frac)
        alpha = {star[j]: witness.x[j] for j in range(len(star)) if witness.x[j]}
        uniform = Lottery.uniform(ordered_support)
        dominating = _dominating_from_alpha(uniform, alpha)
        cert = EfficiencyCertificate(
            kind=DOMINATED,
            profile=profile,
            support=ordered_support,
            alpha=tuple(sorted(alpha.items(), key=lambda kv: profile.outcome_index(kv[0]))),
            dominating=dominating,
        )

    verdict = sd_compare(profile, cert.dominating, Lottery.uniform(ordered_support))
    if verdict.relation != STRICTLY_DOMINATES:
        raise EffixError("internal error: dominating lottery failed verification")
    return cert


def support_efficient(profile: PreferenceProfile, support) -> EfficiencyCertificate:
    """Does this outcome set support an ex-ante efficient lottery?

    Supports reaching outside the Pareto set are immediately dominated by
    a mass shift.  Otherwise the homogeneous improvement system (free on
    the support, nonnegative elsewhere on the Pareto set, zero sum, all
    upper-contour sums nonnegative, one strict) decides: no solution
    certifies the support efficient, a solution is integralized into the
    dominated certificate.
    """
    support = frozenset(support)
    if not support:
        raise InputError("empty support")
    universe = set(profile.outcomes)
    for x in support:
        if x not in universe:
            raise InputError(f"unknown outcome {x!r}")
    return _support_decision(profile, support)


def is_ex_ante_efficient(profile: PreferenceProfile, p: Lottery) -> EfficiencyCertificate:
    """Certificate for a lottery; by support closure this only depends on
    the support, but the dominated case rebuilds the dominating lottery
    around ``p`` itself."""
    check_lottery_outcomes(profile, p)
    cert = support_efficient(profile, p.support())
    if cert.kind == EFFICIENT:
        return cert
    alpha = cert.alpha_dict()
    dominating = _dominating_from_alpha(p, alpha)
    verdict = sd_compare(profile, dominating, p)
    if verdict.relation != STRICTLY_DOMINATES:
        raise EffixError("internal error: dominating lottery failed verification")
    return EfficiencyCertificate(
        kind=DOMINATED,
        profile=profile,
        support=cert.support,
        alpha=cert.alpha,
        dominating=dominating,
    )


# ---------------------------------------------------------------------------
# Utilitarian representations


def utilitarian_certificate(profile: PreferenceProfile, p: Lottery) -> UtilityProfile:
    """Solve for a utilitarian representation with unit strict gaps, zero
    welfare on the support of ``p`` and nonpositive welfare elsewhere.

    Feasible exactly when ``p`` is ex-ante efficient; otherwise raises
    :class:`InfeasibleRepresentationError` carrying the Farkas certificate.
    """
    check_lottery_outcomes(profile, p)
    support = set(p.support())

    # one variable per (agent, indifference class)
    var_of = {}
    for agent, order in profile.agents:
        for k in range(len(order.classes)):
            var_of[(agent, k)] = len(var_of)
    num_vars = len(var_of)

    ineq = []
    for agent, order in profile.agents:
        for k in range(len(order.classes) - 1):
            row = [0] * num_vars
            row[var_of[(agent, k)]] = 1
            row[var_of[(agent, k + 1)]] = -1
            ineq.append((row, 1))
    eq = []
    for x in profile.outcomes:
        row = [0] * num_vars
        for agent, order in profile.agents:
            row[var_of[(agent, order.rank(x))]] += 1
        if x in support:
            eq.append((row, 0))
        else:
            ineq.append(([-v for v in row], 0))

    result = lp.solve_feasibility(lp.LinearSystem(num_vars, tuple(ineq), tuple(eq)))
    if not result.feasible:
        raise InfeasibleRepresentationError(
            "no utilitarian representation: the lottery is not ex-ante efficient",
            farkas=(result.farkas_ineq, result.farkas_eq),
        )

    values = tuple(
        tuple(
            result.solution[var_of[(agent, order.rank(x))]]
            for x in profile.outcomes
        )
        for agent, order in profile.agents
    )
    utilities = UtilityProfile(
        agents=profile.agent_ids, outcomes=profile.outcomes, values=values
    )
    if not utilities.represents(profile):
        raise EffixError("internal error: representation property failed")
    top = set(utilities.max_welfare_outcomes())
    if not support <= top:
        raise EffixError("internal error: support is not welfare-maximal")
    return utilities


# ---------------------------------------------------------------------------
# Outcome deduplication and the profile-level decision


def dedup_equivalent_outcomes(profile: PreferenceProfile):
    """Merge outcomes that share the indifference class of every agent.

    Returns the reduced profile and a map from every original label to
    its representative (the first equivalent outcome in file order).
    """
    signature = {}
    for x in profile.outcomes:
        signature[x] = tuple(order.rank(x) for _, order in profile.agents)
    representative = {}
    first_with = {}
    for x in profile.outcomes:
        sig = signature[x]
        if sig not in first_with:
            first_with[sig] = x
        representative[x] = first_with[sig]

    kept = tuple(x for x in profile.outcomes if representative[x] == x)
    if kept == profile.outcomes:
        return profile, representative
    agents = tuple(
        (
            agent,
            WeakOrder(
                tuple(
                    frozenset(x for x in cls if representative[x] == x)
                    for cls in order.classes
                )
            ),
        )
        for agent, order in profile.agents
    )
    reduced = PreferenceProfile(outcomes=kept, agents=agents)
    return reduced, representative


@dataclass(frozen=True)
class EquivalenceDecision:
    """Do the ex-ante and ex-post efficient lotteries coincide?

    When they do, ``utilities`` is a representation giving every
    Pareto-optimal outcome the same welfare (and no more elsewhere).
    When they do not, ``alpha``/``witness``/``dominating`` certify that
    the uniform lottery over the Pareto set is dominated.
    """

    coincide: bool
    profile: PreferenceProfile = field(repr=False)
    pareto: tuple[Outcome, ...]
    alpha: tuple[tuple[Outcome, int], ...] | None = None
    witness: WitnessSequences | None = None
    dominating: Lottery | None = None

    @cached_property
    def utilities(self) -> UtilityProfile | None:
        if not self.coincide:
            return None
        utilities = utilitarian_certificate(
            self.profile, Lottery.uniform(self.pareto)
        )
        welfare = {x: utilities.welfare(x) for x in self.profile.outcomes}
        star = set(self.pareto)
        values = {welfare[x] for x in star}
        if len(values) != 1:
            raise EffixError("internal error: welfare is not constant on the Pareto set")
        (value,) = values
        if any(welfare[x] > value for x in self.profile.outcomes if x not in star):
            raise EffixError("internal error: welfare exceeds the Pareto level")
        return utilities

    def alpha_dict(self) -> dict[Outcome, int]:
        return dict(self.alpha) if self.alpha is not None else {}


def equivalence(profile: PreferenceProfile) -> EquivalenceDecision:
    """Decide whether every ex-post efficient lottery is ex-ante efficient.

    Equivalent outcomes are merged first and the certificate is mapped
    back through the merge; the decision itself is whether the uniform
    lottery over the Pareto set is ex-ante efficient, which by support
    closure settles all of them at once.
    """
    reduced, merge = dedup_equivalent_outcomes(profile)
    star_reduced = pareto_set(reduced)
    cert = support_efficient(reduced, star_reduced)
    star = pareto_set(profile)

    if cert.kind == EFFICIENT:
        return EquivalenceDecision(coincide=True, profile=profile, pareto=star)

    reduced_alpha = cert.alpha_dict()
    alpha = {x: reduced_alpha.get(x, 0) for x in star}
    alpha = {x: v for x, v in alpha.items() if v}
    witness = witness_sequences(profile, alpha)
    dominating = _dominating_from_alpha(Lottery.uniform(star), alpha)
    verdict = sd_compare(profile, dominating, Lottery.uniform(star))
    if verdict.relation != STRICTLY_DOMINATES:
        raise EffixError("internal error: dominating lottery failed verification")
    return EquivalenceDecision(
        coincide=False,
        profile=profile,
        pareto=star,
        alpha=tuple(sorted(alpha.items(), key=lambda kv: profile.outcome_index(kv[0]))),
        witness=witness,
        dominating=dominating,
    )
