"""Preference-domain specific machinery: dichotomous profiles and their
positive-weight certificates, single-peaked verification and generation,
and ballot-counting profiles with retraction and splitting.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from . import lp
from .efficiency import equivalence
from .errors import EffixError, InputError
from .model import (
    AgentId,
    Outcome,
    PreferenceProfile,
    WeakOrder,
)

# ---------------------------------------------------------------------------
# Dichotomous profiles


@dataclass(frozen=True)
class DichotomousView:
    """0/1 acceptability matrix of a dichotomous profile.

    ``matrix[i][j]`` is 1 when agent ``agents[i]`` finds ``outcomes[j]``
    acceptable.  Agents with a single indifference class are encoded as
    all-ones rows.
    """

    agents: tuple[AgentId, ...]
    outcomes: tuple[Outcome, ...]
    matrix: tuple[tuple[int, ...], ...]

    def column(self, x: Outcome) -> tuple[int, ...]:
        j = self.outcomes.index(x)
        return tuple(row[j] for row in self.matrix)


@dataclass(frozen=True)
class LambdaCertificate:
    """Strictly positive agent weights under which every Pareto-optimal
    outcome is acceptable to the same total weight."""

    weights: tuple[tuple[AgentId, Fraction], ...]
    constant: Fraction

    def weight_of(self, agent: AgentId) -> Fraction:
        return dict(self.weights)[agent]

    def to_json_dict(self) -> dict:
        return {
            "lambda": {a: str(w) for a, w in self.weights},
            "constant": str(self.constant),
        }


def as_dichotomous(profile: PreferenceProfile) -> DichotomousView | None:
    """Matrix view when every agent has at most two indifference classes."""
    if not profile.is_dichotomous:
        return None
    rows = []
    for _, order in profile.agents:
        if len(order.classes) == 1:
            rows.append((1,) * len(profile.outcomes))
        else:
            top = order.classes[0]
            rows.append(tuple(1 if x in top else 0 for x in profile.outcomes))
    return DichotomousView(
        agents=profile.agent_ids, outcomes=profile.outcomes, matrix=tuple(rows)
    )


def _pareto_columns(view: DichotomousView) -> tuple[int, ...]:
    """Indices of Pareto-optimal outcomes: columns not strictly contained
    in another column's acceptability set."""
    cols = [view.column(x) for x in view.outcomes]
    out = []
    for j, col in enumerate(cols):
        dominated = any(
            k != j
            and all(a <= b for a, b in zip(col, other))
            and col != other
            for k, other in enumerate(cols)
        )
        if not dominated:
            out.append(j)
    return tuple(out)


def dichotomous_lambda(view: DichotomousView) -> LambdaCertificate | None:
    """Search for per-agent weights, all at least one, giving every
    Pareto-optimal column the same weighted approval total.

    Existence is scale-invariant, so requiring weights >= 1 loses nothing
    over strict positivity.  Returns ``None`` when the system is
    infeasible.
    """
    n = len(view.agents)
    num_vars = n + 1  # weights plus the common total
    ineq = []
    for i in range(n):
        row = [0] * num_vars
        row[i] = 1
        ineq.append((row, 1))
    eq = []
    for j in _pareto_columns(view):
        row = [view.matrix[i][j] for i in range(n)]
        row.append(-1)
        eq.append((row, 0))
    result = lp.solve_feasibility(lp.LinearSystem(num_vars, tuple(ineq), tuple(eq)))
    if not result.feasible:
        return None
    weights = tuple(
        (agent, result.solution[i]) for i, agent in enumerate(view.agents)
    )
    return LambdaCertificate(weights=weights, constant=result.solution[n])


def sperner_bound(n: int) -> int:
    """Largest antichain in the subset lattice of ``n`` agents; bounds the
    number of non-equivalent Pareto-optimal outcomes of any dichotomous
    profile."""
    if n < 1:
        raise InputError("agent count must be positive")
    return comb(n, n // 2)


# ---------------------------------------------------------------------------
# Single-peaked profiles


def _axis_positions(profile: PreferenceProfile, axis: Sequence[Outcome]) -> list[Outcome]:
    if sorted(axis) != sorted(profile.outcomes):
        raise InputError("axis is not a permutation of the profile's outcomes")
    return list(axis)


def is_single_peaked(profile: PreferenceProfile, axis: Sequence[Outcome]) -> bool:
    """Check the strict flank condition against a given axis.

    An agent passes when some peak exists such that preference strictly
    decreases step by step moving away from it along the axis, on each
    side separately (no constraint relates outcomes across sides).
    """
    ordered = _axis_positions(profile, axis)
    m = len(ordered)
    for _, order in profile.agents:
        ranks = [order.rank(x) for x in ordered]
        ok = False
        for peak in range(m):
            left = all(ranks[j] > ranks[j + 1] for j in range(0, peak))
            right = all(ranks[j] < ranks[j + 1] for j in range(peak, m - 1))
            if left and right:
                ok = True
                break
        if not ok:
            return False
    return True


def generate_single_peaked(
    axis: Sequence[Outcome], n_agents: int, seed: int
) -> PreferenceProfile:
    """Random single-peaked profile over the given axis.

    Each agent draws a peak and then a uniform random interleaving of the
    two flanks; any interleaving keeps each flank's internal order, which
    is exactly the single-peakedness condition.  Deterministic per seed.
    """
    axis = tuple(axis)
    if not axis:
        raise InputError("axis must be non-empty")
    if n_agents < 1:
        raise InputError("need at least one agent")
    rng = random.Random(seed)
    agents = []
    m = len(axis)
    for i in range(n_agents):
        peak = rng.randrange(m)
        left = peak - 1
        right = peak + 1
        ranking = [axis[peak]]
        while left >= 0 or right < m:
            if left < 0:
                take_right = True
            elif right >= m:
                take_right = False
            else:
                take_right = bool(rng.getrandbits(1))
            if take_right:
                ranking.append(axis[right])
                right += 1
            else:
                ranking.append(axis[left])
                left -= 1
        order = WeakOrder(tuple(frozenset((x,)) for x in ranking))
        agents.append((str(i + 1), order))
    return PreferenceProfile(outcomes=axis, agents=tuple(agents))


# ---------------------------------------------------------------------------
# Ballot-counting profiles


@dataclass(frozen=True)
class Envelope:
    label: str
    side: str  # "A" or "B"
    slips: int

    def __post_init__(self):
        if self.side not in ("A", "B"):
            raise InputError(f"envelope side must be 'A' or 'B', got {self.side!r}")
        if self.slips < 1:
            raise InputError("envelopes carry at least one slip")


@dataclass(frozen=True)
class BallotSpec:
    """Envelopes with signed slip counts plus one count permutation per agent."""

    envelopes: tuple[Envelope, ...]
    permutations: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        labels = [e.label for e in self.envelopes]
        if len(set(labels)) != len(labels):
            raise InputError("duplicate envelope label")
        if not self.envelopes:
            raise InputError("ballot spec needs at least one envelope")
        if not self.permutations:
            raise InputError("ballot spec needs at least one permutation")
        label_set = sorted(labels)
        for k, perm in enumerate(self.permutations):
            if sorted(perm) != label_set:
                raise InputError(
                    f"permutation {k} is not a permutation of the envelope labels"
                )

    def envelope_of(self, label: str) -> Envelope:
        for e in self.envelopes:
            if e.label == label:
                return e
        raise InputError(f"unknown envelope {label!r}")


@dataclass(frozen=True)
class BallotCheck:
    """Validity verdict with the first violation in scan order."""

    ok: bool
    reason: str | None = None  # "slip-balance" | "prefix" | "pair"
    permutation: int | None = None
    prefix: int | None = None
    pair: tuple[str, str] | None = None

    def describe(self) -> str:
        if self.ok:
            return "valid"
        if self.reason == "slip-balance":
            return "slip counts for the two candidates differ"
        if self.reason == "prefix":
            return (
                f"count condition fails in permutation {self.permutation} "
                f"at prefix length {self.prefix}"
            )
        return f"envelopes {self.pair[0]} and {self.pair[1]} are never reordered"


def verify_ballot(spec: BallotSpec) -> BallotCheck:
    """Check slip balance, the prefix count condition, and that every
    envelope pair appears in both relative orders.

    Violations are reported deterministically: balance first, then
    permutations in order scanned by prefix length, then pairs in
    envelope order.
    """
    total_a = sum(e.slips for e in spec.envelopes if e.side == "A")
    total_b = sum(e.slips for e in spec.envelopes if e.side == "B")
    if total_a != total_b:
        return BallotCheck(ok=False, reason="slip-balance")

    signed = {
        e.label: e.slips if e.side == "A" else -e.slips for e in spec.envelopes
    }
    for k, perm in enumerate(spec.permutations):
        running = 0
        for i, label in enumerate(perm):
            running += signed[label]
            if running < 0:
                return BallotCheck(
                    ok=False, reason="prefix", permutation=k, prefix=i + 1
                )

    position = [
        {label: perm.index(label) for label in perm} for perm in spec.permutations
    ]
    labels = [e.label for e in spec.envelopes]
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            x, y = labels[i], labels[j]
            before = any(pos[x] < pos[y] for pos in position)
            after = any(pos[x] > pos[y] for pos in position)
            if not (before and after):
                return BallotCheck(ok=False, reason="pair", pair=(x, y))
    return BallotCheck(ok=True)


def ballot_to_profile(spec: BallotSpec) -> PreferenceProfile:
    """Strict profile with one agent per permutation, ranking = that order."""
    check = verify_ballot(spec)
    if not check.ok:
        raise InputError(f"invalid ballot spec: {check.describe()}")
    outcomes = tuple(e.label for e in spec.envelopes)
    agents = tuple(
        (
            str(k + 1),
            WeakOrder(tuple(frozenset((label,)) for label in perm)),
        )
        for k, perm in enumerate(spec.permutations)
    )
    return PreferenceProfile(outcomes=outcomes, agents=agents)


def extract_ballot_witness(profile: PreferenceProfile) -> BallotSpec | None:
    """Convert a failed equivalence decision into a ballot spec.

    Positive entries of the integral direction become A envelopes with
    their value as slip count, negative entries B envelopes; each agent's
    ranking restricted to those outcomes becomes a permutation.  Returns
    ``None`` when ex-ante and ex-post efficiency coincide.
    """
    if not profile.is_strict:
        raise InputError("ballot witnesses require strict preferences")
    decision = equivalence(profile)
    if decision.coincide:
        return None
    alpha = decision.alpha_dict()
    support = set(alpha)
    envelopes = tuple(
        Envelope(label=x, side="A" if alpha[x] > 0 else "B", slips=abs(alpha[x]))
        for x in profile.outcomes
        if x in support
    )
    permutations = []
    for _, order in profile.agents:
        ranking = [
            next(iter(cls)) for cls in order.classes
        ]  # strict: singleton classes
        permutations.append(tuple(x for x in ranking if x in support))
    spec = BallotSpec(envelopes=envelopes, permutations=tuple(permutations))
    check = verify_ballot(spec)
    if not check.ok:
        raise EffixError(f"internal error: extracted spec invalid ({check.describe()})")
    return spec


def retract(
    profile: PreferenceProfile, block: Iterable[Outcome], new_label: str
) -> PreferenceProfile:
    """Collapse a block of outcomes, adjacent in every ranking, into one.

    A singleton block is a pure relabeling.  For larger blocks every
    indifference class must lie inside or outside the block, and the
    block's classes must be consecutive in each agent's ranking; the
    offending agent is named otherwise.
    """
    block = set(block)
    if not block:
        raise InputError("empty block")
    universe = set(profile.outcomes)
    for x in block:
        if x not in universe:
            raise InputError(f"unknown outcome {x!r}")
    if new_label in universe - block:
        raise InputError(f"label {new_label!r} already names another outcome")

    if len(block) == 1:
        old = next(iter(block))

        def rename(x):
            return new_label if x == old else x

        return PreferenceProfile(
            outcomes=tuple(rename(x) for x in profile.outcomes),
            agents=tuple(
                (
                    agent,
                    WeakOrder(
                        tuple(frozenset(rename(x) for x in cls) for cls in order.classes)
                    ),
                )
                for agent, order in profile.agents
            ),
        )

    new_agents = []
    for agent, order in profile.agents:
        flags = []
        for cls in order.classes:
            inside = cls & block
            if inside and inside != cls:
                raise InputError(
                    f"block straddles an indifference class of agent {agent!r}"
                )
            flags.append(bool(inside))
        first = flags.index(True)
        count = sum(flags)
        if not all(flags[first : first + count]):
            raise InputError(f"block is not adjacent for agent {agent!r}")
        new_classes = (
            order.classes[:first]
            + (frozenset((new_label,)),)
            + order.classes[first + count :]
        )
        new_agents.append((agent, WeakOrder(new_classes)))

    position = min(profile.outcome_index(x) for x in block)
    outcomes = []
    for i, x in enumerate(profile.outcomes):
        if x in block:
            if i == position:
                outcomes.append(new_label)
        else:
            outcomes.append(x)
    return PreferenceProfile(outcomes=tuple(outcomes), agents=tuple(new_agents))


def split_to_simple(spec: BallotSpec) -> BallotSpec:
    """Split every multi-slip envelope into consecutive one-slip envelopes.

    Children of one envelope are placed ascending in even permutations and
    descending in odd ones, so each pair occurs in both relative orders and
    the reordering condition survives the split; retracting each child
    group recovers the input's profile.
    """
    children: dict[str, list[str]] = {}
    new_envelopes = []
    for e in spec.envelopes:
        if e.slips == 1:
            children[e.label] = [e.label]
            new_envelopes.append(e)
        else:
            labels = [f"{e.label}:{i}" for i in range(1, e.slips + 1)]
            children[e.label] = labels
            new_envelopes.extend(Envelope(label=l, side=e.side, slips=1) for l in labels)
    new_perms = []
    for k, perm in enumerate(spec.permutations):
        expanded: list[str] = []
        for label in perm:
            run = children[label]
            expanded.extend(run if k % 2 == 0 else reversed(run))
        new_perms.append(tuple(expanded))
    out = BallotSpec(envelopes=tuple(new_envelopes), permutations=tuple(new_perms))
    check = verify_ballot(out)
    if not check.ok:
        raise EffixError(f"internal error: split spec invalid ({check.describe()})")
    return out


# ---------------------------------------------------------------------------
# Ballot spec wire format


def parse_ballot_spec(text: str) -> BallotSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("envelopes"), dict):
        raise InputError('ballot document needs an "envelopes" object')
    if not isinstance(doc.get("permutations"), list):
        raise InputError('ballot document needs a "permutations" list')
    envelopes = []
    for label, body in doc["envelopes"].items():
        if not isinstance(body, dict):
            raise InputError(f"bad envelope entry {label!r}")
        try:
            envelopes.append(
                Envelope(label=label, side=body["side"], slips=int(body["slips"]))
            )
        except KeyError as exc:
            raise InputError(f"envelope {label!r} lacks {exc}") from exc
    perms = tuple(tuple(p) for p in doc["permutations"])
    return BallotSpec(envelopes=tuple(envelopes), permutations=perms)


def serialize_ballot_spec(spec: BallotSpec) -> str:
    doc = ballot_spec_json_dict(spec)
    return json.dumps(doc, indent=2) + "\n"


def ballot_spec_json_dict(spec: BallotSpec) -> dict:
    return {
        "envelopes": {
            e.label: {"side": e.side, "slips": e.slips} for e in spec.envelopes
        },
        "permutations": [list(p) for p in spec.permutations],
    }
