"""Core data model: outcomes, weak orders, preference profiles, lotteries
and utility profiles, plus the JSON wire formats used by every command.

All numeric data is exact: probabilities and utilities are
:class:`fractions.Fraction` values, never floats.  Every type in this
module is immutable after construction and safe to share between tasks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InputError

Outcome = str
AgentId = str


def parse_rational(text: str) -> Fraction:
    """Parse a rational literal of the form ``"num/den"`` or an integer string."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputError(f"rational literal must be a string, got {text!r}")
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational literal {text!r}") from exc
    return value


def format_rational(value: Fraction) -> str:
    """Inverse of :func:`parse_rational`; integers render without a denominator."""
    return str(value)


@dataclass(frozen=True)
class WeakOrder:
    """A complete transitive preference given as ordered indifference classes.

    ``classes[0]`` is the best class.  The classes must partition the
    profile's outcome set; that is validated at profile construction.
    """

    classes: tuple[frozenset[Outcome], ...]

    def __post_init__(self):
        for cls in self.classes:
            if not cls:
                raise InputError("empty indifference class")

    @property
    def is_strict(self) -> bool:
        return all(len(cls) == 1 for cls in self.classes)

    @property
    def is_dichotomous(self) -> bool:
        return len(self.classes) <= 2

    def rank(self, x: Outcome) -> int:
        """Index of the class containing ``x`` (0 = best)."""
        for i, cls in enumerate(self.classes):
            if x in cls:
                return i
        raise InputError(f"unknown outcome {x!r}")

    def prefers(self, x: Outcome, y: Outcome) -> bool:
        """True iff ``x`` is strictly preferred to ``y``."""
        return self.rank(x) < self.rank(y)

    def reversed_order(self) -> "WeakOrder":
        return WeakOrder(tuple(reversed(self.classes)))


@dataclass(frozen=True)
class PreferenceProfile:
    """A finite outcome set plus one weak order per agent.

    Outcome and agent order are exactly the file order; all iteration in
    the library follows it, which makes every derived report deterministic.
    """

    outcomes: tuple[Outcome, ...]
    agents: tuple[tuple[AgentId, WeakOrder], ...]

    def __post_init__(self):
        if not self.outcomes:
            raise InputError("profile needs at least one outcome")
        if not self.agents:
            raise InputError("profile needs at least one agent")
        seen = set()
        for x in self.outcomes:
            if not x or not isinstance(x, str):
                raise InputError(f"bad outcome label {x!r}")
            if x in seen:
                raise InputError(f"duplicate outcome label {x!r}")
            seen.add(x)
        ids = set()
        universe = frozenset(self.outcomes)
        for agent_id, order in self.agents:
            if not agent_id or not isinstance(agent_id, str):
                raise InputError(f"bad agent id {agent_id!r}")
            if agent_id in ids:
                raise InputError(f"duplicate agent id {agent_id!r}")
            ids.add(agent_id)
            covered: set[Outcome] = set()
            total = 0
            for cls in order.classes:
                covered.update(cls)
                total += len(cls)
            if covered != universe or total != len(self.outcomes):
                raise InputError(
                    f"ranking of agent {agent_id!r} is not a partition of the outcomes"
                )

    # -- lookups ---------------------------------------------------------

    @property
    def agent_ids(self) -> tuple[AgentId, ...]:
        return tuple(a for a, _ in self.agents)

    def order_of(self, agent: AgentId) -> WeakOrder:
        for a, order in self.agents:
            if a == agent:
                return order
        raise InputError(f"unknown agent {agent!r}")

    def outcome_index(self, x: Outcome) -> int:
        try:
            return self.outcomes.index(x)
        except ValueError:
            raise InputError(f"unknown outcome {x!r}") from None

    @property
    def is_strict(self) -> bool:
        return all(order.is_strict for _, order in self.agents)

    @property
    def is_dichotomous(self) -> bool:
        return all(order.is_dichotomous for _, order in self.agents)

    def sorted_by_file_order(self, xs: Iterable[Outcome]) -> tuple[Outcome, ...]:
        """Stable canonical ordering of an outcome subset."""
        member = set(xs)
        return tuple(x for x in self.outcomes if x in member)


def strict_upper_contour(
    profile: PreferenceProfile, agent: AgentId, x: Outcome
) -> frozenset[Outcome]:
    """Outcomes strictly preferred to ``x`` by ``agent``.

    Returns the union of the indifference classes above the class of ``x``.
    """
    order = profile.order_of(agent)
    if x not in frozenset(profile.outcomes):
        raise InputError(f"unknown outcome {x!r}")
    r = order.rank(x)
    out: set[Outcome] = set()
    for cls in order.classes[:r]:
        out.update(cls)
    return frozenset(out)


def reverse_profile(profile: PreferenceProfile) -> PreferenceProfile:
    """Reverse every agent's ranking; outcome and agent order are kept."""
    return PreferenceProfile(
        outcomes=profile.outcomes,
        agents=tuple((a, order.reversed_order()) for a, order in profile.agents),
    )


# ---------------------------------------------------------------------------
# Lotteries


@dataclass(frozen=True)
class Lottery:
    """An exact probability distribution over outcome labels.

    Zero-weight entries are dropped at construction, so ``support()`` is
    simply the stored key order.  Weights must sum to exactly one.
    """

    entries: tuple[tuple[Outcome, Fraction], ...]
    _index: Mapping[Outcome, Fraction] = field(
        default=None, compare=False, repr=False, hash=False
    )

    def __post_init__(self):
        total = Fraction(0)
        seen = set()
        kept = []
        for x, w in self.entries:
            if x in seen:
                raise InputError(f"duplicate lottery entry {x!r}")
            seen.add(x)
            if w < 0:
                raise InputError(f"negative weight for {x!r}")
            total += w
            if w > 0:
                kept.append((x, w))
        if total != 1:
            raise InputError(f"lottery weights sum to {total}, expected 1")
        object.__setattr__(self, "entries", tuple(kept))
        object.__setattr__(self, "_index", dict(kept))

    @staticmethod
    def from_weights(weights: Mapping[Outcome, Fraction] | Iterable[tuple[Outcome, Fraction]]) -> "Lottery":
        if isinstance(weights, Mapping):
            return Lottery(tuple(weights.items()))
        return Lottery(tuple(weights))

    @staticmethod
    def uniform(outcomes: Sequence[Outcome]) -> "Lottery":
        n = len(outcomes)
        if n == 0:
            raise InputError("uniform lottery over empty set")
        return Lottery(tuple((x, Fraction(1, n)) for x in outcomes))

    @staticmethod
    def point_mass(x: Outcome) -> "Lottery":
        return Lottery(((x, Fraction(1)),))

    def weight(self, x: Outcome) -> Fraction:
        return self._index.get(x, Fraction(0))

    def support(self) -> tuple[Outcome, ...]:
        return tuple(x for x, _ in self.entries)

    def restricted_to(self, outcomes: Iterable[Outcome]) -> bool:
        """True iff the support is contained in ``outcomes``."""
        allowed = set(outcomes)
        return all(x in allowed for x, _ in self.entries)


# ---------------------------------------------------------------------------
# Utility profiles


@dataclass(frozen=True)
class UtilityProfile:
    """One exact utility function per agent; the certificate object for
    welfare-maximization representations of efficient lotteries."""

    agents: tuple[AgentId, ...]
    outcomes: tuple[Outcome, ...]
    values: tuple[tuple[Fraction, ...], ...]  # agent-major, outcome order

    def utility(self, agent: AgentId, x: Outcome) -> Fraction:
        return self.values[self.agents.index(agent)][self.outcomes.index(x)]

    def welfare(self, x: Outcome) -> Fraction:
        j = self.outcomes.index(x)
        return sum((row[j] for row in self.values), Fraction(0))

    def max_welfare_outcomes(self) -> tuple[Outcome, ...]:
        welfares = [self.welfare(x) for x in self.outcomes]
        top = max(welfares)
        return tuple(x for x, w in zip(self.outcomes, welfares) if w == top)

    def represents(self, profile: PreferenceProfile) -> bool:
        """Exhaustive pairwise check of the representation property:
        u_i(x) >= u_i(y) iff agent i weakly prefers x to y."""
        if self.agents != profile.agent_ids or self.outcomes != profile.outcomes:
            return False
        for k, (agent, order) in enumerate(profile.agents):
            row = self.values[k]
            for i, x in enumerate(self.outcomes):
                for j, y in enumerate(self.outcomes):
                    if (row[i] >= row[j]) != (order.rank(x) <= order.rank(y)):
                        return False
        return True

    def to_json_dict(self) -> dict:
        return {
            agent: {
                x: format_rational(self.values[k][j])
                for j, x in enumerate(self.outcomes)
            }
            for k, agent in enumerate(self.agents)
        }


# ---------------------------------------------------------------------------
# Wire formats


def _expand_approvals(outcomes: Sequence[Outcome], approvals: Sequence[Outcome]) -> WeakOrder:
    approved = []
    seen = set()
    universe = set(outcomes)
    for x in approvals:
        if x not in universe:
            raise InputError(f"approval of unknown outcome {x!r}")
        if x in seen:
            raise InputError(f"duplicate approval {x!r}")
        seen.add(x)
        approved.append(x)
    rest = [x for x in outcomes if x not in seen]
    if not approved or not rest:
        return WeakOrder((frozenset(outcomes),))
    return WeakOrder((frozenset(approved), frozenset(rest)))


def parse_profile(text: str) -> PreferenceProfile:
    """Parse the JSON profile document.

    Agents carry either an explicit ``ranking`` (ordered indifference
    classes) or an ``approvals`` shorthand which expands to a two-class
    weak order (approved class first; one class if all or none approved).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("profile document must be a JSON object")
    outcomes = doc.get("outcomes")
    agents_doc = doc.get("agents")
    if not isinstance(outcomes, list) or not isinstance(agents_doc, list):
        raise InputError('profile document needs "outcomes" and "agents" lists')
    agents = []
    for entry in agents_doc:
        if not isinstance(entry, dict) or "id" not in entry:
            raise InputError(f"bad agent entry {entry!r}")
        agent_id = entry["id"]
        if "ranking" in entry and "approvals" in entry:
            raise InputError(f'agent {agent_id!r} has both "ranking" and "approvals"')
        if "ranking" in entry:
            ranking = entry["ranking"]
            if not isinstance(ranking, list) or not all(
                isinstance(cls, list) for cls in ranking
            ):
                raise InputError(f"bad ranking for agent {agent_id!r}")
            order = WeakOrder(tuple(frozenset(cls) for cls in ranking))
            # frozenset silently drops duplicates inside a class; catch that.
            flat = [x for cls in ranking for x in cls]
            if len(flat) != len(set(flat)):
                raise InputError(
                    f"ranking of agent {agent_id!r} is not a partition of the outcomes"
                )
        elif "approvals" in entry:
            if not isinstance(entry["approvals"], list):
                raise InputError(f"bad approvals for agent {agent_id!r}")
            order = _expand_approvals(tuple(outcomes), entry["approvals"])
        else:
            raise InputError(f'agent {agent_id!r} needs "ranking" or "approvals"')
        agents.append((agent_id, order))
    return PreferenceProfile(outcomes=tuple(outcomes), agents=tuple(agents))


def serialize_profile(profile: PreferenceProfile) -> str:
    """Canonical document for a profile; ``parse_profile`` round-trips it
    exactly (outcome order, agent order, class structure)."""
    doc = {
        "outcomes": list(profile.outcomes),
        "agents": [
            {
                "id": agent_id,
                "ranking": [
                    list(profile.sorted_by_file_order(cls)) for cls in order.classes
                ],
            }
            for agent_id, order in profile.agents
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def parse_lottery(text: str) -> Lottery:
    """Parse the JSON lottery document ``{"weights": {...}}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("weights"), dict):
        raise InputError('lottery document needs a "weights" object')
    entries = tuple((x, parse_rational(w)) for x, w in doc["weights"].items())
    return Lottery(entries)


def serialize_lottery(lottery: Lottery) -> str:
    doc = {"weights": {x: format_rational(w) for x, w in lottery.entries}}
    return json.dumps(doc, indent=2) + "\n"


def lottery_json_dict(lottery: Lottery) -> dict:
    return {"weights": {x: format_rational(w) for x, w in lottery.entries}}


def check_lottery_outcomes(profile: PreferenceProfile, lottery: Lottery) -> None:
    """Raise if the lottery names outcomes outside the profile."""
    universe = set(profile.outcomes)
    for x, _ in lottery.entries:
        if x not in universe:
            raise InputError(f"lottery outcome {x!r} is not in the profile")
