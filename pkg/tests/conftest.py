import json

import pytest

from effix.domains import BallotSpec, Envelope
from effix.model import PreferenceProfile, WeakOrder, parse_profile


def strict_profile(outcomes, rankings, ids=None):
    """Build a strict profile from per-agent outcome orderings."""
    ids = ids or [str(i + 1) for i in range(len(rankings))]
    agents = tuple(
        (aid, WeakOrder(tuple(frozenset((x,)) for x in ranking)))
        for aid, ranking in zip(ids, rankings)
    )
    return PreferenceProfile(outcomes=tuple(outcomes), agents=agents)


def approval_profile(outcomes, approvals, ids=None):
    """Build a dichotomous profile from per-agent approval sets."""
    ids = ids or [str(i + 1) for i in range(len(approvals))]
    doc = {
        "outcomes": list(outcomes),
        "agents": [
            {"id": aid, "approvals": list(approved)}
            for aid, approved in zip(ids, approvals)
        ],
    }
    return parse_profile(json.dumps(doc))


@pytest.fixture
def cycles_profile():
    """Three agents, six outcomes, two interlacing Condorcet cycles; every
    outcome is Pareto optimal but uniform lotteries over the two cycles
    are not equally good."""
    return strict_profile(
        ["a", "b", "c", "x", "y", "z"],
        [
            ["a", "x", "b", "y", "c", "z"],
            ["b", "z", "c", "x", "a", "y"],
            ["c", "y", "a", "z", "b", "x"],
        ],
    )


@pytest.fixture
def five_agent_approvals():
    """Five agents over four outcomes; the profile where mixing the
    degenerate lotteries on c and d loses to mixing a and b."""
    return approval_profile(
        ["a", "b", "c", "d"],
        [["a", "c"], ["b", "d"], ["a", "d"], ["a"], ["b", "c"]],
    )


def simple_envelopes(pairs):
    return tuple(Envelope(label, side, 1) for label, side in pairs)


@pytest.fixture
def ballot_spec_3x6():
    """Six one-slip envelopes, three alternating permutations (the two
    candidate labels cyclically permuted in opposite directions)."""
    return BallotSpec(
        envelopes=simple_envelopes(
            [("A1", "A"), ("B1", "B"), ("A2", "A"), ("B2", "B"), ("A3", "A"), ("B3", "B")]
        ),
        permutations=(
            ("A1", "B1", "A2", "B2", "A3", "B3"),
            ("A2", "B3", "A3", "B1", "A1", "B2"),
            ("A3", "B2", "A1", "B3", "A2", "B1"),
        ),
    )


@pytest.fixture
def ballot_spec_4x4():
    """The minimal failing shape: four one-slip envelopes, four agents."""
    return BallotSpec(
        envelopes=simple_envelopes(
            [("A1", "A"), ("B1", "B"), ("A2", "A"), ("B2", "B")]
        ),
        permutations=(
            ("A1", "B1", "A2", "B2"),
            ("A2", "B1", "A1", "B2"),
            ("A1", "B2", "A2", "B1"),
            ("A2", "B2", "A1", "B1"),
        ),
    )


@pytest.fixture
def ballot_spec_nonsimple():
    """Four one-slip A envelopes against two two-slip B envelopes; twelve
    permutations of shape AABAAB covering every A-pair in both B orders."""
    import itertools

    perms = []
    for b_first, b_second in (("B1", "B2"), ("B2", "B1")):
        for i, j in itertools.combinations(range(1, 5), 2):
            rest = [f"A{k}" for k in range(1, 5) if k not in (i, j)]
            perms.append((f"A{i}", f"A{j}", b_first, rest[0], rest[1], b_second))
    return BallotSpec(
        envelopes=tuple(Envelope(f"A{k}", "A", 1) for k in range(1, 5))
        + (Envelope("B1", "B", 2), Envelope("B2", "B", 2)),
        permutations=tuple(perms),
    )
