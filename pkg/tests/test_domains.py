import json
import random
from fractions import Fraction

import pytest

from effix.domains import (
    BallotSpec,
    Envelope,
    as_dichotomous,
    ballot_spec_json_dict,
    ballot_to_profile,
    dichotomous_lambda,
    extract_ballot_witness,
    generate_single_peaked,
    is_single_peaked,
    parse_ballot_spec,
    retract,
    serialize_ballot_spec,
    sperner_bound,
    split_to_simple,
    verify_ballot,
)
from effix.efficiency import dedup_equivalent_outcomes, equivalence
from effix.errors import InputError
from effix.mechanisms import pareto_set
from effix.model import WeakOrder

from conftest import approval_profile, strict_profile


# ---------------------------------------------------------------------------
# dichotomous view and lambda certificates


def test_as_dichotomous_matrix(five_agent_approvals):
    view = as_dichotomous(five_agent_approvals)
    assert view.outcomes == ("a", "b", "c", "d")
    assert view.matrix == (
        (1, 0, 1, 0),
        (0, 1, 0, 1),
        (1, 0, 0, 1),
        (1, 0, 0, 0),
        (0, 1, 1, 0),
    )


def test_as_dichotomous_rejects_strict_cycle(cycles_profile):
    assert as_dichotomous(cycles_profile) is None


def test_indifferent_agent_becomes_all_ones_row():
    profile = approval_profile(["a", "b"], [["a"], []])
    view = as_dichotomous(profile)
    assert view.matrix == ((1, 0), (1, 1))


def test_lambda_for_four_agent_profiles():
    singleton = approval_profile(
        ["a", "b", "c", "d"], [["a"], ["b"], ["c"], ["d"]]
    )
    cert = dichotomous_lambda(as_dichotomous(singleton))
    assert [w for _, w in cert.weights] == [1, 1, 1, 1]
    assert cert.constant == 1

    paired = approval_profile(
        ["a", "b", "c", "d"], [["b", "c"], ["a", "c"], ["a", "b"], ["d"]]
    )
    cert = dichotomous_lambda(as_dichotomous(paired))
    assert [w for _, w in cert.weights] == [1, 1, 1, 2]
    assert cert.constant == 2


def test_lambda_equisupport_profile():
    profile = approval_profile(
        ["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]]
    )
    cert = dichotomous_lambda(as_dichotomous(profile))
    assert [w for _, w in cert.weights] == [1, 1, 1]
    # the dot product really is constant over Pareto-optimal columns
    view = as_dichotomous(profile)
    for x in pareto_set(profile):
        value = sum(
            w for (_, w), approved in zip(cert.weights, view.column(x)) if approved
        )
        assert value == cert.constant


def test_lambda_missing_for_five_agent_profile(five_agent_approvals):
    assert dichotomous_lambda(as_dichotomous(five_agent_approvals)) is None


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 2), (4, 6), (5, 10), (6, 20)])
def test_sperner_bound(n, expected):
    assert sperner_bound(n) == expected


def test_sperner_bound_holds_on_random_dichotomous_profiles():
    from effix.oracle import random_dichotomous_profile

    rng = random.Random(17)
    for _ in range(100):
        n = rng.randint(1, 5)
        m = rng.randint(1, 6)
        profile = random_dichotomous_profile(n, tuple("abcdef")[:m], rng)
        reduced, _ = dedup_equivalent_outcomes(profile)
        assert len(pareto_set(reduced)) <= sperner_bound(n)


# ---------------------------------------------------------------------------
# single-peaked


def test_single_peaked_examples():
    axis = ("a", "b", "c")
    peaked = strict_profile(["a", "b", "c"], [["b", "c", "a"]])
    assert is_single_peaked(peaked, axis)
    valley = strict_profile(["a", "b", "c"], [["a", "c", "b"]])
    assert not is_single_peaked(valley, axis)


def test_single_peaked_axis_validation():
    profile = strict_profile(["a", "b"], [["a", "b"]])
    with pytest.raises(InputError):
        is_single_peaked(profile, ("a",))


def test_single_outcome_axis():
    profile = generate_single_peaked(("a",), 3, seed=1)
    assert profile.outcomes == ("a",)
    assert is_single_peaked(profile, ("a",))


def test_generated_profiles_are_single_peaked():
    axis = ("a", "b", "c", "d", "e", "f")
    for seed in range(1000):
        profile = generate_single_peaked(axis, 1 + seed % 5, seed=seed)
        assert is_single_peaked(profile, axis)
    assert generate_single_peaked(axis, 3, seed=5) == generate_single_peaked(
        axis, 3, seed=5
    )


# ---------------------------------------------------------------------------
# ballot specs


def test_ballot_specs_verify(ballot_spec_3x6, ballot_spec_4x4, ballot_spec_nonsimple):
    for spec in (ballot_spec_3x6, ballot_spec_4x4, ballot_spec_nonsimple):
        assert verify_ballot(spec).ok


def test_ballot_profile_matches_cycle_profile(ballot_spec_3x6, cycles_profile):
    profile = ballot_to_profile(ballot_spec_3x6)
    relabel = {"A1": "a", "B1": "x", "A2": "b", "B2": "y", "A3": "c", "B3": "z"}
    rankings = [
        [relabel[next(iter(cls))] for cls in order.classes]
        for _, order in profile.agents
    ]
    expected = [
        [next(iter(cls)) for cls in order.classes]
        for _, order in cycles_profile.agents
    ]
    assert rankings == expected


def test_ballot_violations():
    b_first = BallotSpec(
        envelopes=(Envelope("A1", "A", 1), Envelope("B1", "B", 1)),
        permutations=(("B1", "A1"), ("A1", "B1")),
    )
    check = verify_ballot(b_first)
    assert not check.ok and check.reason == "prefix"
    assert check.permutation == 0 and check.prefix == 1

    imbalanced = BallotSpec(
        envelopes=(Envelope("A1", "A", 2), Envelope("B1", "B", 1)),
        permutations=(("A1", "B1"),),
    )
    assert verify_ballot(imbalanced).reason == "slip-balance"

    fixed_pair = BallotSpec(
        envelopes=(Envelope("A1", "A", 1), Envelope("B1", "B", 1)),
        permutations=(("A1", "B1"), ("A1", "B1")),
    )
    check = verify_ballot(fixed_pair)
    assert not check.ok and check.reason == "pair" and check.pair == ("A1", "B1")


def test_ballot_build_rejects_invalid():
    spec = BallotSpec(
        envelopes=(Envelope("A1", "A", 1), Envelope("B1", "B", 1)),
        permutations=(("A1", "B1"), ("A1", "B1")),
    )
    with pytest.raises(InputError, match="never reordered"):
        ballot_to_profile(spec)


def test_ballot_profiles_fail_equivalence(
    ballot_spec_3x6, ballot_spec_4x4, ballot_spec_nonsimple
):
    for spec in (ballot_spec_3x6, ballot_spec_4x4, ballot_spec_nonsimple):
        profile = ballot_to_profile(spec)
        assert not equivalence(profile).coincide


def test_extract_witness_from_cycle_profile(cycles_profile):
    spec = extract_ballot_witness(cycles_profile)
    assert spec is not None
    assert verify_ballot(spec).ok
    by_label = {e.label: e for e in spec.envelopes}
    assert {l for l, e in by_label.items() if e.side == "A"} == {"a", "b", "c"}
    assert {l for l, e in by_label.items() if e.side == "B"} == {"x", "y", "z"}
    assert all(e.slips == 1 for e in spec.envelopes)


def test_extract_witness_none_for_two_agents():
    profile = strict_profile(
        ["a", "b", "c", "d"], [["a", "b", "c", "d"], ["d", "c", "b", "a"]]
    )
    assert extract_ballot_witness(profile) is None


def test_extract_witness_nonsimple(ballot_spec_nonsimple):
    profile = ballot_to_profile(ballot_spec_nonsimple)
    spec = extract_ballot_witness(profile)
    slips = sorted((e.side, e.slips) for e in spec.envelopes)
    assert slips == [("A", 1), ("A", 1), ("A", 1), ("A", 1), ("B", 2), ("B", 2)]
    assert verify_ballot(spec).ok


def test_extract_witness_requires_strict(five_agent_approvals):
    with pytest.raises(InputError, match="strict"):
        extract_ballot_witness(five_agent_approvals)


# ---------------------------------------------------------------------------
# retraction and splitting


def test_singleton_retraction_is_relabeling(cycles_profile):
    renamed = retract(cycles_profile, ["x"], "w")
    assert renamed.outcomes == ("a", "b", "c", "w", "y", "z")
    back = retract(renamed, ["w"], "x")
    assert back == cycles_profile


def test_retract_reports_offending_agent():
    profile = strict_profile(
        ["a", "b", "c"], [["a", "b", "c"], ["a", "c", "b"]], ids=["1", "2"]
    )
    # {a, b} is adjacent for agent 1 but split by c for agent 2
    with pytest.raises(InputError, match="agent '2'"):
        retract(profile, ["a", "b"], "ab")


def test_split_keeps_simple_specs(ballot_spec_3x6):
    assert split_to_simple(ballot_spec_3x6) == ballot_spec_3x6


def test_split_nonsimple(ballot_spec_nonsimple):
    simple = split_to_simple(ballot_spec_nonsimple)
    assert len(simple.envelopes) == 8
    assert all(e.slips == 1 for e in simple.envelopes)
    assert verify_ballot(simple).ok


def test_split_then_retract_round_trip(ballot_spec_nonsimple):
    simple = split_to_simple(ballot_spec_nonsimple)
    profile = ballot_to_profile(simple)
    for envelope in ballot_spec_nonsimple.envelopes:
        if envelope.slips > 1:
            group = [f"{envelope.label}:{i}" for i in range(1, envelope.slips + 1)]
            profile = retract(profile, group, envelope.label)
    assert profile == ballot_to_profile(ballot_spec_nonsimple)


def test_ballot_spec_round_trip(ballot_spec_nonsimple):
    text = serialize_ballot_spec(ballot_spec_nonsimple)
    assert parse_ballot_spec(text) == ballot_spec_nonsimple
    assert json.loads(text) == ballot_spec_json_dict(ballot_spec_nonsimple)
