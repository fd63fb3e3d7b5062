"""Decision-tree wirings: validation, walks, sampling, serialization."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prnet.strategy import (
    BoxRef,
    DecisionNode,
    NetworkStrategy,
    Party,
    PartyStrategy,
    chain_tree,
    n_own,
    network_from_json,
    network_to_json,
    own_assignment,
    owned_boxes,
    sample_random_network,
    trivial_network,
    validate,
    walk,
)

A, B, C = Party.ALICE, Party.BOB, Party.CHARLIE


def leaf(box, inp):
    return DecisionNode(box, inp, None, None)


def fig_style_alice_tree_setting_a():
    """Three boxes per pair; only the first three branch columns are pinned,
    the rest is completed in fixed order with input 0."""
    boxes = [BoxRef(B, i) for i in range(3)] + [BoxRef(C, i) for i in range(3)]

    def complete(seen):
        return chain_tree([b for b in boxes if b not in seen])

    def node(box, inp, on0, on1):
        return DecisionNode(box, inp, on0, on1)

    # root: query A_b^1 with input 0
    #   on 1: A_b^2 input 1, then (on 1) A_c^3 input 1 / (on 0) A_c^2 input 0
    #   on 0: A_c^1 input 1, then (on 1) A_b^2 input 0 / (on 0) A_b^2 input 1
    def third(box, inp, seen):
        seen = seen | {box}
        return node(box, inp, complete(seen), complete(seen))

    on1 = node(
        BoxRef(B, 1), 1,
        third(BoxRef(C, 1), 0, {BoxRef(B, 0), BoxRef(B, 1)}),
        third(BoxRef(C, 2), 1, {BoxRef(B, 0), BoxRef(B, 1)}),
    )
    on0 = node(
        BoxRef(C, 0), 1,
        third(BoxRef(B, 1), 1, {BoxRef(B, 0), BoxRef(C, 0)}),
        third(BoxRef(B, 1), 0, {BoxRef(B, 0), BoxRef(C, 0)}),
    )
    return node(BoxRef(B, 0), 0, on0, on1)


def test_walk_trivial_tree_fixed_order():
    counts = (1, 1, 1)
    net = trivial_network(counts)
    tree = net.party(A).trees[0]
    assignment = {BoxRef(B, 0): 0, BoxRef(C, 0): 0}
    steps = walk(tree, assignment)
    assert [(s.box, s.input, s.output) for s in steps] == [
        (BoxRef(B, 0), 0, 0),
        (BoxRef(C, 0), 0, 0),
    ]


def test_walk_branching_tree_first_columns():
    tree = fig_style_alice_tree_setting_a()
    # observing A_b^1 = 1 then A_b^2 = 0 leads to A_c^2 with input 0
    assignment = {BoxRef(B, 0): 1, BoxRef(B, 1): 0, BoxRef(B, 2): 0,
                  BoxRef(C, 0): 0, BoxRef(C, 1): 0, BoxRef(C, 2): 0}
    steps = walk(tree, assignment)
    assert (steps[0].box, steps[0].input, steps[0].output) == (BoxRef(B, 0), 0, 1)
    assert (steps[1].box, steps[1].input, steps[1].output) == (BoxRef(B, 1), 1, 0)
    assert (steps[2].box, steps[2].input) == (BoxRef(C, 1), 0)
    assert len(steps) == 6
    # observing A_b^1 = 0 then A_c^1 = 1 leads to A_b^2 with input 0
    assignment = {BoxRef(B, 0): 0, BoxRef(B, 1): 0, BoxRef(B, 2): 0,
                  BoxRef(C, 0): 1, BoxRef(C, 1): 0, BoxRef(C, 2): 0}
    steps = walk(tree, assignment)
    assert (steps[1].box, steps[1].input, steps[1].output) == (BoxRef(C, 0), 1, 1)
    assert (steps[2].box, steps[2].input) == (BoxRef(B, 1), 0)


@pytest.mark.parametrize("counts", [(1, 1, 1), (2, 1, 1), (2, 2, 2)])
def test_walk_is_bijective_onto_leaves(counts):
    net = sample_random_network(counts, seed=11)
    for party in Party:
        for setting in (0, 1):
            tree = net.party(party).trees[setting]
            transcripts = set()
            width = n_own(counts, party)
            for word in range(1 << width):
                steps = tuple(walk(tree, own_assignment(counts, party, word)))
                assert len(steps) == width
                transcripts.add(steps)
            assert len(transcripts) == 1 << width


def test_validate_trivial_ok():
    assert validate(trivial_network((1, 1, 1))).ok
    assert validate(trivial_network((0, 0, 0))).ok
    assert validate(trivial_network((2, 0, 1))).ok


def _with_alice_tree(counts, tree):
    net = trivial_network(counts)
    alice = net.party(A)
    parties = list(net.parties)
    parties[0] = PartyStrategy((tree, alice.trees[1]), alice.outputs)
    return NetworkStrategy(counts, tuple(parties))


def test_validate_reports_repeated_box():
    counts = (1, 1, 1)
    tree = DecisionNode(
        BoxRef(B, 0), 0,
        leaf(BoxRef(B, 0), 0),
        leaf(BoxRef(B, 0), 0),
    )
    report = validate(_with_alice_tree(counts, tree))
    assert not report.ok
    assert any("repeated box" in v for v in report.violations)


def test_validate_reports_missing_child():
    counts = (1, 1, 1)
    tree = DecisionNode(
        BoxRef(B, 0), 0,
        leaf(BoxRef(C, 0), 0),
        None,
    )
    report = validate(_with_alice_tree(counts, tree))
    assert not report.ok
    assert any("missing a child" in v for v in report.violations)


def test_validate_reports_incomplete_path_and_bad_index():
    counts = (1, 1, 1)
    report = validate(_with_alice_tree(counts, leaf(BoxRef(B, 0), 0)))
    assert any("incomplete path" in v for v in report.violations)
    report = validate(_with_alice_tree(counts, leaf(BoxRef(B, 5), 0)))
    assert not report.ok


def test_validate_reports_partial_output_table():
    counts = (1, 1, 1)
    net = trivial_network(counts)
    alice = net.party(A)
    parties = list(net.parties)
    parties[0] = PartyStrategy(alice.trees, (alice.outputs[0][:-1], alice.outputs[1]))
    report = validate(NetworkStrategy(counts, tuple(parties)))
    assert any("partial output table" in v for v in report.violations)


def test_box_cap_rejected_with_clear_error():
    with pytest.raises(ValueError, match="cap"):
        trivial_network((9, 8, 0))


def test_sampler_is_deterministic_and_valid():
    n1 = sample_random_network((2, 1, 2), seed=123)
    n2 = sample_random_network((2, 1, 2), seed=123)
    assert n1 == n2
    assert n1 != sample_random_network((2, 1, 2), seed=124)
    assert validate(n1).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_sampled_networks_always_validate(seed):
    assert validate(sample_random_network((1, 1, 1), seed)).ok


def test_thousand_samples_validate():
    for seed in range(1000):
        assert validate(sample_random_network((1, 1, 1), seed)).ok


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**32 - 1),
    st.sampled_from([(1, 1, 1), (2, 1, 0), (2, 2, 2)]),
)
def test_serialization_round_trip(seed, counts):
    net = sample_random_network(counts, seed)
    assert network_from_json(network_to_json(net)) == net


def test_json_format_shape():
    doc = network_to_json(trivial_network((1, 1, 1)))
    assert set(doc) == {"counts", "parties"}
    assert doc["counts"] == {"AB": 1, "AC": 1, "BC": 1}
    alice = doc["parties"]["Alice"]
    assert alice["trees"]["0"]["box"] == "B:0"
    assert alice["trees"]["0"]["on0"]["box"] == "C:0"
    assert alice["trees"]["0"]["on0"]["on0"] is None
    assert ["00", 0, "+"] in alice["output_table"]
    assert len(alice["output_table"]) == 8


def test_owned_boxes_order_counterpart_then_index():
    counts = (2, 1, 1)
    assert owned_boxes(counts, A) == [BoxRef(B, 0), BoxRef(B, 1), BoxRef(C, 0)]
    assert owned_boxes(counts, B) == [BoxRef(A, 0), BoxRef(A, 1), BoxRef(C, 0)]
    assert owned_boxes(counts, C) == [BoxRef(A, 0), BoxRef(B, 0)]
