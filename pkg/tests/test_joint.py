"""Joint distribution construction, its laws, and ordering invariance.

The independent oracle here builds supports the other way around:
enumerate every assignment of all six strings and keep those satisfying
the PR relation at every box, with inputs read off static tree walks.
"""

from fractions import Fraction
from itertools import product

import pytest

from prnet.joint import (
    ORDERINGS,
    FullAssignment,
    build_joint,
    check_ordering_invariance,
    determined_ac,
    joint_to_csv,
    marginal,
    verify_joint_laws,
)
from prnet.strategy import (
    Party,
    n_own,
    own_assignment,
    sample_random_network,
    split_own_word,
    trivial_network,
    walk,
)

A, B, C = Party.ALICE, Party.BOB, Party.CHARLIE


def oracle_support(network, settings):
    """All six-string assignments consistent with every box's PR relation."""
    counts = network.counts
    widths = [n_own(counts, p) for p in Party]
    support = set()
    for words in product(*(range(1 << w) for w in widths)):
        inputs = {}
        outputs = {}
        for p in Party:
            assignment = own_assignment(counts, p, words[int(p)])
            for step in walk(network.party(p).trees[settings[int(p)]], assignment):
                inputs[(p, step.box)] = step.input
                outputs[(p, step.box)] = step.output
        consistent = True
        for (p, box), out in outputs.items():
            q = box.counterpart
            mirror = next(b for b in outputs if b[0] == q and b[1].counterpart == p and b[1].index == box.index)
            if (out ^ outputs[mirror]) != (inputs[(p, box)] & inputs[mirror]):
                consistent = False
                break
        if consistent:
            parts = []
            for p in Party:
                parts.extend(split_own_word(counts, p, words[int(p)]))
            support.add(FullAssignment(*parts))
    return support


def test_trivial_support_pairs_equal():
    # all inputs are 0, so paired outputs agree: a_c=c_a, b_a=a_b, b_c=c_b
    joint = build_joint(trivial_network((1, 1, 1)), (0, 0, 0))
    expected = {
        FullAssignment(t, u, t, v, u, v) for t in (0, 1) for u in (0, 1) for v in (0, 1)
    }
    assert set(joint.support) == expected
    assert all(p == Fraction(1, 8) for p in joint.support.values())


def test_empty_counts_single_point():
    joint = build_joint(trivial_network((0, 0, 0)), (1, 0, 1))
    assert joint.support == {FullAssignment(0, 0, 0, 0, 0, 0): Fraction(1)}


@pytest.mark.parametrize("seed", range(8))
def test_support_size_and_weights(seed):
    network = sample_random_network((1, 1, 1), seed)
    joint = build_joint(network, (seed % 2, (seed >> 1) % 2, (seed >> 2) % 2))
    assert len(joint.support) == 8
    assert all(p == Fraction(1, 8) for p in joint.support.values())


@pytest.mark.parametrize(
    "counts,seeds", [((1, 1, 1), range(12)), ((2, 1, 2), range(4)), ((2, 2, 2), range(2))]
)
def test_construction_matches_constraint_oracle(counts, seeds):
    for seed in seeds:
        network = sample_random_network(counts, seed)
        settings = (seed % 2, (seed >> 1) % 2, 1)
        joint = build_joint(network, settings)
        assert set(joint.support) == oracle_support(network, settings)


def test_determined_ac_trivial_equals_c_a():
    network = trivial_network((1, 1, 1))
    for c_a in (0, 1):
        for c_b in (0, 1):
            for a_b in (0, 1):
                assert determined_ac(network, a_b, c_a, c_b, 0, 0) == c_a


def test_determined_ac_empty_pair():
    network = trivial_network((1, 0, 1))
    assert determined_ac(network, 1, 0, 1, 0, 1) == 0


@pytest.mark.parametrize("seed", range(6))
def test_determined_ac_matches_joint_projection(seed):
    network = sample_random_network((1, 1, 1), seed + 100)
    for x in (0, 1):
        for z in (0, 1):
            joint = build_joint(network, (x, 0, z), ORDERINGS["CAB"])
            for fa in joint.support:
                assert determined_ac(network, fa.a_b, fa.c_a, fa.c_b, x, z) == fa.a_c


@pytest.mark.parametrize("counts,n", [((1, 1, 1), 30), ((2, 2, 2), 6)])
def test_ordering_invariance_random_networks(counts, n):
    for seed in range(n):
        network = sample_random_network(counts, seed)
        settings = (seed % 2, (seed >> 1) % 2, (seed >> 2) % 2)
        ok, detail = check_ordering_invariance(network, settings)
        assert ok, detail


def test_marginal_uniformities():
    for seed in range(10):
        network = sample_random_network((1, 1, 1), seed + 50)
        for xyz in range(8):
            joint = build_joint(network, ((xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1))
            charlie = marginal(joint, ("c_a", "c_b"))
            assert all(p == Fraction(1, 4) for p in charlie.values())
            three = marginal(joint, ("a_b", "c_a", "c_b"))
            assert all(p == Fraction(1, 8) for p in three.values())
            assert len(three) == 8
            full = marginal(joint, ("a_b", "a_c", "b_a", "b_c", "c_a", "c_b"))
            assert full == {tuple(fa): p for fa, p in joint.support.items()}


def test_marginal_requires_nonempty_known_slots():
    joint = build_joint(trivial_network((1, 1, 1)), (0, 0, 0))
    with pytest.raises(ValueError):
        marginal(joint, ())
    with pytest.raises(ValueError):
        marginal(joint, ("a_q",))


def test_joint_laws_pass_on_real_networks():
    for seed in range(5):
        network = sample_random_network((2, 1, 1), seed)
        joint = build_joint(network, (1, 1, 0))
        assert verify_joint_laws(joint) == []


def test_joint_laws_localize_corruption():
    network = sample_random_network((1, 1, 1), 3)
    joint = build_joint(network, (0, 0, 0))
    support = dict(joint.support)
    # tamper: move one support point's mass elsewhere
    fa = next(iter(support))
    broken = FullAssignment(*(v ^ 1 for v in fa))
    support.pop(fa)
    support[broken] = Fraction(1, 4) if broken in support else Fraction(1, 8)
    corrupted = type(joint)(joint.counts, joint.settings, support)
    violations = verify_joint_laws(corrupted)
    assert violations
    assert any(v.split(":")[0] in (
        "support-weight", "normalization", "charlie-uniformity",
        "three-string-uniformity", "factorization", "bob-determinism",
    ) for v in violations)


def test_bob_determinism_property():
    for seed in range(10):
        network = sample_random_network((1, 1, 1), seed + 77)
        joint = build_joint(network, (1, 0, 1))
        completions = {}
        for fa in joint.support:
            key = (fa.a_b, fa.c_a, fa.c_b)
            assert key not in completions
            completions[key] = fa


def test_csv_dump_fractions():
    text = joint_to_csv(build_joint(trivial_network((1, 1, 1)), (0, 0, 0)))
    lines = text.strip().split("\n")
    assert lines[0] == "a_b,a_c,b_a,b_c,c_a,c_b,probability"
    assert len(lines) == 9
    assert lines[1].endswith(",1/8")


def test_ordering_invariance_trivial():
    for xyz in range(8):
        ok, detail = check_ordering_invariance(
            trivial_network((1, 1, 1)), ((xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1)
        )
        assert ok, detail
