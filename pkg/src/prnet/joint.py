"""Exact joint distribution of all box outputs under a setting triple.

The distribution is built sequentially for a chosen ordering of parties
(p1, p2, p3): p1's outputs are all free fair coins, p2's outputs are free
on boxes shared with p3 and forced on boxes shared with p1, and all of
p3's outputs are forced. Every support point therefore has probability
exactly 2^-(n_ab + n_ac + n_bc), a dyadic rational; probabilities are kept
as `fractions.Fraction` so equality checks are exact, never tolerance-based.

The construction provably does not depend on the ordering; `check_ordering_
invariance` verifies that directly by building all six and comparing
support maps for exact equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .boxes import pr_determined_output
from .strategy import (
    BoxRef,
    Counts,
    NetworkStrategy,
    Party,
    bit_at,
    join_own_word,
    n_own,
    own_counts,
    pair_id,
    slot_of_box,
    split_own_word,
    validate,
    walk_dynamic,
    word_to_bits,
)

Settings = tuple[int, int, int]
Ordering = tuple[Party, Party, Party]

ORDERINGS: dict[str, Ordering] = {
    "".join(p.letter for p in perm): perm  # type: ignore[misc]
    for perm in itertools.permutations(Party)
}
DEFAULT_ORDERING: Ordering = ORDERINGS["CAB"]

STRING_SLOTS = ("a_b", "a_c", "b_a", "b_c", "c_a", "c_b")


class FullAssignment(NamedTuple):
    """The six box-output strings, each packed big-endian into an int."""

    a_b: int
    a_c: int
    b_a: int
    b_c: int
    c_a: int
    c_b: int


def string_width(counts: Counts, slot: str) -> int:
    owner = PARTY_BY_SLOT[slot][0]
    counterpart = PARTY_BY_SLOT[slot][1]
    return counts[pair_id(owner, counterpart)]


PARTY_BY_SLOT = {
    "a_b": (Party.ALICE, Party.BOB),
    "a_c": (Party.ALICE, Party.CHARLIE),
    "b_a": (Party.BOB, Party.ALICE),
    "b_c": (Party.BOB, Party.CHARLIE),
    "c_a": (Party.CHARLIE, Party.ALICE),
    "c_b": (Party.CHARLIE, Party.BOB),
}


@dataclass(frozen=True)
class JointDistribution:
    counts: Counts
    settings: Settings
    support: dict[FullAssignment, Fraction]

    def total(self) -> Fraction:
        return sum(self.support.values(), Fraction(0))


def parse_ordering(label: str) -> Ordering:
    try:
        return ORDERINGS[label.upper()]
    except KeyError:
        raise ValueError(f"ordering must be one of {sorted(ORDERINGS)}, got {label!r}")


def _require_valid(network: NetworkStrategy) -> None:
    report = validate(network)
    if not report.ok:
        raise ValueError("invalid network: " + "; ".join(report.violations))


def _party_setting(settings: Settings, party: Party) -> int:
    return settings[int(party)]


class _Records:
    """Per-assignment record of each side's (input, output) at every box."""

    __slots__ = ("inputs", "outputs")

    def __init__(self) -> None:
        self.inputs: dict[tuple[Party, BoxRef], int] = {}
        self.outputs: dict[tuple[Party, BoxRef], int] = {}

    def put(self, party: Party, box: BoxRef, inp: int, out: int) -> None:
        self.inputs[(party, box)] = inp
        self.outputs[(party, box)] = out

    def counterpart_view(self, party: Party, box: BoxRef) -> tuple[int, int]:
        key = (box.counterpart, BoxRef(party, box.index))
        return self.inputs[key], self.outputs[key]


def _walk_free(
    network: NetworkStrategy, party: Party, setting: int, word: int, rec: _Records
) -> None:
    counts = network.counts
    width = n_own(counts, party)

    def resolve(box: BoxRef, inp: int) -> int:
        out = bit_at(word, width, slot_of_box(counts, party, box))
        rec.put(party, box, inp, out)
        return out

    walk_dynamic(network.party(party).trees[setting], resolve)


def _walk_mixed(
    network: NetworkStrategy,
    party: Party,
    setting: int,
    free_counterpart: Party | None,
    free_word: int,
    rec: _Records,
) -> None:
    counts = network.counts
    free_width = counts[pair_id(party, free_counterpart)] if free_counterpart is not None else 0

    def resolve(box: BoxRef, inp: int) -> int:
        if box.counterpart == free_counterpart:
            out = bit_at(free_word, free_width, box.index)
        else:
            cin, cout = rec.counterpart_view(party, box)
            out = pr_determined_output(cout, inp, cin)
        rec.put(party, box, inp, out)
        return out

    walk_dynamic(network.party(party).trees[setting], resolve)


def _own_word_from_records(
    network: NetworkStrategy, party: Party, rec: _Records
) -> int:
    counts = network.counts
    width = n_own(counts, party)
    word = 0
    for (p, box), out in rec.outputs.items():
        if p == party:
            word |= out << (width - 1 - slot_of_box(counts, party, box))
    return word


def _assignment_from_records(network: NetworkStrategy, rec: _Records) -> FullAssignment:
    words = []
    for party in Party:
        own = _own_word_from_records(network, party, rec)
        words.extend(split_own_word(network.counts, party, own))
    return FullAssignment(*words)


def build_joint(
    network: NetworkStrategy,
    settings: Settings,
    ordering: Ordering = DEFAULT_ORDERING,
) -> JointDistribution:
    """Enumerate the full joint distribution of the six output strings.

    Free coins: both strings of the first party plus the second party's
    string shared with the third; everything else is forced by the PR rule.
    """
    _require_valid(network)
    counts = network.counts
    p1, p2, p3 = ordering
    n1 = n_own(counts, p1)
    n23 = counts[pair_id(p2, p3)]
    nfree = n1 + n23
    weight = Fraction(1, 1 << nfree)
    support: dict[FullAssignment, Fraction] = {}
    for free in range(1 << nfree):
        p1_word = free >> n23
        p23_word = free & ((1 << n23) - 1)
        rec = _Records()
        _walk_free(network, p1, _party_setting(settings, p1), p1_word, rec)
        _walk_mixed(network, p2, _party_setting(settings, p2), p3, p23_word, rec)
        _walk_mixed(network, p3, _party_setting(settings, p3), None, 0, rec)
        support[_assignment_from_records(network, rec)] = weight
    if len(support) != 1 << nfree:
        raise AssertionError("free assignments did not map to distinct support points")
    return JointDistribution(counts, tuple(settings), support)


def determined_ac(
    network: NetworkStrategy, a_b: int, c_a: int, c_b: int, x: int, z: int
) -> int:
    """The unique a_c consistent with Alice's and Charlie's trees.

    Charlie's outputs (c_a, c_b) and Alice's outputs toward Bob (a_b) fix
    Alice's entire path: every box shared with Charlie returns the output
    forced by the PR rule. Returns the resulting a_c word.
    """
    _require_valid(network)
    counts = network.counts
    rec = _Records()
    charlie_word = join_own_word(counts, Party.CHARLIE, c_a, c_b)
    _walk_free(network, Party.CHARLIE, z, charlie_word, rec)

    width_a = n_own(counts, Party.ALICE)
    n_ab = counts[pair_id(Party.ALICE, Party.BOB)]

    def resolve(box: BoxRef, inp: int) -> int:
        if box.counterpart == Party.BOB:
            out = bit_at(a_b, n_ab, box.index)
        else:
            cin, cout = rec.counterpart_view(Party.ALICE, box)
            out = pr_determined_output(cout, inp, cin)
        rec.put(Party.ALICE, box, inp, out)
        return out

    walk_dynamic(network.party(Party.ALICE).trees[x], resolve)
    alice_word = _own_word_from_records(network, Party.ALICE, rec)
    return split_own_word(counts, Party.ALICE, alice_word)[1]


def check_ordering_invariance(
    network: NetworkStrategy, settings: Settings
) -> tuple[bool, str | None]:
    """Build the joint under all 6 orderings and compare supports exactly."""
    reference_label = None
    reference = None
    for label, ordering in sorted(ORDERINGS.items()):
        joint = build_joint(network, settings, ordering)
        if reference is None:
            reference, reference_label = joint.support, label
        elif joint.support != reference:
            extra = set(joint.support) - set(reference)
            missing = set(reference) - set(joint.support)
            detail = (
                f"orderings {reference_label} and {label} disagree at settings "
                f"{settings}: {len(missing)} points missing, {len(extra)} extra"
            )
            return False, detail
    return True, None


def marginal(
    joint: JointDistribution, slots: Sequence[str]
) -> dict[tuple[int, ...], Fraction]:
    """Exact marginal over a nonempty subset of the six string slots."""
    if not slots:
        raise ValueError("marginal requires a nonempty subset of slots")
    for s in slots:
        if s not in STRING_SLOTS:
            raise ValueError(f"unknown slot {s!r}; choose from {STRING_SLOTS}")
    indices = [STRING_SLOTS.index(s) for s in slots]
    out: dict[tuple[int, ...], Fraction] = {}
    for fa, p in joint.support.items():
        key = tuple(fa[i] for i in indices)
        out[key] = out.get(key, Fraction(0)) + p
    return out


def verify_joint_laws(joint: JointDistribution) -> list[str]:
    """Check the structural laws of a box-output joint; return violations.

    Laws, each identified by name in the report: support-weight (every
    point weighs exactly 2^-(total box count), support size matches),
    normalization, charlie-uniformity (the (c_a, c_b) marginal is uniform),
    three-string-uniformity (the (a_b, c_a, c_b) marginal is uniform),
    factorization (a_b independent of (c_a, c_b)), and bob-determinism
    (each (a_b, c_a, c_b) fixes the remaining strings uniquely).
    """
    violations: list[str] = []
    counts = joint.counts
    nfree = sum(counts)
    weight = Fraction(1, 1 << nfree)
    if len(joint.support) != 1 << nfree:
        violations.append(
            f"support-weight: {len(joint.support)} support points, expected {1 << nfree}"
        )
    bad = {fa for fa, p in joint.support.items() if p != weight}
    if bad:
        violations.append(f"support-weight: {len(bad)} points deviate from {weight}")
    if joint.total() != 1:
        violations.append(f"normalization: probabilities sum to {joint.total()}")

    n_ca, n_cb = own_counts(counts, Party.CHARLIE)
    charlie = marginal(joint, ("c_a", "c_b"))
    uniform_c = Fraction(1, 1 << (n_ca + n_cb))
    if len(charlie) != 1 << (n_ca + n_cb) or any(p != uniform_c for p in charlie.values()):
        violations.append("charlie-uniformity: (c_a, c_b) marginal is not uniform")

    n_ab = counts[0]
    three = marginal(joint, ("a_b", "c_a", "c_b"))
    uniform_3 = Fraction(1, 1 << (n_ab + n_ca + n_cb))
    if len(three) != 1 << (n_ab + n_ca + n_cb) or any(p != uniform_3 for p in three.values()):
        violations.append("three-string-uniformity: (a_b, c_a, c_b) marginal is not uniform")

    ab_marg = marginal(joint, ("a_b",))
    for key, p in three.items():
        if p != ab_marg[(key[0],)] * charlie[(key[1], key[2])]:
            violations.append("factorization: a_b not independent of (c_a, c_b)")
            break

    seen: dict[tuple[int, int, int], FullAssignment] = {}
    for fa in joint.support:
        key = (fa.a_b, fa.c_a, fa.c_b)
        if key in seen and seen[key] != fa:
            violations.append(
                "bob-determinism: multiple completions for a_b="
                f"{word_to_bits(fa.a_b, counts[0])} c_a={word_to_bits(fa.c_a, counts[1])} "
                f"c_b={word_to_bits(fa.c_b, counts[2])}"
            )
            break
        seen[key] = fa
    return violations


def joint_to_csv(joint: JointDistribution) -> str:
    """CSV dump: one row per support point, probability as an exact fraction."""
    counts = joint.counts
    widths = [string_width(counts, s) for s in STRING_SLOTS]
    lines = [",".join(STRING_SLOTS) + ",probability"]
    for fa in sorted(joint.support):
        p = joint.support[fa]
        cells = [word_to_bits(w, n) for w, n in zip(fa, widths)]
        lines.append(",".join(cells) + f",{p.numerator}/{p.denominator}")
    return "\n".join(lines) + "\n"
