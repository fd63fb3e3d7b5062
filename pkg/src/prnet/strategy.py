"""Per-party wirings: decision trees over owned boxes plus output tables.

A party owns one box-half per shared box. The measurement process is a
decision tree: each internal node names an owned box and the input fed to
it, and branches on the observed output. A well-formed tree queries every
owned box exactly once on every root-to-leaf path (unused boxes are still
queried, with input 0, at the end). The final observed outcome is a
function of the party's own outputs and setting, stored extensionally.

Conventions fixed here and used everywhere else:

* Parties are ALICE=0, BOB=1, CHARLIE=2; pairs are AB=0, AC=1, BC=2 with
  per-pair box counts ``(n_ab, n_ac, n_bc)``.
* A party's owned boxes are ordered "counterpart in party order, then
  index": Alice's slots are her AB boxes then her AC boxes, Bob's are his
  AB boxes then his BC boxes, Charlie's his AC boxes then his BC boxes.
* Bit strings are big-endian: slot/box-index i maps to bit position
  ``n - 1 - i`` of the corresponding integer word, and to character i
  (leftmost first) of the serialized string.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Callable, Mapping, NamedTuple

MAX_OWN_BOXES = 16

OUTCOME_SYMBOLS = {0: "0", 1: "+"}
SYMBOL_OUTCOMES = {"0": 0, "+": 1}


class Party(IntEnum):
    ALICE = 0
    BOB = 1
    CHARLIE = 2

    @property
    def letter(self) -> str:
        return "ABC"[int(self)]


PARTY_BY_LETTER = {"A": Party.ALICE, "B": Party.BOB, "C": Party.CHARLIE}

# Pair ids: 0 = Alice-Bob, 1 = Alice-Charlie, 2 = Bob-Charlie.
PAIRS: tuple[tuple[Party, Party], ...] = (
    (Party.ALICE, Party.BOB),
    (Party.ALICE, Party.CHARLIE),
    (Party.BOB, Party.CHARLIE),
)

Counts = tuple[int, int, int]


class BoxRef(NamedTuple):
    """One owned box-half, named from the owner's side: who it is shared with."""

    counterpart: Party
    index: int

    def label(self) -> str:
        return f"{self.counterpart.letter}:{self.index}"


class Step(NamedTuple):
    box: BoxRef
    input: int
    output: int


@dataclass(frozen=True)
class DecisionNode:
    """Internal tree node: query ``box`` with ``input``, branch on the output.

    A child of None is a leaf (measurement finished).
    """

    box: BoxRef
    input: int
    on0: "DecisionNode | None"
    on1: "DecisionNode | None"

    def child(self, output: int) -> "DecisionNode | None":
        return self.on1 if output else self.on0


@dataclass(frozen=True)
class PartyStrategy:
    """One party's wiring: a tree per setting and the output table.

    ``outputs[setting][own_word]`` is the final outcome bit ('+' = 1,
    '0' = 0) for the own-output assignment encoded by ``own_word``.
    """

    trees: tuple[DecisionNode | None, DecisionNode | None]
    outputs: tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class NetworkStrategy:
    counts: Counts
    parties: tuple[PartyStrategy, PartyStrategy, PartyStrategy]

    def __post_init__(self) -> None:
        for party in Party:
            owned = n_own(self.counts, party)
            if owned > MAX_OWN_BOXES:
                raise ValueError(
                    f"{party.name} would own {owned} boxes; the extensional "
                    f"table cap is {MAX_OWN_BOXES} per party"
                )

    def party(self, p: Party) -> PartyStrategy:
        return self.parties[p]


class ValidationReport(NamedTuple):
    ok: bool
    violations: list[str]


# ---------------------------------------------------------------------------
# slot/word bookkeeping


def counterparts(party: Party) -> tuple[Party, Party]:
    """The two other parties, in party order."""
    return tuple(q for q in Party if q != party)  # type: ignore[return-value]


def pair_id(p: Party, q: Party) -> int:
    key = frozenset((p, q))
    for i, pair in enumerate(PAIRS):
        if frozenset(pair) == key:
            return i
    raise ValueError(f"no pair for {p}, {q}")


def own_counts(counts: Counts, party: Party) -> tuple[int, int]:
    """Box counts with the first and second counterpart (in party order)."""
    q1, q2 = counterparts(party)
    return counts[pair_id(party, q1)], counts[pair_id(party, q2)]


def n_own(counts: Counts, party: Party) -> int:
    a, b = own_counts(counts, party)
    return a + b


def slot_of_box(counts: Counts, party: Party, box: BoxRef) -> int:
    q1, q2 = counterparts(party)
    n1, n2 = own_counts(counts, party)
    if box.counterpart == q1:
        if not 0 <= box.index < n1:
            raise ValueError(f"box index out of range: {box.label()}")
        return box.index
    if box.counterpart == q2:
        if not 0 <= box.index < n2:
            raise ValueError(f"box index out of range: {box.label()}")
        return n1 + box.index
    raise ValueError(f"{party.name} does not own boxes with {box.counterpart.name}")


def box_of_slot(counts: Counts, party: Party, slot: int) -> BoxRef:
    q1, q2 = counterparts(party)
    n1, n2 = own_counts(counts, party)
    if not 0 <= slot < n1 + n2:
        raise ValueError(f"slot out of range: {slot}")
    if slot < n1:
        return BoxRef(q1, slot)
    return BoxRef(q2, slot - n1)


def owned_boxes(counts: Counts, party: Party) -> list[BoxRef]:
    return [box_of_slot(counts, party, s) for s in range(n_own(counts, party))]


def bit_at(word: int, width: int, position: int) -> int:
    """Big-endian bit read: position 0 is the most significant bit."""
    return (word >> (width - 1 - position)) & 1


def set_bit(word: int, width: int, position: int, value: int) -> int:
    return word | (value << (width - 1 - position))


def word_to_bits(word: int, width: int) -> str:
    return format(word, f"0{width}b") if width else ""


def bits_to_word(bits: str) -> int:
    return int(bits, 2) if bits else 0


def own_word(counts: Counts, party: Party, assignment: Mapping[BoxRef, int]) -> int:
    width = n_own(counts, party)
    word = 0
    for box, value in assignment.items():
        word = set_bit(word, width, slot_of_box(counts, party, box), value)
    return word


def own_assignment(counts: Counts, party: Party, word: int) -> dict[BoxRef, int]:
    width = n_own(counts, party)
    return {
        box_of_slot(counts, party, s): bit_at(word, width, s) for s in range(width)
    }


def split_own_word(counts: Counts, party: Party, word: int) -> tuple[int, int]:
    """Split an own word into its two pair strings (first counterpart, second)."""
    n1, n2 = own_counts(counts, party)
    return word >> n2, word & ((1 << n2) - 1)


def join_own_word(counts: Counts, party: Party, first: int, second: int) -> int:
    _, n2 = own_counts(counts, party)
    return (first << n2) | second


# ---------------------------------------------------------------------------
# walks


class MalformedTreeError(ValueError):
    pass


def walk(tree: DecisionNode | None, assignment: Mapping[BoxRef, int]) -> list[Step]:
    """The unique root-to-leaf path consistent with the given box outputs.

    The assignment must cover every box the tree queries; the transcript
    records the input fed to each box along the way.
    """
    return walk_dynamic(tree, lambda box, _inp: assignment[box])


def walk_dynamic(
    tree: DecisionNode | None, resolve: Callable[[BoxRef, int], int]
) -> list[Step]:
    """Walk a tree, obtaining each box output from ``resolve(box, input)``."""
    steps: list[Step] = []
    seen: set[BoxRef] = set()
    node = tree
    while node is not None:
        if node.box in seen:
            raise MalformedTreeError(f"box {node.box.label()} repeated on path")
        seen.add(node.box)
        out = resolve(node.box, node.input)
        if out not in (0, 1):
            raise ValueError(f"resolved output must be a bit, got {out!r}")
        steps.append(Step(node.box, node.input, out))
        nxt = node.child(out)
        other = node.child(1 - out)
        if (nxt is None) != (other is None):
            raise MalformedTreeError(f"node {node.box.label()} is missing a child")
        node = nxt
    return steps


# ---------------------------------------------------------------------------
# validation


def validate(network: NetworkStrategy) -> ValidationReport:
    """Well-formedness report: tree coverage, index ranges, table totality."""
    violations: list[str] = []
    counts = network.counts
    if any(c < 0 for c in counts):
        violations.append(f"negative box count in {counts}")
        return ValidationReport(False, violations)
    for party in Party:
        strat = network.party(party)
        owned = set(owned_boxes(counts, party))
        for setting in (0, 1):
            where = f"{party.name} setting {setting}"
            tree = strat.trees[setting]
            if not owned:
                if tree is not None:
                    violations.append(f"{where}: tree present but no boxes owned")
            elif tree is None:
                violations.append(f"{where}: missing tree")
            else:
                violations.extend(_tree_violations(tree, owned, where, counts, party))
            table = strat.outputs[setting]
            expected = 1 << n_own(counts, party)
            if len(table) != expected:
                violations.append(
                    f"{where}: partial output table ({len(table)} of {expected} rows)"
                )
            elif any(v not in (0, 1) for v in table):
                violations.append(f"{where}: output table has non-bit entries")
    return ValidationReport(not violations, violations)


def _tree_violations(
    tree: DecisionNode,
    owned: set[BoxRef],
    where: str,
    counts: Counts,
    party: Party,
) -> list[str]:
    violations: list[str] = []

    def rec(node: DecisionNode | None, seen: frozenset[BoxRef]) -> None:
        if node is None:
            if seen != owned:
                missing = ", ".join(b.label() for b in sorted(owned - seen))
                violations.append(f"{where}: incomplete path, unused boxes {missing}")
            return
        if node.box not in owned:
            try:
                slot_of_box(counts, party, node.box)
                violations.append(f"{where}: box {node.box.label()} not owned")
            except ValueError:
                violations.append(f"{where}: out-of-range box {node.box.label()}")
            return
        if node.box in seen:
            violations.append(f"{where}: repeated box {node.box.label()} on a path")
            return
        if node.input not in (0, 1):
            violations.append(f"{where}: non-bit input at {node.box.label()}")
        seen = seen | {node.box}
        if (node.on0 is None) != (node.on1 is None):
            violations.append(f"{where}: node {node.box.label()} is missing a child")
            return
        rec(node.on0, seen)
        rec(node.on1, seen)

    rec(tree, frozenset())
    # de-duplicate identical messages from sibling subtrees
    return sorted(set(violations))


# ---------------------------------------------------------------------------
# constructors


def chain_tree(boxes: list[BoxRef], inputs: list[int] | None = None) -> DecisionNode | None:
    """Fixed-order tree: query the boxes in list order regardless of outputs."""
    if inputs is None:
        inputs = [0] * len(boxes)
    node: DecisionNode | None = None
    for box, inp in zip(reversed(boxes), reversed(inputs)):
        node = DecisionNode(box, inp, node, node)
    return node


def trivial_network(counts: Counts, outcome: int = 1) -> NetworkStrategy:
    """Fixed order, input 0 everywhere, constant outcome (default '+')."""
    parties = []
    for party in Party:
        tree = chain_tree(owned_boxes(counts, party))
        table = tuple([outcome] * (1 << n_own(counts, party)))
        parties.append(PartyStrategy((tree, tree), (table, table)))
    return NetworkStrategy(tuple(counts), tuple(parties))  # type: ignore[arg-type]


def _random_tree(rng: random.Random, boxes: list[BoxRef]) -> DecisionNode | None:
    if not boxes:
        return None
    i = rng.randrange(len(boxes))
    box = boxes[i]
    rest = boxes[:i] + boxes[i + 1 :]
    inp = rng.randrange(2)
    return DecisionNode(box, inp, _random_tree(rng, rest), _random_tree(rng, rest))


def sample_random_network(counts: Counts, seed: int) -> NetworkStrategy:
    """Uniformly structured random well-formed network.

    Trees are sampled by recursive choice among unvisited boxes with a
    random input at each node (the two subtrees are sampled independently);
    output tables are uniform. Deterministic in the seed.
    """
    rng = random.Random(seed)
    parties = []
    for party in Party:
        boxes = owned_boxes(counts, party)
        trees = tuple(_random_tree(rng, boxes) for _ in range(2))
        tables = tuple(
            tuple(rng.randrange(2) for _ in range(1 << len(boxes))) for _ in range(2)
        )
        parties.append(PartyStrategy(trees, tables))  # type: ignore[arg-type]
    return NetworkStrategy(tuple(counts), tuple(parties))  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# serialization


def _node_to_json(node: DecisionNode | None) -> dict | None:
    if node is None:
        return None
    return {
        "box": node.box.label(),
        "input": node.input,
        "on0": _node_to_json(node.on0),
        "on1": _node_to_json(node.on1),
    }


def _node_from_json(obj: dict | None) -> DecisionNode | None:
    if obj is None:
        return None
    letter, _, index = obj["box"].partition(":")
    box = BoxRef(PARTY_BY_LETTER[letter], int(index))
    return DecisionNode(
        box, int(obj["input"]), _node_from_json(obj["on0"]), _node_from_json(obj["on1"])
    )


def network_to_json(network: NetworkStrategy) -> dict:
    counts = network.counts
    doc: dict = {"counts": {"AB": counts[0], "AC": counts[1], "BC": counts[2]}}
    parties = {}
    for party in Party:
        strat = network.party(party)
        width = n_own(counts, party)
        rows = [
            [word_to_bits(word, width), setting, OUTCOME_SYMBOLS[strat.outputs[setting][word]]]
            for setting in (0, 1)
            for word in range(1 << width)
        ]
        parties[party.name.capitalize()] = {
            "trees": {"0": _node_to_json(strat.trees[0]), "1": _node_to_json(strat.trees[1])},
            "output_table": rows,
        }
    doc["parties"] = parties
    return doc


def network_from_json(doc: dict) -> NetworkStrategy:
    c = doc["counts"]
    counts: Counts = (int(c["AB"]), int(c["AC"]), int(c["BC"]))
    parties = []
    for party in Party:
        pdoc = doc["parties"][party.name.capitalize()]
        trees = (_node_from_json(pdoc["trees"]["0"]), _node_from_json(pdoc["trees"]["1"]))
        width = n_own(counts, party)
        tables = [[-1] * (1 << width) for _ in range(2)]
        for bits, setting, symbol in pdoc["output_table"]:
            tables[int(setting)][bits_to_word(bits)] = SYMBOL_OUTCOMES[symbol]
        if any(v == -1 for table in tables for v in table):
            raise ValueError(f"{party.name}: output table does not cover all rows")
        parties.append(PartyStrategy(trees, (tuple(tables[0]), tuple(tables[1]))))
    return NetworkStrategy(counts, tuple(parties))  # type: ignore[arg-type]


def save_network(network: NetworkStrategy, path: str | Path) -> None:
    Path(path).write_text(json.dumps(network_to_json(network), indent=1) + "\n")


def load_network(path: str | Path) -> NetworkStrategy:
    return network_from_json(json.loads(Path(path).read_text()))
