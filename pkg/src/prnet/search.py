"""Strategy-space search probing the bound E(F) >= 1/8.

A network is six independent per-setting responses (each party's tree and
output rows are chosen per setting), and a response influences behavior
only through its canonical form: which input each box receives and which
outcome is announced, as functions of the party's own outputs. Equal
canonical forms give identical behavior in every network (the sound
direction; the converse is not asserted). At one box per pair there are
192 canonical per-setting responses, and E(F) decomposes into per-slot
tables over them, so the minimum over all networks-of-canonical-forms is
found exactly by table-driven minimization: "exhaustive over canonical
forms". Random sampling and hill-climbing cover larger box counts.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .bell import BOUND, network_expectation
from .joint import _require_valid
from .strategy import (
    Counts,
    DecisionNode,
    NetworkStrategy,
    Party,
    PartyStrategy,
    box_of_slot,
    n_own,
    network_to_json,
    owned_boxes,
    sample_random_network,
    slot_of_box,
    walk,
    own_assignment,
    _random_tree,
)


class CanonicalResponse(NamedTuple):
    """Behavior-relevant content of one per-setting response.

    inputs[w] is the word of inputs the party feeds its boxes (slot 0 in
    the high bit) when its own outputs form word w; outcomes[w] is the
    announced outcome bit.
    """

    inputs: tuple[int, ...]
    outcomes: tuple[int, ...]


def canonicalize(strategy: PartyStrategy, counts: Counts, party: Party) -> tuple[CanonicalResponse, CanonicalResponse]:
    """Canonical forms of both per-setting responses of one party.

    Equal canonical forms induce identical behavior in every surrounding
    network; the converse direction is not asserted.
    """
    width = n_own(counts, party)
    forms = []
    for setting in (0, 1):
        inputs = []
        outcomes = []
        for w in range(1 << width):
            transcript = walk(strategy.trees[setting], own_assignment(counts, party, w))
            word = 0
            for step in transcript:
                word |= step.input << (width - 1 - slot_of_box(counts, party, step.box))
            inputs.append(word)
            outcomes.append(strategy.outputs[setting][w])
        forms.append(CanonicalResponse(tuple(inputs), tuple(outcomes)))
    return tuple(forms)  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# the 192 canonical per-setting responses of a two-box party


@dataclass(frozen=True)
class ResponseClass:
    form: CanonicalResponse
    tree_spec: tuple[int, int, int, int]  # (first_slot, root_input, input_on0, input_on1)
    table: tuple[int, ...]


def _spec_inputs(spec: tuple[int, int, int, int]) -> tuple[int, ...]:
    first, root_inp, v0, v1 = spec
    words = []
    for w in range(4):
        bits = ((w >> 1) & 1, w & 1)
        seen_first = bits[first]
        other_inp = v1 if seen_first else v0
        u = [0, 0]
        u[first] = root_inp
        u[1 - first] = other_inp
        words.append(u[0] << 1 | u[1])
    return tuple(words)


def enumerate_response_classes() -> list[ResponseClass]:
    """All distinct canonical per-setting responses of a two-box party."""
    classes: dict[CanonicalResponse, ResponseClass] = {}
    for first in (0, 1):
        for root_inp in (0, 1):
            for v0 in (0, 1):
                for v1 in (0, 1):
                    spec = (first, root_inp, v0, v1)
                    inputs = _spec_inputs(spec)
                    for table_bits in range(16):
                        table = tuple((table_bits >> w) & 1 for w in range(4))
                        form = CanonicalResponse(inputs, table)
                        if form not in classes:
                            classes[form] = ResponseClass(form, spec, table)
    return list(classes.values())


def materialize_tree(spec: tuple[int, int, int, int], counts: Counts, party: Party) -> DecisionNode:
    first, root_inp, v0, v1 = spec
    box_first = box_of_slot(counts, party, first)
    box_other = box_of_slot(counts, party, 1 - first)
    return DecisionNode(
        box_first,
        root_inp,
        DecisionNode(box_other, v0, None, None),
        DecisionNode(box_other, v1, None, None),
    )


def materialize_network(
    counts: Counts, classes: list[ResponseClass], picks: tuple[int, int, int, int, int, int]
) -> NetworkStrategy:
    """Build a network from class indices (one per party per setting)."""
    parties = []
    for p, (i0, i1) in zip(Party, ((picks[0], picks[1]), (picks[2], picks[3]), (picks[4], picks[5]))):
        c0, c1 = classes[i0], classes[i1]
        trees = (
            materialize_tree(c0.tree_spec, counts, p),
            materialize_tree(c1.tree_spec, counts, p),
        )
        parties.append(PartyStrategy(trees, (c0.table, c1.table)))
    return NetworkStrategy(counts, tuple(parties))  # type: ignore[arg-type]


def class_arrays(classes: list[ResponseClass]) -> tuple[np.ndarray, np.ndarray]:
    inputs = np.array([c.form.inputs for c in classes], dtype=np.uint8)
    outcomes = np.array([c.form.outcomes for c in classes], dtype=np.uint8)
    return inputs, outcomes


# ---------------------------------------------------------------------------
# search driver


@dataclass
class SearchConfig:
    counts: Counts = (1, 1, 1)
    mode: str = "exhaustive"  # exhaustive | random | local
    budget: int = 10_000
    seed: int = 0
    symmetry_reduction: bool = True

    def __post_init__(self) -> None:
        if self.mode not in ("exhaustive", "random", "local"):
            raise ValueError(f"unknown search mode {self.mode!r}")
        if self.mode == "exhaustive":
            if tuple(self.counts) != (1, 1, 1):
                raise ValueError("exhaustive mode is only supported at counts (1,1,1)")
            if not self.symmetry_reduction:
                raise ValueError(
                    "exhaustive mode requires symmetry reduction (canonical forms)"
                )


@dataclass
class SearchResult:
    best_value: Fraction
    best_network: NetworkStrategy
    histogram: dict[Fraction, int]
    evaluations: int
    mode: str
    label: str
    violations: list[str] = field(default_factory=list)

    @property
    def bound_holds(self) -> bool:
        return not self.violations


def _record_violation(violations: list[str], network: NetworkStrategy, value: Fraction) -> None:
    import json

    violations.append(
        "E(F) = "
        f"{value} < 1/8 for network: {json.dumps(network_to_json(network))}"
    )


def minimize_bell(config: SearchConfig, start_network: NetworkStrategy | None = None) -> SearchResult:
    """Minimize E(F) over networks at the configured counts.

    Exhaustive mode ((1,1,1) only) reports the exact minimum over canonical
    per-party forms; random/local modes report the best value found. Every
    evaluated value is compared exactly against 1/8, and any violation is
    recorded with the offending network's full serialization.
    """
    if config.mode == "exhaustive":
        return _exhaustive(config)
    if config.mode == "random":
        return _random_search(config)
    return _local_search(config, start_network)


def _exhaustive(config: SearchConfig) -> SearchResult:
    from .kernels import exhaustive_totals, response_tables

    classes = enumerate_response_classes()
    inputs, outcomes = class_arrays(classes)
    cnt_ac, cnt_ab, par0 = response_tables(inputs, outcomes)
    totals = exhaustive_totals(cnt_ac, cnt_ab, par0)

    best_total = int(totals.min())
    alpha, alpha_p = (int(v) for v in np.unravel_index(np.argmin(totals), totals.shape))
    gamma = int(np.argmin(cnt_ac[alpha]))
    best = None
    m = len(classes)
    ab_row = cnt_ab[alpha].astype(np.int64)
    for gamma_p in range(m):
        t0s = ab_row + par0[alpha_p, :, gamma_p]
        t1s = ab_row + 8 - par0[alpha_p, :, gamma_p]
        cand = (int(t0s.min()) + int(t1s.min()), int(np.argmin(t0s)), int(np.argmin(t1s)), gamma_p)
        if best is None or cand[0] < best[0]:
            best = cand
    assert best is not None
    _, beta_b, beta_bp, gamma_p = best
    network = materialize_network(
        config.counts, classes, (alpha, alpha_p, beta_b, beta_bp, gamma, gamma_p)
    )
    _require_valid(network)
    value = Fraction(best_total, 64)
    achieved = network_expectation(network)
    if achieved != value:
        raise AssertionError(
            f"reconstructed network achieves {achieved}, tables promised {value}"
        )
    violations: list[str] = []
    if value < BOUND:
        _record_violation(violations, network, value)
    histogram = Counter(Fraction(int(t), 64) for t in totals.ravel())
    return SearchResult(
        best_value=value,
        best_network=network,
        histogram=dict(histogram),
        evaluations=totals.size,
        mode="exhaustive",
        label="exhaustive over canonical forms",
        violations=violations,
    )


def _random_search(config: SearchConfig) -> SearchResult:
    rng = random.Random(config.seed)
    histogram: Counter[Fraction] = Counter()
    violations: list[str] = []
    best_value: Fraction | None = None
    best_network: NetworkStrategy | None = None
    for _ in range(config.budget):
        network = sample_random_network(config.counts, rng.getrandbits(48))
        value = network_expectation(network)
        histogram[value] += 1
        if value < BOUND:
            _record_violation(violations, network, value)
        if best_value is None or value < best_value:
            best_value, best_network = value, network
    assert best_value is not None and best_network is not None
    return SearchResult(
        best_value=best_value,
        best_network=best_network,
        histogram=dict(histogram),
        evaluations=config.budget,
        mode="random",
        label="best of random sample",
        violations=violations,
    )


# ---------------------------------------------------------------------------
# local search: strict-improvement hill climbing with restarts


def _node_paths(tree: DecisionNode | None) -> list[tuple[int, ...]]:
    paths: list[tuple[int, ...]] = []

    def rec(node: DecisionNode | None, path: tuple[int, ...]) -> None:
        if node is None:
            return
        paths.append(path)
        rec(node.on0, path + (0,))
        rec(node.on1, path + (1,))

    rec(tree, ())
    return paths


def _boxes_above(tree: DecisionNode, path: tuple[int, ...]):
    boxes = []
    node = tree
    for branch in path:
        boxes.append(node.box)
        node = node.child(branch)
    return boxes, node


def _edit_at(node: DecisionNode, path: tuple[int, ...], replacement: DecisionNode) -> DecisionNode:
    if not path:
        return replacement
    if path[0] == 0:
        return DecisionNode(node.box, node.input, _edit_at(node.on0, path[1:], replacement), node.on1)
    return DecisionNode(node.box, node.input, node.on0, _edit_at(node.on1, path[1:], replacement))


def _mutate(network: NetworkStrategy, rng: random.Random) -> NetworkStrategy:
    counts = network.counts
    party = Party(rng.randrange(3))
    setting = rng.randrange(2)
    strat = network.party(party)
    move = rng.choice(("flip-output", "flip-input", "swap-children", "reroot"))
    trees = list(strat.trees)
    outputs = [list(t) for t in strat.outputs]
    if move == "flip-output" or trees[setting] is None:
        w = rng.randrange(len(outputs[setting]))
        outputs[setting][w] ^= 1
    else:
        tree = trees[setting]
        path = rng.choice(_node_paths(tree))
        _, node = _boxes_above(tree, path)
        if move == "flip-input":
            new_node = DecisionNode(node.box, node.input ^ 1, node.on0, node.on1)
        elif move == "swap-children":
            new_node = DecisionNode(node.box, node.input, node.on1, node.on0)
        else:  # reroot: fresh random subtree over the boxes not yet visited
            above, _ = _boxes_above(tree, path)
            remaining = [b for b in owned_boxes(counts, party) if b not in above]
            new_node = _random_tree(rng, remaining)
        trees[setting] = _edit_at(tree, path, new_node)
    parties = list(network.parties)
    parties[int(party)] = PartyStrategy(tuple(trees), tuple(tuple(t) for t in outputs))
    return NetworkStrategy(counts, tuple(parties))  # type: ignore[arg-type]


def _local_search(config: SearchConfig, start_network: NetworkStrategy | None) -> SearchResult:
    rng = random.Random(config.seed)
    histogram: Counter[Fraction] = Counter()
    violations: list[str] = []
    current = start_network or sample_random_network(config.counts, rng.getrandbits(48))
    current_value = network_expectation(current)
    best_value, best_network = current_value, current
    histogram[current_value] += 1
    evaluations = 1
    plateau = 0
    max_plateau = 50
    while evaluations < config.budget:
        candidate = _mutate(current, rng)
        value = network_expectation(candidate)
        evaluations += 1
        histogram[value] += 1
        if value < BOUND:
            _record_violation(violations, candidate, value)
        if value < current_value:
            current, current_value = candidate, value
            plateau = 0
            if value < best_value:
                best_value, best_network = value, candidate
        else:
            plateau += 1
            if plateau >= max_plateau:
                current = sample_random_network(config.counts, rng.getrandbits(48))
                current_value = network_expectation(current)
                evaluations += 1
                histogram[current_value] += 1
                plateau = 0
    return SearchResult(
        best_value=best_value,
        best_network=best_network,
        histogram=dict(histogram),
        evaluations=evaluations,
        mode="local",
        label="best of hill-climbing with restarts",
        violations=violations,
    )
