"""Flat array form of a network for the numeric kernels.

Trees become parallel node arrays (slot, input, child0, child1) with -1 as
the leaf pointer; output tables become one flat uint8 array addressed by
``table_off[party, setting] + own_word``. Boxes get global ids: pair AB
occupies ids [0, n_ab), AC the next n_ac, BC the last n_bc; ``slot_box``
and ``slot_side`` map a party's own slot to its global box id and to which
side of the pair the party sits on (side 0 = the party listed first).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .strategy import (
    DecisionNode,
    NetworkStrategy,
    Party,
    box_of_slot,
    n_own,
    pair_id,
    slot_of_box,
)


@dataclass(frozen=True)
class PackedNetwork:
    counts: np.ndarray  # (3,) pair box counts, int64
    n_own: np.ndarray  # (3,) int64
    slot_box: np.ndarray  # (3, max_own) int64, global box id per own slot
    slot_side: np.ndarray  # (3, max_own) int64
    slot_pair: np.ndarray  # (3, max_own) int64, pair id per own slot
    slot_index: np.ndarray  # (3, max_own) int64, index within the pair
    roots: np.ndarray  # (3, 2) int64, root node index or -1
    node_slot: np.ndarray  # (n_nodes,) int64
    node_input: np.ndarray  # (n_nodes,) int64
    node_child0: np.ndarray  # (n_nodes,) int64, -1 = leaf
    node_child1: np.ndarray  # (n_nodes,) int64
    table_off: np.ndarray  # (3, 2) int64
    out_bits: np.ndarray  # (total_rows,) uint8

    @property
    def n_boxes(self) -> int:
        return int(self.counts.sum())


def _flatten_tree(
    tree: DecisionNode | None,
    counts,
    party: Party,
    node_slot: list[int],
    node_input: list[int],
    child0: list[int],
    child1: list[int],
) -> int:
    if tree is None:
        return -1
    idx = len(node_slot)
    node_slot.append(slot_of_box(counts, party, tree.box))
    node_input.append(tree.input)
    child0.append(-2)
    child1.append(-2)
    child0[idx] = _flatten_tree(tree.on0, counts, party, node_slot, node_input, child0, child1)
    child1[idx] = _flatten_tree(tree.on1, counts, party, node_slot, node_input, child0, child1)
    return idx


def pack_network(network: NetworkStrategy) -> PackedNetwork:
    counts = network.counts
    owns = [n_own(counts, p) for p in Party]
    max_own = max(owns) if max(owns) > 0 else 1
    slot_box = np.zeros((3, max_own), dtype=np.int64)
    slot_side = np.zeros((3, max_own), dtype=np.int64)
    slot_pair = np.zeros((3, max_own), dtype=np.int64)
    slot_index = np.zeros((3, max_own), dtype=np.int64)
    pair_base = [0, counts[0], counts[0] + counts[1]]
    for p in Party:
        for s in range(owns[int(p)]):
            box = box_of_slot(counts, p, s)
            pid = pair_id(p, box.counterpart)
            slot_pair[int(p), s] = pid
            slot_index[int(p), s] = box.index
            slot_box[int(p), s] = pair_base[pid] + box.index
            slot_side[int(p), s] = 0 if p < box.counterpart else 1

    node_slot: list[int] = []
    node_input: list[int] = []
    child0: list[int] = []
    child1: list[int] = []
    roots = np.full((3, 2), -1, dtype=np.int64)
    for p in Party:
        for setting in (0, 1):
            roots[int(p), setting] = _flatten_tree(
                network.party(p).trees[setting], counts, p,
                node_slot, node_input, child0, child1,
            )

    table_off = np.zeros((3, 2), dtype=np.int64)
    out_chunks: list[np.ndarray] = []
    offset = 0
    for p in Party:
        for setting in (0, 1):
            table = network.party(p).outputs[setting]
            table_off[int(p), setting] = offset
            out_chunks.append(np.array(table, dtype=np.uint8))
            offset += len(table)

    return PackedNetwork(
        counts=np.array(counts, dtype=np.int64),
        n_own=np.array(owns, dtype=np.int64),
        slot_box=slot_box,
        slot_side=slot_side,
        slot_pair=slot_pair,
        slot_index=slot_index,
        roots=roots,
        node_slot=np.array(node_slot or [0], dtype=np.int64),
        node_input=np.array(node_input or [0], dtype=np.int64),
        node_child0=np.array(child0 or [-1], dtype=np.int64),
        node_child1=np.array(child1 or [-1], dtype=np.int64),
        table_off=table_off,
        out_bits=np.concatenate(out_chunks) if out_chunks else np.zeros(0, dtype=np.uint8),
    )
