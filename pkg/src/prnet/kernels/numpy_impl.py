"""Vectorized pure-numpy backend (fallback when numba is unavailable)."""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def _walk_vec(
    p, setting, mode, free_words, free_width, free_pair, stream_w, stream_k,
    n_own, slot_box, slot_side, slot_pair, slot_index,
    roots, node_slot, node_input, child0, child1,
    in_rec, out_rec,
):
    """Advance every lane one party-walk. Lanes are assignments or rounds.

    mode 0: outputs from free_words by own slot; mode 1: pair free_pair
    outputs from free_words by box index, others forced; mode 2: all
    forced; modes 10/11/12: as 0/1/2 but free outputs come from the bit
    stream stream_w at per-lane positions stream_k (consumed in walk order).
    """
    lanes = free_words.shape[0] if mode < 10 else stream_w.shape[0]
    idx = np.arange(lanes)
    node = np.full(lanes, roots[p, setting], dtype=np.int64)
    n = int(n_own[p])
    oword = np.zeros(lanes, dtype=np.int64)
    for _ in range(n):
        slot = node_slot[node]
        inp = node_input[node]
        box = slot_box[p, slot]
        side = slot_side[p, slot]
        other = 1 - side
        forced = out_rec[box, other, idx] ^ (inp & in_rec[box, other, idx])
        if mode in (0, 10):
            free_mask = np.ones(lanes, dtype=bool)
        elif mode in (1, 11):
            free_mask = slot_pair[p, slot] == free_pair
        else:
            free_mask = np.zeros(lanes, dtype=bool)
        if mode < 10:
            if mode == 0:
                shift = n - 1 - slot
            else:
                shift = np.maximum(free_width - 1 - slot_index[p, slot], 0)
            free_out = (free_words >> shift) & 1
        else:
            free_out = (stream_w >> stream_k) & 1
            stream_k = stream_k + free_mask
        out = np.where(free_mask, free_out, forced)
        in_rec[box, side, idx] = inp
        out_rec[box, side, idx] = out
        oword |= out << (n - 1 - slot)
        node = np.where(out == 1, child1[node], child0[node])
    return oword, stream_k


def _outcome_indices(owords, sett, table_off, out_bits):
    abc = np.zeros(owords[0].shape[0], dtype=np.int64)
    for p in range(3):
        bits = out_bits[table_off[p, sett[p]] + owords[p]].astype(np.int64)
        abc |= bits << (2 - p)
    return abc


def behavior_counts(
    counts3, n_own, slot_box, slot_side, slot_pair, slot_index,
    roots, node_slot, node_input, child0, child1,
    table_off, out_bits, ordering,
):
    p1, p2, p3 = int(ordering[0]), int(ordering[1]), int(ordering[2])
    pair23 = min(p2, p3) + max(p2, p3) - 1
    n1 = int(n_own[p1])
    n23 = int(counts3[pair23])
    nfree = n1 + n23
    nboxes = max(int(counts3.sum()), 1)
    lanes = 1 << nfree
    free = np.arange(lanes, dtype=np.int64)
    w1 = free >> n23
    w23 = free & ((1 << n23) - 1)
    result = np.zeros((8, 8), dtype=np.int64)
    for xyz in range(8):
        sett = ((xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1)
        in_rec = np.zeros((nboxes, 2, lanes), dtype=np.int64)
        out_rec = np.zeros((nboxes, 2, lanes), dtype=np.int64)
        owords = [None, None, None]
        owords[p1], _ = _walk_vec(
            p1, sett[p1], 0, w1, 0, -1, None, None,
            n_own, slot_box, slot_side, slot_pair, slot_index,
            roots, node_slot, node_input, child0, child1, in_rec, out_rec,
        )
        owords[p2], _ = _walk_vec(
            p2, sett[p2], 1, w23, n23, pair23, None, None,
            n_own, slot_box, slot_side, slot_pair, slot_index,
            roots, node_slot, node_input, child0, child1, in_rec, out_rec,
        )
        owords[p3], _ = _walk_vec(
            p3, sett[p3], 2, w23, 0, -1, None, None,
            n_own, slot_box, slot_side, slot_pair, slot_index,
            roots, node_slot, node_input, child0, child1, in_rec, out_rec,
        )
        abc = _outcome_indices(owords, sett, table_off, out_bits)
        result[xyz] = np.bincount(abc, minlength=8)
    return result


def mc_counts(
    counts3, n_own, slot_box, slot_side, slot_pair, slot_index,
    roots, node_slot, node_input, child0, child1,
    table_off, out_bits, ordering, words,
):
    p1, p2, p3 = int(ordering[0]), int(ordering[1]), int(ordering[2])
    pair23 = min(p2, p3) + max(p2, p3) - 1
    nboxes = max(int(counts3.sum()), 1)
    counts = np.zeros((8, 8), dtype=np.int64)
    per_setting = np.zeros(8, dtype=np.int64)
    xyz_all = (words & 7).astype(np.int64)
    # Walks branch on each party's setting; process the 8 setting groups.
    for xyz in range(8):
        mask = xyz_all == xyz
        w = words[mask]
        lanes = w.shape[0]
        if lanes == 0:
            continue
        sett = ((xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1)
        k = np.full(lanes, 3, dtype=np.int64)
        in_rec = np.zeros((nboxes, 2, lanes), dtype=np.int64)
        out_rec = np.zeros((nboxes, 2, lanes), dtype=np.int64)
        owords = [None, None, None]
        owords[p1], k = _walk_vec(
            p1, sett[p1], 10, None, 0, -1, w, k,
            n_own, slot_box, slot_side, slot_pair, slot_index,
            roots, node_slot, node_input, child0, child1, in_rec, out_rec,
        )
        owords[p2], k = _walk_vec(
            p2, sett[p2], 11, None, 0, pair23, w, k,
            n_own, slot_box, slot_side, slot_pair, slot_index,
            roots, node_slot, node_input, child0, child1, in_rec, out_rec,
        )
        owords[p3], k = _walk_vec(
            p3, sett[p3], 12, None, 0, -1, w, k,
            n_own, slot_box, slot_side, slot_pair, slot_index,
            roots, node_slot, node_input, child0, child1, in_rec, out_rec,
        )
        abc = _outcome_indices(owords, sett, table_off, out_bits)
        counts[xyz] = np.bincount(abc, minlength=8)
        per_setting[xyz] = lanes
    return counts, per_setting


def response_tables(inputs, outcomes):
    m = inputs.shape[0]
    inputs = inputs.astype(np.int8)
    outcomes = outcomes.astype(np.int8)
    cnt_ac = np.zeros((m, m), dtype=np.int16)
    cnt_ab = np.zeros((m, m), dtype=np.int16)
    par0 = np.zeros((m, m, m), dtype=np.int8)
    col = np.arange(m)
    for free in range(8):
        a_b = (free >> 2) & 1
        c_a = (free >> 1) & 1
        c_b = free & 1
        wc = (c_a << 1) | c_b
        u_ca = (inputs[:, wc] >> 1) & 1
        u_cb = inputs[:, wc] & 1
        bit_c = outcomes[:, wc]
        u_ac = inputs[:, a_b << 1] & 1
        a_c = c_a ^ (u_ac[:, None] & u_ca[None, :])  # (alpha, gamma)
        wa = (a_b << 1) | a_c
        bit_a = outcomes[col[:, None], wa]
        cnt_ac += (bit_a != bit_c[None, :]).astype(np.int16)

        # A != B table reads the same free triple as (b_a, b_c, a_c).
        b_a, b_c, a_c2 = a_b, c_a, c_b
        wb = (b_a << 1) | b_c
        u_ba = (inputs[:, wb] >> 1) & 1
        bit_b = outcomes[:, wb]
        u_ab2 = (inputs[:, a_c2] >> 1) & 1
        a_b2 = b_a ^ (u_ab2[:, None] & u_ba[None, :])  # (alpha, beta)
        wa2 = (a_b2 << 1) | a_c2
        bit_a2 = outcomes[col[:, None], wa2]
        cnt_ab += (bit_a2 != bit_b[None, :]).astype(np.int16)

        # Parity table: axes (alpha, beta, gamma).
        u_ab = (inputs[col[:, None], wa] >> 1) & 1  # (alpha, gamma)
        bit_b3 = np.zeros((m, m, m), dtype=np.int8)
        resolved = np.zeros((m, m, m), dtype=bool)
        for cand in range(4):
            cb_a = (cand >> 1) & 1
            cb_c = cand & 1
            u_ba3 = (inputs[:, cand] >> 1) & 1
            u_bc3 = inputs[:, cand] & 1
            ok_a = cb_a == (a_b ^ (u_ba3[None, :, None] & u_ab[:, None, :]))
            ok_c = cb_c == (c_b ^ (u_bc3[:, None] & u_cb[None, :]))  # (beta, gamma)
            ok = ok_a & ok_c[None, :, :] & ~resolved
            bit_b3 += ok * outcomes[:, cand][None, :, None]
            resolved |= ok
        parity = bit_a[:, None, :] ^ bit_b3 ^ bit_c[None, None, :]
        par0 += (parity == 0).astype(np.int8)
    return cnt_ac, cnt_ab, par0


def exhaustive_totals(cnt_ac, cnt_ab, par0):
    m = cnt_ac.shape[0]
    totals = np.zeros((m, m), dtype=np.int64)
    min_ac = cnt_ac.min(axis=1).astype(np.int64)
    ab = cnt_ab.astype(np.int16)
    p16 = par0.astype(np.int16)
    for alpha in range(m):
        row = ab[alpha][None, :, None]  # broadcast over (alpha', beta, gamma')
        t0 = (row + p16).min(axis=1)  # (alpha', gamma')
        t1 = (row + 8 - p16).min(axis=1)
        totals[alpha, :] = 4 * min_ac[alpha] + (t0 + t1).min(axis=1).astype(np.int64)
    return totals
