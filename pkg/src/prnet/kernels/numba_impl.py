"""numba backend: per-assignment / per-round compiled loops."""

from __future__ import annotations

import numpy as np
from numba import njit

BACKEND = "numba"


@njit(cache=True)
def _walk(
    p, setting, mode, free_word, free_width, free_pair,
    n_own, slot_box, slot_side, slot_pair, slot_index,
    roots, node_slot, node_input, child0, child1,
    in_rec, out_rec,
):
    # mode 0: all outputs read from free_word by own slot (first party)
    # mode 1: outputs of pair free_pair read from free_word by box index,
    #         the rest forced by the PR rule (second party)
    # mode 2: all outputs forced (third party)
    node = roots[p, setting]
    n = n_own[p]
    oword = 0
    while node != -1:
        slot = node_slot[node]
        inp = node_input[node]
        box = slot_box[p, slot]
        side = slot_side[p, slot]
        if mode == 0:
            out = (free_word >> (n - 1 - slot)) & 1
        elif mode == 1 and slot_pair[p, slot] == free_pair:
            out = (free_word >> (free_width - 1 - slot_index[p, slot])) & 1
        else:
            other = 1 - side
            out = out_rec[box, other] ^ (inp & in_rec[box, other])
        in_rec[box, side] = inp
        out_rec[box, side] = out
        oword |= out << (n - 1 - slot)
        if out == 1:
            node = child1[node]
        else:
            node = child0[node]
    return oword


@njit(cache=True)
def behavior_counts(
    counts3, n_own, slot_box, slot_side, slot_pair, slot_index,
    roots, node_slot, node_input, child0, child1,
    table_off, out_bits, ordering,
):
    p1, p2, p3 = ordering[0], ordering[1], ordering[2]
    pair23 = min(p2, p3) + max(p2, p3) - 1
    n1 = n_own[p1]
    n23 = counts3[pair23]
    nfree = n1 + n23
    nboxes = counts3[0] + counts3[1] + counts3[2]
    in_rec = np.zeros((max(nboxes, 1), 2), dtype=np.int64)
    out_rec = np.zeros((max(nboxes, 1), 2), dtype=np.int64)
    result = np.zeros((8, 8), dtype=np.int64)
    sett = np.zeros(3, dtype=np.int64)
    owords = np.zeros(3, dtype=np.int64)
    for xyz in range(8):
        sett[0] = (xyz >> 2) & 1
        sett[1] = (xyz >> 1) & 1
        sett[2] = xyz & 1
        for free in range(1 << nfree):
            w1 = free >> n23
            w23 = free & ((1 << n23) - 1)
            owords[p1] = _walk(
                p1, sett[p1], 0, w1, 0, -1,
                n_own, slot_box, slot_side, slot_pair, slot_index,
                roots, node_slot, node_input, child0, child1, in_rec, out_rec,
            )
            owords[p2] = _walk(
                p2, sett[p2], 1, w23, n23, pair23,
                n_own, slot_box, slot_side, slot_pair, slot_index,
                roots, node_slot, node_input, child0, child1, in_rec, out_rec,
            )
            owords[p3] = _walk(
                p3, sett[p3], 2, 0, 0, -1,
                n_own, slot_box, slot_side, slot_pair, slot_index,
                roots, node_slot, node_input, child0, child1, in_rec, out_rec,
            )
            abc = 0
            for p in range(3):
                bit = out_bits[table_off[p, sett[p]] + owords[p]]
                abc |= bit << (2 - p)
            result[xyz, abc] += 1
    return result


@njit(cache=True)
def _walk_mc(
    p, setting, free_kind, free_pair, w, k,
    n_own, slot_box, slot_side, slot_pair, slot_index,
    roots, node_slot, node_input, child0, child1,
    in_rec, out_rec,
):
    # free_kind 0: every output is a fresh stream bit; 1: only pair
    # free_pair outputs are; 2: none are. Stream bits come from w at
    # position k upward, consumed in walk order.
    node = roots[p, setting]
    n = n_own[p]
    oword = 0
    while node != -1:
        slot = node_slot[node]
        inp = node_input[node]
        box = slot_box[p, slot]
        side = slot_side[p, slot]
        if free_kind == 0 or (free_kind == 1 and slot_pair[p, slot] == free_pair):
            out = (w >> k) & 1
            k += 1
        else:
            other = 1 - side
            out = out_rec[box, other] ^ (inp & in_rec[box, other])
        in_rec[box, side] = inp
        out_rec[box, side] = out
        oword |= out << (n - 1 - slot)
        if out == 1:
            node = child1[node]
        else:
            node = child0[node]
    return oword, k


@njit(cache=True)
def mc_counts(
    counts3, n_own, slot_box, slot_side, slot_pair, slot_index,
    roots, node_slot, node_input, child0, child1,
    table_off, out_bits, ordering, words,
):
    p1, p2, p3 = ordering[0], ordering[1], ordering[2]
    pair23 = min(p2, p3) + max(p2, p3) - 1
    nboxes = counts3[0] + counts3[1] + counts3[2]
    in_rec = np.zeros((max(nboxes, 1), 2), dtype=np.int64)
    out_rec = np.zeros((max(nboxes, 1), 2), dtype=np.int64)
    counts = np.zeros((8, 8), dtype=np.int64)
    per_setting = np.zeros(8, dtype=np.int64)
    sett = np.zeros(3, dtype=np.int64)
    owords = np.zeros(3, dtype=np.int64)
    for r in range(words.shape[0]):
        w = words[r]
        xyz = w & 7
        sett[0] = (xyz >> 2) & 1
        sett[1] = (xyz >> 1) & 1
        sett[2] = xyz & 1
        k = 3
        owords[p1], k = _walk_mc(
            p1, sett[p1], 0, -1, w, k,
            n_own, slot_box, slot_side, slot_pair, slot_index,
            roots, node_slot, node_input, child0, child1, in_rec, out_rec,
        )
        owords[p2], k = _walk_mc(
            p2, sett[p2], 1, pair23, w, k,
            n_own, slot_box, slot_side, slot_pair, slot_index,
            roots, node_slot, node_input, child0, child1, in_rec, out_rec,
        )
        owords[p3], k = _walk_mc(
            p3, sett[p3], 2, -1, w, k,
            n_own, slot_box, slot_side, slot_pair, slot_index,
            roots, node_slot, node_input, child0, child1, in_rec, out_rec,
        )
        abc = 0
        for p in range(3):
            bit = out_bits[table_off[p, sett[p]] + owords[p]]
            abc |= bit << (2 - p)
        counts[xyz, abc] += 1
        per_setting[xyz] += 1
    return counts, per_setting


@njit(cache=True)
def response_tables(inputs, outcomes):
    m = inputs.shape[0]
    cnt_ac = np.zeros((m, m), dtype=np.int16)
    cnt_ab = np.zeros((m, m), dtype=np.int16)
    par0 = np.zeros((m, m, m), dtype=np.int8)
    # A != C over free (a_b, c_a, c_b); the a_c output is forced.
    for alpha in range(m):
        for gamma in range(m):
            c = 0
            for free in range(8):
                a_b = (free >> 2) & 1
                c_a = (free >> 1) & 1
                c_b = free & 1
                wc = (c_a << 1) | c_b
                uc = inputs[gamma, wc]
                u_ca = (uc >> 1) & 1
                bit_c = outcomes[gamma, wc]
                u_ac = inputs[alpha, a_b << 1] & 1
                a_c = c_a ^ (u_ac & u_ca)
                wa = (a_b << 1) | a_c
                bit_a = outcomes[alpha, wa]
                if bit_a != bit_c:
                    c += 1
            cnt_ac[alpha, gamma] = c
    # A != B over free (b_a, b_c, a_c); the a_b output is forced.
    for alpha in range(m):
        for beta in range(m):
            c = 0
            for free in range(8):
                b_a = (free >> 2) & 1
                b_c = (free >> 1) & 1
                a_c = free & 1
                wb = (b_a << 1) | b_c
                u_ba = (inputs[beta, wb] >> 1) & 1
                bit_b = outcomes[beta, wb]
                u_ab = (inputs[alpha, a_c] >> 1) & 1
                a_b = b_a ^ (u_ab & u_ba)
                wa = (a_b << 1) | a_c
                bit_a = outcomes[alpha, wa]
                if bit_a != bit_b:
                    c += 1
            cnt_ab[alpha, beta] = c
    # A xor B xor C == 0 over free (a_b, c_a, c_b); a_c, b_a, b_c forced.
    for alpha in range(m):
        for beta in range(m):
            for gamma in range(m):
                c = 0
                for free in range(8):
                    a_b = (free >> 2) & 1
                    c_a = (free >> 1) & 1
                    c_b = free & 1
                    wc = (c_a << 1) | c_b
                    uc = inputs[gamma, wc]
                    u_ca = (uc >> 1) & 1
                    u_cb = uc & 1
                    bit_c = outcomes[gamma, wc]
                    u_ac = inputs[alpha, a_b << 1] & 1
                    a_c = c_a ^ (u_ac & u_ca)
                    wa = (a_b << 1) | a_c
                    bit_a = outcomes[alpha, wa]
                    u_ab = (inputs[alpha, wa] >> 1) & 1
                    wb = 0
                    for cand in range(4):
                        b_a = (cand >> 1) & 1
                        b_c = cand & 1
                        u_ba = (inputs[beta, cand] >> 1) & 1
                        u_bc = inputs[beta, cand] & 1
                        if b_a == a_b ^ (u_ba & u_ab) and b_c == c_b ^ (u_bc & u_cb):
                            wb = cand
                            break
                    bit_b = outcomes[beta, wb]
                    if (bit_a ^ bit_b ^ bit_c) == 0:
                        c += 1
                par0[alpha, beta, gamma] = c
    return cnt_ac, cnt_ab, par0


@njit(cache=True)
def exhaustive_totals(cnt_ac, cnt_ab, par0):
    m = cnt_ac.shape[0]
    totals = np.zeros((m, m), dtype=np.int64)
    min_ac = np.zeros(m, dtype=np.int64)
    for alpha in range(m):
        best = 8
        for gamma in range(m):
            if cnt_ac[alpha, gamma] < best:
                best = cnt_ac[alpha, gamma]
        min_ac[alpha] = best
    for alpha in range(m):
        for alpha_p in range(m):
            vbest = 1 << 30
            for gamma_p in range(m):
                t0 = 1 << 30
                t1 = 1 << 30
                for beta in range(m):
                    v0 = cnt_ab[alpha, beta] + par0[alpha_p, beta, gamma_p]
                    if v0 < t0:
                        t0 = v0
                    v1 = cnt_ab[alpha, beta] + 8 - par0[alpha_p, beta, gamma_p]
                    if v1 < t1:
                        t1 = v1
                if t0 + t1 < vbest:
                    vbest = t0 + t1
            totals[alpha, alpha_p] = 4 * min_ac[alpha] + vbest
    return totals
