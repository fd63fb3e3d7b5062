"""Bell score table, E(F), the bound, and the quantum violating table."""

import math
from fractions import Fraction

from prnet.behavior import (
    check_no_signaling,
    induced_behavior,
    mix,
    parse_outcome_label,
    parse_setting_label,
)
from prnet.bell import (
    C_VALUE,
    QUANTUM_EXPECTATION,
    S_VALUE,
    bell_expectation,
    bell_score,
    check_inequality,
    network_expectation,
    quantum_behavior,
    quantum_behavior_oracle,
    score_table,
)
from prnet.strategy import sample_random_network, trivial_network

# The printed score table, frozen: rows are settings, cells keyed by the
# outcome columns +++, ++0, +0+, +00, 0++, 0+0, 00+, 000 in that order.
PRINTED_SCORES = {
    "abc": (0, 2, 0, 2, 2, 0, 2, 0),
    "abc'": (0, 0, 1, 1, 1, 1, 0, 0),
    "ab'c": (0, 2, 0, 2, 2, 0, 2, 0),
    "ab'c'": (0, 0, 1, 1, 1, 1, 0, 0),
    "a'bc": (0, 0, 0, 0, 0, 0, 0, 0),
    "a'bc'": (0, 1, 1, 0, 1, 0, 0, 1),
    "a'b'c": (0, 0, 0, 0, 0, 0, 0, 0),
    "a'b'c'": (1, 0, 0, 1, 0, 1, 1, 0),
}
COLUMNS = ("+++", "++0", "+0+", "+00", "0++", "0+0", "00+", "000")


def test_score_cells_match_printed_table():
    for row_label, cells in PRINTED_SCORES.items():
        xyz = parse_setting_label(row_label)
        for col_label, score in zip(COLUMNS, cells):
            assert bell_score(parse_outcome_label(col_label), xyz) == score


def test_score_examples():
    assert bell_score(parse_outcome_label("++0"), parse_setting_label("abc")) == 2
    assert bell_score(parse_outcome_label("+++"), parse_setting_label("abc")) == 0
    assert bell_score(parse_outcome_label("+00"), parse_setting_label("a'b'c'")) == 1


def test_nonzero_cells_match_condition_predicates():
    # rows with x=a, z=c score 2 exactly when A != C; x=a, z=c' score 1 when
    # A != B; a'bc' scores on an even number of '+', a'b'c' on odd; the two
    # z=c rows at x=a' are identically zero
    for xyz in range(8):
        x, y, z = (xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1
        for abc in range(8):
            a, b, c = (abc >> 2) & 1, (abc >> 1) & 1, abc & 1
            plus_count = a + b + c
            if x == 0 and z == 0:
                expected = 2 * (a != c)
            elif x == 0 and z == 1:
                expected = 1 * (a != b)
            elif z == 0:
                expected = 0
            elif y == 0:
                expected = 1 * (plus_count % 2 == 0)
            else:
                expected = 1 * (plus_count % 2 == 1)
            assert bell_score(abc, xyz) == expected


def test_trivial_strategies_attain_bound_exactly():
    plus = induced_behavior(trivial_network((1, 1, 1)))
    assert bell_expectation(plus) == Fraction(1, 8)
    zero = induced_behavior(trivial_network((1, 1, 1), outcome=0))
    assert bell_expectation(zero) == Fraction(1, 8)
    check = check_inequality(plus)
    assert check.satisfies_bound and check.margin == 0


def test_network_expectation_shortcut_matches_full_path():
    for seed in range(8):
        network = sample_random_network((1, 1, 1), seed)
        assert network_expectation(network) == bell_expectation(induced_behavior(network))


def test_quantum_constants():
    assert abs(C_VALUE + S_VALUE - 0.25) < 1e-15
    assert abs(QUANTUM_EXPECTATION - math.sin(math.pi / 8) ** 2 / 2) < 1e-15
    assert abs(QUANTUM_EXPECTATION - 0.07322330470336313) < 1e-12


def test_quantum_table_values():
    qb = quantum_behavior()
    get = lambda s, o: qb.table[parse_setting_label(s)][parse_outcome_label(o)]
    assert abs(get("abc", "+++") - 2 * C_VALUE) < 1e-15
    assert get("abc", "++0") == 0.0
    assert abs(get("abc", "+0+") - 2 * S_VALUE) < 1e-15
    assert abs(get("abc'", "+++") - C_VALUE) < 1e-15
    assert abs(get("a'b'c'", "+++") - S_VALUE) < 1e-15
    for xyz in range(8):
        assert abs(sum(qb.table[xyz]) - 1.0) < 1e-12


def test_quantum_table_matches_projector_oracle():
    qb = quantum_behavior()
    oracle = quantum_behavior_oracle()
    for xyz in range(8):
        for abc in range(8):
            assert abs(qb.table[xyz][abc] - oracle[xyz][abc]) <= 1e-12


def test_quantum_is_nonsignaling_and_violates_bound():
    qb = quantum_behavior()
    assert check_no_signaling(qb).ok
    value = bell_expectation(qb)
    assert abs(value - QUANTUM_EXPECTATION) <= 1e-12
    check = check_inequality(qb)
    assert not check.satisfies_bound
    assert abs(check.margin - (0.125 - QUANTUM_EXPECTATION)) <= 1e-12


def test_expectation_affine_in_behavior():
    b1 = induced_behavior(sample_random_network((1, 1, 1), 4))
    b2 = induced_behavior(sample_random_network((1, 1, 1), 9))
    for lam in (Fraction(1, 3), Fraction(2, 5), Fraction(7, 8)):
        mixed = mix(b1, b2, lam)
        assert bell_expectation(mixed) == lam * bell_expectation(b1) + (1 - lam) * bell_expectation(b2)


def test_score_table_shape():
    table = score_table()
    assert len(table) == 8 and all(len(r) == 8 for r in table)
    # two rows of four 2s, four rows of four 1s, two empty rows
    assert sum(sum(r) for r in table) == 2 * 8 + 4 * 4
