"""Canonicalization soundness and the E(F) searches."""

import itertools
import random
from fractions import Fraction

import pytest

from prnet.behavior import induced_behavior
from prnet.search import (
    SearchConfig,
    canonicalize,
    enumerate_response_classes,
    materialize_network,
    materialize_tree,
    minimize_bell,
)
from prnet.strategy import (
    NetworkStrategy,
    Party,
    PartyStrategy,
    sample_random_network,
    trivial_network,
    validate,
)


def test_class_count_and_collapse_ratio():
    classes = enumerate_response_classes()
    assert len(classes) == 192
    # raw per-setting space: 16 trees x 16 tables; collapse ratio 4/3
    assert Fraction(16 * 16, len(classes)) == Fraction(4, 3)


def test_identical_strategies_identical_canonical_forms():
    net = sample_random_network((1, 1, 1), 5)
    for party in Party:
        strat = net.party(party)
        assert canonicalize(strat, net.counts, party) == canonicalize(
            strat, net.counts, party
        )


def _per_setting_raw_space():
    """All 256 raw (tree spec, table) per-setting choices of a 2-box party."""
    specs = list(itertools.product((0, 1), repeat=4))
    tables = [tuple((bits >> w) & 1 for w in range(4)) for bits in range(16)]
    return [(spec, table) for spec in specs for table in tables]


def _strategy_from_raw(raw0, raw1, counts, party):
    trees = (
        materialize_tree(raw0[0], counts, party),
        materialize_tree(raw1[0], counts, party),
    )
    return PartyStrategy(trees, (raw0[1], raw1[1]))


def test_canonicalization_soundness_on_random_pairs():
    """Equal canonical forms => exactly equal induced behavior, checked by
    embedding both strategies into shared random networks."""
    counts = (1, 1, 1)
    rng = random.Random(7)
    raw = _per_setting_raw_space()
    groups: dict = {}
    for spec, table in raw:
        strat = _strategy_from_raw((spec, table), (spec, table), counts, Party.ALICE)
        form = canonicalize(strat, counts, Party.ALICE)
        groups.setdefault(form[0], []).append((spec, table))
    multi = [g for g in groups.values() if len(g) > 1]
    assert multi, "some canonical class must collapse several raw strategies"
    pairs_checked = 0
    while pairs_checked < 200:
        group = rng.choice(multi)
        raw_a, raw_b = rng.sample(group, 2)
        other_setting = rng.choice(raw)
        strat_a = _strategy_from_raw(raw_a, other_setting, counts, Party.ALICE)
        strat_b = _strategy_from_raw(raw_b, other_setting, counts, Party.ALICE)
        assert canonicalize(strat_a, counts, Party.ALICE) == canonicalize(
            strat_b, counts, Party.ALICE
        )
        for _ in range(20 if pairs_checked < 10 else 2):
            host = sample_random_network(counts, rng.getrandbits(32))
            net_a = NetworkStrategy(counts, (strat_a, host.parties[1], host.parties[2]))
            net_b = NetworkStrategy(counts, (strat_b, host.parties[1], host.parties[2]))
            assert induced_behavior(net_a).table == induced_behavior(net_b).table
        pairs_checked += 1


def test_exhaustive_minimum_is_the_bound():
    result = minimize_bell(SearchConfig(mode="exhaustive"))
    assert result.best_value == Fraction(1, 8)
    assert result.label == "exhaustive over canonical forms"
    assert result.bound_holds
    assert validate(result.best_network).ok
    assert result.evaluations == 192 * 192
    assert min(result.histogram) == Fraction(1, 8)


def test_exhaustive_requires_reduction_and_unit_counts():
    with pytest.raises(ValueError, match="symmetry reduction"):
        SearchConfig(mode="exhaustive", symmetry_reduction=False)
    with pytest.raises(ValueError, match="counts"):
        SearchConfig(mode="exhaustive", counts=(2, 2, 2))


def test_random_mode_respects_bound():
    result = minimize_bell(SearchConfig(counts=(2, 2, 2), mode="random", budget=300, seed=3))
    assert result.best_value >= Fraction(1, 8)
    assert result.bound_holds
    assert sum(result.histogram.values()) == 300


def test_local_search_from_trivial_stays_at_bound():
    result = minimize_bell(
        SearchConfig(mode="local", budget=400, seed=1),
        start_network=trivial_network((1, 1, 1)),
    )
    assert result.best_value == Fraction(1, 8)
    assert result.bound_holds


def test_local_search_networks_stay_valid():
    result = minimize_bell(SearchConfig(mode="local", budget=150, seed=9))
    assert validate(result.best_network).ok
    assert result.best_value >= Fraction(1, 8)


def test_materialized_class_networks_validate():
    classes = enumerate_response_classes()
    rng = random.Random(0)
    for _ in range(20):
        picks = tuple(rng.randrange(len(classes)) for _ in range(6))
        assert validate(materialize_network((1, 1, 1), classes, picks)).ok
