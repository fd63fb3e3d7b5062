"""Observable behaviors P(ABC|XYZ) and their no-signaling audit.

A Behavior is the 8x8 table of conditional outcome probabilities over
settings {a,a'}x{b,b'}x{c,c'} and outcomes {0,+}^3. Two arithmetic modes
exist and are declared per instance: "exact" tables hold Fractions
(network-induced behaviors, LP inputs) and "float" tables hold floats
(the quantum table, empirical frequencies). Comparisons that mix modes
promote exact values to float and use a 1e-12 tolerance.

Index conventions: settings index xyz = x<<2 | y<<1 | z and outcome index
abc = A<<2 | B<<1 | C with '+' encoded as 1. Display labels follow the
unprimed/primed symbols, e.g. xyz=0b010 -> "ab'c", abc=0b101 -> "+0+".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .boxes import pr_determined_output
from .joint import (
    DEFAULT_ORDERING,
    Ordering,
    build_joint,
    _require_valid,
)
from .strategy import (
    BoxRef,
    NetworkStrategy,
    Party,
    join_own_word,
    n_own,
    slot_of_box,
    walk_dynamic,
)

FLOAT_TOL = 1e-12

SETTING_NAMES = ("a", "b", "c")
PARTY_NAMES = ("A", "B", "C")

RNG_NAME = "numpy.random.Philox(4x64-10)"


def setting_label(xyz: int) -> str:
    bits = ((xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1)
    return "".join(s + ("'" if b else "") for s, b in zip(SETTING_NAMES, bits))


def outcome_label(abc: int) -> str:
    bits = ((abc >> 2) & 1, (abc >> 1) & 1, abc & 1)
    return "".join("+" if b else "0" for b in bits)


def parse_setting_label(label: str) -> int:
    out = 0
    pos = 0
    for i, s in enumerate(SETTING_NAMES):
        if pos >= len(label) or label[pos] != s:
            raise ValueError(f"bad setting label {label!r}")
        pos += 1
        primed = pos < len(label) and label[pos] == "'"
        if primed:
            pos += 1
        out |= int(primed) << (2 - i)
    if pos != len(label):
        raise ValueError(f"bad setting label {label!r}")
    return out


def parse_outcome_label(label: str) -> int:
    if len(label) != 3 or any(ch not in "+0" for ch in label):
        raise ValueError(f"bad outcome label {label!r}")
    return sum((label[i] == "+") << (2 - i) for i in range(3))


# Conventional table layout: rows by setting, columns +++ .. 000.
ROW_ORDER = tuple(range(8))
COLUMN_ORDER = tuple(range(7, -1, -1))


@dataclass
class Behavior:
    mode: str
    table: list[list[Fraction | float]]
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode not in ("exact", "float"):
            raise ValueError(f"mode must be 'exact' or 'float', got {self.mode!r}")
        if len(self.table) != 8 or any(len(row) != 8 for row in self.table):
            raise ValueError("behavior table must be 8 settings x 8 outcomes")
        for row in self.table:
            if any(p < 0 for p in row):
                raise ValueError("negative probability in behavior table")
            total = sum(row)
            if self.mode == "exact":
                if total != 1:
                    raise ValueError(f"row does not sum to 1 exactly: {total}")
            elif abs(total - 1.0) > FLOAT_TOL:
                raise ValueError(f"row sums to {total}, beyond tolerance")

    def prob(self, xyz: int, abc: int) -> Fraction | float:
        return self.table[xyz][abc]

    def event(self, xyz: int, predicate: Callable[[int, int, int], bool]) -> Fraction | float:
        """Probability of an outcome predicate (A, B, C bits) given settings."""
        zero = Fraction(0) if self.mode == "exact" else 0.0
        return sum(
            (
                self.table[xyz][abc]
                for abc in range(8)
                if predicate((abc >> 2) & 1, (abc >> 1) & 1, abc & 1)
            ),
            zero,
        )


def values_equal(a: Fraction | float, b: Fraction | float, exact: bool) -> bool:
    if exact:
        return a == b
    return abs(float(a) - float(b)) <= FLOAT_TOL


def mix(b1: Behavior, b2: Behavior, lam: Fraction) -> Behavior:
    """Convex mixture lam*b1 + (1-lam)*b2; exact when both inputs are."""
    if not 0 <= lam <= 1:
        raise ValueError("mixture weight must lie in [0, 1]")
    if b1.mode == b2.mode == "exact":
        mode: str = "exact"
        table = [
            [lam * b1.table[s][o] + (1 - lam) * b2.table[s][o] for o in range(8)]
            for s in range(8)
        ]
    else:
        mode = "float"
        w = float(lam)
        table = [
            [w * float(b1.table[s][o]) + (1 - w) * float(b2.table[s][o]) for o in range(8)]
            for s in range(8)
        ]
    return Behavior(mode, table, {"mixture": True})


# ---------------------------------------------------------------------------
# induced (exact) behavior


def _outcome_index(network: NetworkStrategy, settings: tuple[int, int, int], words: list[int]) -> int:
    abc = 0
    for party in Party:
        bit = network.party(party).outputs[settings[int(party)]][words[int(party)]]
        abc |= bit << (2 - int(party))
    return abc


def induced_behavior(
    network: NetworkStrategy,
    ordering: Ordering = DEFAULT_ORDERING,
    use_kernel: bool = True,
) -> Behavior:
    """Exact behavior induced by a network: joint support pushed through
    the output tables, aggregated per setting triple.

    The kernel path counts outcomes over the 2^(n_ab+n_ac+n_bc) equally
    weighted free assignments with integer arithmetic, so exactness is
    preserved; the pure-Python path goes through `build_joint`.
    """
    _require_valid(network)
    nfree = sum(network.counts)
    if use_kernel:
        from .kernels import behavior_counts
        from .packed import pack_network

        counts = behavior_counts(pack_network(network), ordering)
        table = [
            [Fraction(int(counts[s][o]), 1 << nfree) for o in range(8)] for s in range(8)
        ]
        return Behavior("exact", table, {"ordering": "".join(p.letter for p in ordering)})
    table = []
    for xyz in range(8):
        settings = ((xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1)
        joint = build_joint(network, settings, ordering)
        row = [Fraction(0)] * 8
        for fa, p in joint.support.items():
            words = [
                join_own_word(network.counts, Party.ALICE, fa.a_b, fa.a_c),
                join_own_word(network.counts, Party.BOB, fa.b_a, fa.b_c),
                join_own_word(network.counts, Party.CHARLIE, fa.c_a, fa.c_b),
            ]
            row[_outcome_index(network, settings, words)] += p
        table.append(row)
    return Behavior("exact", table, {"ordering": "".join(p.letter for p in ordering)})


# ---------------------------------------------------------------------------
# sequential Monte Carlo oracle


def philox_words(seed: int, rounds: int) -> np.ndarray:
    """One uint64 of raw bits per round from the counter-based Philox RNG."""
    gen = np.random.Generator(np.random.Philox(key=seed))
    return gen.integers(0, 2**64, size=rounds, dtype=np.uint64)


def simulate_rounds(
    network: NetworkStrategy,
    ordering: Ordering = DEFAULT_ORDERING,
    rounds: int = 10**6,
    seed: int = 0,
    use_kernel: bool = True,
) -> Behavior:
    """Empirical behavior from sequential rounds.

    Per round one 64-bit word supplies, from the low bits up: the setting
    triple (bits 2,1,0 for x,y,z — all eight triples equiprobable), then
    one bit per free box output in walk order (first party's whole walk,
    then the second party's boxes shared with the third). Forced outputs
    follow the PR rule. The bit budget and consumption order are identical
    across the numba, numpy, and pure-Python paths, so tallies are
    bit-reproducible for a given seed.
    """
    if rounds <= 0:
        raise ValueError("rounds must be positive")
    _require_valid(network)
    words = philox_words(seed, rounds)
    if use_kernel:
        from .kernels import mc_counts
        from .packed import pack_network

        counts, per_setting = mc_counts(pack_network(network), ordering, words)
    else:
        counts, per_setting = _simulate_reference(network, ordering, words)
    table = []
    for xyz in range(8):
        n = int(per_setting[xyz])
        table.append([int(counts[xyz][o]) / n if n else 0.0 for o in range(8)])
    meta = {
        "rng": RNG_NAME,
        "seed": seed,
        "rounds": rounds,
        "ordering": "".join(p.letter for p in ordering),
        "per_setting_rounds": [int(v) for v in per_setting],
    }
    return Behavior("float", table, meta)


def _simulate_reference(
    network: NetworkStrategy, ordering: Ordering, words: np.ndarray
) -> tuple[list[list[int]], list[int]]:
    """Pure-Python round loop; the readable reference the kernels must match."""
    counts = [[0] * 8 for _ in range(8)]
    per_setting = [0] * 8
    p1, p2, p3 = ordering
    net_counts = network.counts
    for w64 in words:
        w = int(w64)
        xyz = w & 7
        settings = ((xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1)
        k = 3
        inputs: dict[tuple[Party, BoxRef], int] = {}
        outputs: dict[tuple[Party, BoxRef], int] = {}
        own_words = [0, 0, 0]

        def run(party: Party, free_counterparts: tuple[Party, ...]) -> None:
            nonlocal k
            width = n_own(net_counts, party)

            def resolve(box: BoxRef, inp: int) -> int:
                nonlocal k
                if box.counterpart in free_counterparts:
                    out = (w >> k) & 1
                    k += 1
                else:
                    key = (box.counterpart, BoxRef(party, box.index))
                    out = pr_determined_output(outputs[key], inp, inputs[key])
                inputs[(party, box)] = inp
                outputs[(party, box)] = out
                own_words[int(party)] |= out << (width - 1 - slot_of_box(net_counts, party, box))
                return out

            walk_dynamic(network.party(party).trees[settings[int(party)]], resolve)

        run(p1, (p2, p3))
        run(p2, (p3,))
        run(p3, ())
        abc = _outcome_index(network, settings, own_words)
        counts[xyz][abc] += 1
        per_setting[xyz] += 1
    return counts, per_setting


# ---------------------------------------------------------------------------
# no-signaling audit


class NoSignalingReport:
    def __init__(self, violations: list[str]):
        self.violations = violations

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _single_marginal(behavior: Behavior, party: int, xyz: int, outcome: int):
    return behavior.event(xyz, lambda *bits: bits[party] == outcome)


def _pair_marginal(behavior: Behavior, parties: tuple[int, int], xyz: int, outs: tuple[int, int]):
    i, j = parties
    return behavior.event(xyz, lambda *bits: bits[i] == outs[0] and bits[j] == outs[1])


def check_no_signaling(behavior: Behavior, exact: bool | None = None) -> NoSignalingReport:
    """Audit every standard (3,2,2) no-signaling equality.

    Single-party marginals must not depend on the two remote settings and
    two-party marginals must not depend on the one remote setting. Exact
    behaviors are compared with rational equality, float behaviors within
    1e-12. Each violated equality is reported by name.
    """
    if exact is None:
        exact = behavior.mode == "exact"
    violations: list[str] = []
    for party in range(3):
        remotes = [q for q in range(3) if q != party]
        for own_setting in (0, 1):
            for outcome in (0, 1):
                seen: dict[tuple[int, int], Fraction | float] = {}
                for r0 in (0, 1):
                    for r1 in (0, 1):
                        bits = [0, 0, 0]
                        bits[party] = own_setting
                        bits[remotes[0]], bits[remotes[1]] = r0, r1
                        xyz = bits[0] << 2 | bits[1] << 1 | bits[2]
                        seen[(r0, r1)] = _single_marginal(behavior, party, xyz, outcome)
                base = seen[(0, 0)]
                for key, value in seen.items():
                    if not values_equal(base, value, exact):
                        own = SETTING_NAMES[party] + ("'" if own_setting else "")
                        violations.append(
                            f"P({PARTY_NAMES[party]}={'+' if outcome else '0'}|{own}) depends on "
                            f"remote settings: {base} at remotes (0,0) vs {value} at remotes {key}"
                        )
    for i in range(3):
        for j in range(i + 1, 3):
            third = next(q for q in range(3) if q not in (i, j))
            for si in (0, 1):
                for sj in (0, 1):
                    for oi in (0, 1):
                        for oj in (0, 1):
                            vals = []
                            for st in (0, 1):
                                bits = [0, 0, 0]
                                bits[i], bits[j], bits[third] = si, sj, st
                                xyz = bits[0] << 2 | bits[1] << 1 | bits[2]
                                vals.append(_pair_marginal(behavior, (i, j), xyz, (oi, oj)))
                            if not values_equal(vals[0], vals[1], exact):
                                pair = PARTY_NAMES[i] + PARTY_NAMES[j]
                                own = (
                                    SETTING_NAMES[i] + ("'" if si else ""),
                                    SETTING_NAMES[j] + ("'" if sj else ""),
                                )
                                violations.append(
                                    f"P({pair}={'+' if oi else '0'}{'+' if oj else '0'}|{own[0]}{own[1]}) "
                                    f"depends on {PARTY_NAMES[third]}'s setting: "
                                    f"{vals[0]} vs {vals[1]}"
                                )
    return NoSignalingReport(violations)


# ---------------------------------------------------------------------------
# serialization


def behavior_to_json(behavior: Behavior) -> dict:
    entries = {}
    for xyz in range(8):
        for abc in range(8):
            key = f"{setting_label(xyz)}|{outcome_label(abc)}"
            p = behavior.table[xyz][abc]
            if behavior.mode == "exact":
                entries[key] = f"{p.numerator}/{p.denominator}"
            else:
                entries[key] = float(p)
    return {"mode": behavior.mode, "entries": entries, "meta": behavior.meta}


def behavior_from_json(doc: dict) -> Behavior:
    mode = doc["mode"]
    table: list[list[Fraction | float]] = [[None] * 8 for _ in range(8)]  # type: ignore[list-item]
    for key, value in doc["entries"].items():
        s_label, _, o_label = key.partition("|")
        xyz = parse_setting_label(s_label)
        abc = parse_outcome_label(o_label)
        table[xyz][abc] = Fraction(value) if mode == "exact" else float(value)
    if any(v is None for row in table for v in row):
        raise ValueError("behavior JSON does not cover all 64 entries")
    return Behavior(mode, table, doc.get("meta", {}))


def behavior_to_csv(behavior: Behavior) -> str:
    """Table layout matching the quantum-table presentation: one row per
    setting triple, outcome columns from +++ down to 000."""
    header = "setting," + ",".join(outcome_label(abc) for abc in COLUMN_ORDER)
    lines = [header]
    for xyz in ROW_ORDER:
        cells = []
        for abc in COLUMN_ORDER:
            p = behavior.table[xyz][abc]
            if behavior.mode == "exact":
                cells.append(f"{p.numerator}/{p.denominator}")
            else:
                cells.append(repr(float(p)))
        lines.append(setting_label(xyz) + "," + ",".join(cells))
    return "\n".join(lines) + "\n"


def save_behavior(behavior: Behavior, path: str | Path) -> None:
    Path(path).write_text(json.dumps(behavior_to_json(behavior), indent=1) + "\n")


def load_behavior(path: str | Path) -> Behavior:
    return behavior_from_json(json.loads(Path(path).read_text()))
