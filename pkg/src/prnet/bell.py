"""Bell score for (3,2,2) runs, its expectation E(F), and the quantum table.

The score F assigns each (settings, outcomes) cell a nonnegative integer:
on x=a, z=c the score is 2 when A != C; on x=a, z=c' it is 1 when A != B;
on x=a', z=c' it is 1 when the number of '+' outcomes is even (y=b) or odd
(y=b'); every other cell is 0. With settings equiprobable, E(F) is the
mean score. Every behavior induced by a PR-box network satisfies
E(F) >= 1/8, and the bound is tight (the constant all-'+' strategy attains
it); the quantum behavior below sits at sin^2(pi/8)/2 ~ 0.0732, strictly
under the bound.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .behavior import FLOAT_TOL, Behavior, check_no_signaling

C_VALUE = math.cos(math.pi / 8) ** 2 / 4
S_VALUE = math.sin(math.pi / 8) ** 2 / 4
QUANTUM_EXPECTATION = 2 * S_VALUE  # = sin^2(pi/8)/2

BOUND = Fraction(1, 8)


def bell_score(abc: int, xyz: int) -> int:
    """Score of one run; outcome index abc = A<<2|B<<1|C, '+' = 1."""
    x, y, z = (xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1
    a, b, c = (abc >> 2) & 1, (abc >> 1) & 1, abc & 1
    if x == 0 and z == 0:
        return 2 if a != c else 0
    if x == 0 and z == 1:
        return 1 if a != b else 0
    if x == 1 and z == 1:
        return 1 if (a ^ b ^ c) == y else 0
    return 0


def score_table() -> list[list[int]]:
    return [[bell_score(abc, xyz) for abc in range(8)] for xyz in range(8)]


class BoundCheck(NamedTuple):
    value: Fraction | float
    satisfies_bound: bool
    margin: Fraction | float


def bell_expectation(behavior: Behavior) -> Fraction | float:
    """E(F) = (1/8) sum over settings and outcomes of P * score.

    When the behavior is nonsignaling the six-term marginal form (the A!=C
    terms collapse across Bob's setting) is computed as well and must agree
    — exactly for exact behaviors, within 1e-12 for float ones.
    """
    exact = behavior.mode == "exact"
    zero = Fraction(0) if exact else 0.0
    direct = sum(
        (behavior.table[xyz][abc] * bell_score(abc, xyz) for xyz in range(8) for abc in range(8)),
        zero,
    )
    direct = direct / 8 if exact else direct / 8.0
    if check_no_signaling(behavior).ok:
        compact = _compact_expectation(behavior)
        if exact:
            agree = compact == direct
        else:
            agree = abs(float(compact) - float(direct)) <= FLOAT_TOL
        if not agree:
            raise AssertionError(
                f"marginal form {compact} disagrees with direct sum {direct}"
            )
    return direct


def _compact_expectation(behavior: Behavior):
    """The marginal six-term form, valid for nonsignaling behaviors."""
    p_ac = behavior.event(0b000, lambda a, b, c: a != c)
    total = 4 * p_ac
    for y in (0, 1):
        total += behavior.event(0b001 | y << 1, lambda a, b, c: a != b)
        total += behavior.event(0b101 | y << 1, lambda a, b, c, y=y: (a ^ b ^ c) == y)
    return total / 8 if behavior.mode == "exact" else total / 8.0


def network_expectation(network, use_kernel: bool = True) -> Fraction:
    """Exact E(F) of a network without materializing the Behavior object.

    The kernel path turns outcome tallies (integers over a power-of-two
    denominator) directly into one Fraction; used by the searches and the
    bound property suites where many thousands of networks are scored.
    """
    from .behavior import induced_behavior
    from .joint import DEFAULT_ORDERING

    if use_kernel:
        from .kernels import behavior_counts
        from .packed import pack_network

        counts = behavior_counts(pack_network(network), DEFAULT_ORDERING)
        total = sum(
            int(counts[xyz][abc]) * bell_score(abc, xyz)
            for xyz in range(8)
            for abc in range(8)
        )
        return Fraction(total, 8 << sum(network.counts))
    return bell_expectation(induced_behavior(network, use_kernel=False))


def check_inequality(behavior: Behavior) -> BoundCheck:
    """Compare E(F) against the network bound 1/8.

    margin is the absolute distance |E(F) - 1/8|: zero for the tight
    trivial strategy, the violation size for the quantum behavior.
    """
    value = bell_expectation(behavior)
    if behavior.mode == "exact":
        satisfies = value >= BOUND
        margin = abs(value - BOUND)
    else:
        satisfies = float(value) >= float(BOUND)
        margin = abs(float(value) - float(BOUND))
    return BoundCheck(value, satisfies, margin)


# ---------------------------------------------------------------------------
# quantum behavior


def quantum_behavior_oracle() -> list[list[float]]:
    """Independent 3-qubit computation of the violating behavior.

    GHZ state (|000> + |111>)/sqrt(2); Alice and Charlie measure sigma_z
    (unprimed) or sigma_x (primed); Bob measures (sigma_z +/- sigma_x)/
    sqrt(2). Outcome '+' is the +1 eigenspace projector. Entries are
    <psi| P_A x P_B x P_C |psi>.
    """
    sz = np.array([[1.0, 0.0], [0.0, -1.0]])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    identity = np.eye(2)
    obs = {
        "A": (sz, sx),
        "B": ((sz + sx) / math.sqrt(2), (sz - sx) / math.sqrt(2)),
        "C": (sz, sx),
    }
    psi = np.zeros(8)
    psi[0] = psi[7] = 1 / math.sqrt(2)
    table = []
    for xyz in range(8):
        x, y, z = (xyz >> 2) & 1, (xyz >> 1) & 1, xyz & 1
        row = []
        for abc in range(8):
            bits = ((abc >> 2) & 1, (abc >> 1) & 1, abc & 1)
            projs = []
            for party, setting, bit in zip("ABC", (x, y, z), bits):
                m = obs[party][setting]
                projs.append((identity + m) / 2 if bit else (identity - m) / 2)
            op = np.kron(np.kron(projs[0], projs[1]), projs[2])
            row.append(float(psi @ op @ psi))
        table.append(row)
    return table


def _closed_form_rows() -> list[list[float]]:
    c, s = C_VALUE, S_VALUE
    # Row layout as conventionally printed: outcome columns +++ down to 000,
    # setting rows abc, abc', ab'c, ab'c', a'bc, a'bc', a'b'c, a'b'c'.
    printed = [
        [2 * c, 0.0, 2 * s, 0.0, 0.0, 2 * s, 0.0, 2 * c],
        [c, c, s, s, s, s, c, c],
        [2 * c, 0.0, 2 * s, 0.0, 0.0, 2 * s, 0.0, 2 * c],
        [c, c, s, s, s, s, c, c],
        [c, s, s, c, c, s, s, c],
        [c, s, s, c, s, c, c, s],
        [c, s, s, c, c, s, s, c],
        [s, c, c, s, c, s, s, c],
    ]
    # column j of the printed layout is outcome index 7 - j
    return [[printed[xyz][7 - abc] for abc in range(8)] for xyz in range(8)]


def quantum_behavior() -> Behavior:
    """The quantum violating behavior, from closed-form constants.

    Built from C = cos^2(pi/8)/4 and S = sin^2(pi/8)/4 and cross-checked
    entrywise against the projector oracle within 1e-12 at build time.
    """
    table = _closed_form_rows()
    oracle = quantum_behavior_oracle()
    for xyz in range(8):
        for abc in range(8):
            if abs(table[xyz][abc] - oracle[xyz][abc]) > FLOAT_TOL:
                raise AssertionError(
                    f"closed-form table disagrees with projector oracle at "
                    f"xyz={xyz} abc={abc}: {table[xyz][abc]} vs {oracle[xyz][abc]}"
                )
    return Behavior("float", table, {"source": "ghz-closed-form"})
