"""PR-box input/output semantics.

A PR box is a bipartite device with binary inputs x, y and binary outputs
a, b satisfying a XOR b = x*y, each side's marginal being a fair coin.
Once one side's output is known, the other side's output is a deterministic
function of it and the two inputs; that function is the single primitive
the whole joint-distribution construction rests on.
"""

from __future__ import annotations

Bit = int


def _check_bit(value: int, name: str) -> None:
    if value not in (0, 1):
        raise ValueError(f"{name} must be 0 or 1, got {value!r}")


def pr_determined_output(counterpart_output: Bit, own_input: Bit, counterpart_input: Bit) -> Bit:
    """Output forced on one side of a PR box once the other side is known.

    Returns counterpart_output XOR (own_input AND counterpart_input). Together
    with a uniformly random first output this reproduces the PR-box table:
    outputs agree unless both inputs are 1, in which case they disagree.
    """
    _check_bit(counterpart_output, "counterpart_output")
    _check_bit(own_input, "own_input")
    _check_bit(counterpart_input, "counterpart_input")
    return counterpart_output ^ (own_input & counterpart_input)


def pr_pair_weight(a: Bit, b: Bit, x: Bit, y: Bit) -> float:
    """Probability of the output pair (a, b) given inputs (x, y): 1/2 or 0."""
    for name, v in (("a", a), ("b", b), ("x", x), ("y", y)):
        _check_bit(v, name)
    return 0.5 if (a ^ b) == (x & y) else 0.0


def pathological_signaling_demo(message: Bit) -> Bit:
    """Decode a bit sent through two *correlated* boxes (a broken joint law).

    Scenario: Alice and Bob hold two boxes whose PR-box marginals look fine,
    but jointly Alice's two outputs are always equal. Alice reads box 1 (any
    input), then feeds that output (message=0) or its negation (message=1)
    as her *input* to box 2. Bob inputs 1 to box 2 and reads his output,
    which equals the message with certainty.

    Both equally likely values of the correlated output are enumerated; the
    decoded bit must be constant across them, and that constant is returned.
    This is a demonstration of why box outputs must stay conditionally
    uniform: any intra-party correlation between box outputs is a signal.
    """
    _check_bit(message, "message")
    decoded_branches = []
    for first_output in (0, 1):
        second_output_alice = first_output  # the pathology: perfectly correlated
        alice_input_box2 = first_output ^ message
        bob_input_box2 = 1
        bob_output = pr_determined_output(second_output_alice, bob_input_box2, alice_input_box2)
        decoded_branches.append(bob_output)
    if decoded_branches[0] != decoded_branches[1]:
        raise AssertionError("decoding was not constant across correlated branches")
    if decoded_branches[0] != message:
        raise AssertionError("decoded bit does not equal the message")
    return decoded_branches[0]
