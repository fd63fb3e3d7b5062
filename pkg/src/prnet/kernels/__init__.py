"""Numeric kernel dispatch.

Two interchangeable backends provide the hot loops: a numba @njit backend
and a vectorized pure-numpy fallback. Selection is by the PRNET_KERNEL
environment variable: "numba", "numpy", or "auto" (default: numba when
importable, numpy otherwise). All kernels return integer tallies, so the
exact-arithmetic layer on top loses nothing.
"""

from __future__ import annotations

import os
from typing import Iterable

import numpy as np

from ..packed import PackedNetwork

_ENV_VAR = "PRNET_KERNEL"


def _select_backend():
    choice = os.environ.get(_ENV_VAR, "auto")
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"{_ENV_VAR} must be auto, numba, or numpy; got {choice!r}")
    if choice in ("auto", "numba"):
        try:
            from . import numba_impl

            return numba_impl
        except ImportError:
            if choice == "numba":
                raise RuntimeError(f"{_ENV_VAR}=numba but numba is not importable")
    from . import numpy_impl

    return numpy_impl


_impl = _select_backend()


def backend_name() -> str:
    return _impl.BACKEND


def _unpack(packed: PackedNetwork) -> tuple:
    return (
        packed.counts,
        packed.n_own,
        packed.slot_box,
        packed.slot_side,
        packed.slot_pair,
        packed.slot_index,
        packed.roots,
        packed.node_slot,
        packed.node_input,
        packed.node_child0,
        packed.node_child1,
        packed.table_off,
        packed.out_bits,
    )


def _ordering_array(ordering: Iterable) -> np.ndarray:
    arr = np.array([int(p) for p in ordering], dtype=np.int64)
    if sorted(arr.tolist()) != [0, 1, 2]:
        raise ValueError(f"ordering must be a permutation of the parties, got {arr}")
    return arr


def behavior_counts(packed: PackedNetwork, ordering) -> np.ndarray:
    """Outcome tallies per setting triple over all free assignments.

    Returns int64[8, 8]; entry [xyz][abc] counts free assignments (out of
    2^(n_ab+n_ac+n_bc), each of equal probability) producing that outcome.
    """
    return _impl.behavior_counts(*_unpack(packed), _ordering_array(ordering))


def mc_counts(
    packed: PackedNetwork, ordering, words: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Monte-Carlo tallies: (counts int64[8,8], rounds per setting int64[8])."""
    masked = (words & np.uint64((1 << 63) - 1)).astype(np.int64)
    return _impl.mc_counts(*_unpack(packed), _ordering_array(ordering), masked)


def response_tables(
    inputs: np.ndarray, outcomes: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Search tables over per-setting response classes at one box per pair.

    inputs[m][w] is the 2-bit input word a class feeds its two boxes when
    its own outputs form word w; outcomes[m][w] is the final outcome bit.
    Returns (cnt_ac, cnt_ab, par0): counts out of 8 free assignments of
    A != C, of A != B, and of A xor B xor C == 0, the latter indexed
    [alice_class, bob_class, charlie_class].
    """
    return _impl.response_tables(
        np.ascontiguousarray(inputs, dtype=np.uint8),
        np.ascontiguousarray(outcomes, dtype=np.uint8),
    )


def exhaustive_totals(
    cnt_ac: np.ndarray, cnt_ab: np.ndarray, par0: np.ndarray
) -> np.ndarray:
    """Best achievable 64*E(F) for every (setting-a, setting-a') Alice pair,
    minimizing over the other four response slots. Returns int64[M, M]."""
    return _impl.exhaustive_totals(cnt_ac, cnt_ab, par0)
