from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_GADGET_M = 14


def sylvester_hadamard(m: int) -> np.ndarray:
    """Order-2^m Hadamard matrix by Sylvester doubling, entries +-1."""
    H = np.ones((1, 1), dtype=np.int64)
    for _ in range(m):
        H = np.block([[H, H], [H, -H]])
    return H


@dataclass(frozen=True, eq=False)
class HadamardGadget:
    """The 2^m - 1 non-constant Sylvester rows with -1 mapped to 0."""

    m: int
    vectors: np.ndarray  # (2^m - 1, 2^m), entries 0/1

    @property
    def dim(self) -> int:
        return 2**self.m

    @property
    def norm_scale(self) -> float:
        return 2.0 ** ((self.m - 1) / 2)

    def complements(self) -> np.ndarray:
        return 1 - self.vectors


def build_gadget(m: int) -> HadamardGadget:
    if m < 2:
        raise ValueError("gadget needs m >= 2")
    if m > MAX_GADGET_M:
        raise ValueError(f"m={m} exceeds the memory budget (max {MAX_GADGET_M})")
    H = sylvester_hadamard(m)
    B = (H[1:] > 0).astype(np.int64)
    return HadamardGadget(m, B)
