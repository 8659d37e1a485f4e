"""Label Cover -> MAX-VOL matrix.

Every (vertex, label) pair becomes a unit column made of one block per edge.
A V-column carries the complement of gadget row pi_e(i) on each incident
edge, a W-column carries gadget row j; both are scaled so the column has
norm 1. Blocks of different edges are orthogonal coordinate ranges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..core import ColumnSelection
from .gadget import build_gadget
from .labelcover import LabelCoverInstance, Labeling, _check_labeling

V_SIDE, W_SIDE = 0, 1
SIDE_NAMES = ("V", "W")
DEFAULT_ENTRY_CAP = 5 * 10**7


@dataclass(frozen=True, eq=False)
class MaxVolInstance:
    matrix: np.ndarray  # (M, N)
    k: int
    ell: int
    source: LabelCoverInstance
    block_width: int

    @property
    def M(self) -> int:
        return self.matrix.shape[0]

    @property
    def N(self) -> int:
        return self.matrix.shape[1]

    @property
    def delta(self) -> float:
        return self.k / self.N

    @property
    def num_v_columns(self) -> int:
        return self.source.v_count * self.source.sigma_v

    def column(self, side: int, vertex: int, label: int) -> int:
        L = self.source
        if side == V_SIDE:
            if not (0 <= vertex < L.v_count and 0 <= label < L.sigma_v):
                raise IndexError(f"no V column for ({vertex}, {label})")
            return vertex * L.sigma_v + label
        if not (0 <= vertex < L.w_count and 0 <= label < L.sigma_w):
            raise IndexError(f"no W column for ({vertex}, {label})")
        return self.num_v_columns + vertex * L.sigma_w + label

    def column_owner(self, col: int) -> tuple[int, int, int]:
        """(side, vertex, label) of a column index."""
        L = self.source
        if col < self.num_v_columns:
            return V_SIDE, col // L.sigma_v, col % L.sigma_v
        c = col - self.num_v_columns
        return W_SIDE, c // L.sigma_w, c % L.sigma_w

    def block_rows(self, edge: int) -> slice:
        return slice(edge * self.block_width, (edge + 1) * self.block_width)

    def sidecar(self) -> dict:
        L = self.source
        cols = [[SIDE_NAMES[s], v, i] for s, v, i in map(self.column_owner, range(self.N))]
        blocks = [
            [int(v), int(w), e * self.block_width, (e + 1) * self.block_width]
            for e, (v, w) in enumerate(L.edges)
        ]
        return {
            "M": self.M,
            "N": self.N,
            "k": self.k,
            "delta": self.delta,
            "ell": self.ell,
            "block_width": self.block_width,
            "column_index": cols,
            "block_index": blocks,
        }

    def sidecar_json(self) -> str:
        return json.dumps(self.sidecar(), separators=(",", ":")) + "\n"


def build_maxvol_instance(
    L: LabelCoverInstance, ell: int, entry_cap: int = DEFAULT_ENTRY_CAP
) -> MaxVolInstance:
    """Matrix for ``L`` using the gadget of order 2^(ell+1).

    ``L`` must be biregular with at most 2^ell W-labels (the first sigma_w
    gadget rows are used, in Sylvester order).
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if not L.is_biregular():
        raise ValueError("Label Cover instance is not biregular")
    if L.sigma_w > 2**ell:
        raise ValueError(f"sigma_w={L.sigma_w} exceeds the gadget capacity 2^{ell}")
    gadget = build_gadget(ell + 1)
    width = gadget.dim
    rows_b = gadget.vectors[: L.sigma_w].astype(np.float64)
    comp_b = 1.0 - rows_b
    dv, dw = L.v_degree, L.w_degree
    # gadget rows have squared norm 2^ell; each column spreads over d blocks
    scale_v = 1.0 / np.sqrt(2.0**ell * dv)
    scale_w = 1.0 / np.sqrt(2.0**ell * dw)

    M = L.num_edges * width
    N = L.v_count * L.sigma_v + L.w_count * L.sigma_w
    if M * N > entry_cap:
        raise ValueError(f"{M}x{N} matrix exceeds the entry cap {entry_cap}")
    A = np.zeros((M, N))
    nv = L.v_count * L.sigma_v
    v_labels = np.arange(L.sigma_v)
    for e, (v, w) in enumerate(L.edges):
        rows = slice(e * width, (e + 1) * width)
        A[rows, v * L.sigma_v : (v + 1) * L.sigma_v] = (comp_b[L.pi[e, v_labels]] * scale_v).T
        A[rows, nv + w * L.sigma_w : nv + (w + 1) * L.sigma_w] = (rows_b * scale_w).T
    A.setflags(write=False)
    return MaxVolInstance(A, L.v_count + L.w_count, ell, L, width)


def labeling_to_selection(inst: MaxVolInstance, sigma: Labeling) -> ColumnSelection:
    """One column per vertex: (v, sigma(v)) and (w, sigma(w))."""
    L = inst.source
    _check_labeling(L, sigma)
    cols = [inst.column(V_SIDE, v, int(i)) for v, i in enumerate(sigma.v_labels)]
    cols += [inst.column(W_SIDE, w, int(j)) for w, j in enumerate(sigma.w_labels)]
    return ColumnSelection.of(cols)
