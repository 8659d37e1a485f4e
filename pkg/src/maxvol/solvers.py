"""MAX-VOL strategies: greedy, exhaustive, single-swap local search, and
exact volume sampling by enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .core import ColumnSelection, VolumeResult, as_matrix, as_selection, rank_tolerance, volume
from .kernels import subset_log2_volumes, swap_log2_volumes, unrank_combination

DEFAULT_CAP = 10**7
# log2-volumes closer than this are ties (about 7e-12 relative in volume)
TIE_LOG2 = 1e-11
# a swap must beat log2(mu) by this much to count as an improvement
IMPROVE_LOG2 = 1e-12
GREEDY_TIE_RTOL = 1e-12


class RankDeficientError(ValueError):
    """The matrix has no k columns with nonzero volume."""


class EnumerationCapError(ValueError):
    """C(n, k) exceeds the configured enumeration cap."""


@dataclass(frozen=True)
class SolveReport:
    selection: ColumnSelection
    volume: VolumeResult
    strategy: str
    steps: int
    mu: float | None = None
    pick_order: tuple[int, ...] = ()

    def as_dict(self) -> dict:
        d = {
            "strategy": self.strategy,
            "indices": list(self.selection.indices),
            "k": self.selection.k,
            "steps": self.steps,
            **self.volume.as_dict(),
        }
        if self.mu is not None:
            d["mu"] = self.mu
        if self.pick_order:
            d["pick_order"] = list(self.pick_order)
        return d


@dataclass(frozen=True)
class VolumeDistribution:
    k: int
    n: int
    entries: list[tuple[ColumnSelection, float]] = field(repr=False)
    normalizer: float

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for _, p in self.entries])


def _check_k(A, k):
    n = A.shape[1]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must lie in [1, {n}]")


def _check_cap(n, k, cap):
    total = comb(n, k)
    if total > cap:
        raise EnumerationCapError(f"C({n}, {k}) = {total} subsets exceeds the enumeration cap {cap}")
    return total


def greedy_select(A, k: int) -> SolveReport:
    """Pick the largest residual column, project it out of the rest, repeat.

    Near-equal residual norms (relative 1e-12) go to the lowest column index.
    """
    A = as_matrix(A)
    _check_k(A, k)
    tau = rank_tolerance(A)
    R = A.copy()
    available = np.ones(A.shape[1], dtype=bool)
    picks: list[int] = []
    for step in range(k):
        norms = np.sqrt(np.einsum("ij,ij->j", R, R))
        norms[~available] = -1.0
        top = norms.max()
        if top <= tau:
            raise RankDeficientError(f"all residuals vanish after {step} picks; rank < k={k}")
        p = int(np.flatnonzero(norms >= top * (1.0 - GREEDY_TIE_RTOL))[0])
        q = R[:, p] / norms[p]
        for _ in range(2):
            R -= np.outer(q, q @ R)
        available[p] = False
        picks.append(p)
    sel = ColumnSelection.of(picks)
    return SolveReport(sel, volume(A, sel, tau), "greedy", k, pick_order=tuple(picks))


def exact_select(A, k: int, cap: int = DEFAULT_CAP) -> SolveReport:
    """Exhaustive maximiser over all k-subsets.

    Among subsets within the tie tolerance of the maximum, the
    lexicographically smallest index list wins.
    """
    A = as_matrix(A)
    _check_k(A, k)
    total = _check_cap(A.shape[1], k, cap)
    tau = rank_tolerance(A)
    logs = subset_log2_volumes(A, k, tau)
    best = logs.max()
    if best == -np.inf:
        rank = 0
    else:
        rank = int(np.flatnonzero(logs >= best - TIE_LOG2)[0])
    sel = ColumnSelection(unrank_combination(A.shape[1], k, rank))
    return SolveReport(sel, volume(A, sel, tau), "exact", total)


def local_search(A, k: int, mu: float = 1.0, start=None, max_swaps: int = 100_000) -> SolveReport:
    """Best-improvement single-swap search until the set is a local mu-maximum.

    A swap is applied only when it multiplies the volume by more than ``mu``.
    Ties among the best swaps go to the lowest incoming column, then the
    lowest outgoing one. ``start`` defaults to the greedy selection.
    """
    A = as_matrix(A)
    _check_k(A, k)
    if mu < 1:
        raise ValueError(f"mu must be >= 1, got {mu}")
    tau = rank_tolerance(A)
    if start is None:
        start = greedy_select(A, k).selection
    sel = as_selection(start)
    sel.check(A.shape[1])
    if sel.k != k:
        raise ValueError(f"start has {sel.k} columns, expected {k}")
    cur = volume(A, sel, tau)
    if cur.volume == 0.0:
        raise RankDeficientError("local search needs a start with nonzero volume")
    threshold = np.log2(mu) + IMPROVE_LOG2
    swaps = 0
    while True:
        idx = np.array(sel.indices)
        gains = swap_log2_volumes(A, idx, tau) - cur.log2_volume
        best = gains.max()
        if not best > threshold:
            break
        outs, ins = np.nonzero(gains >= best - TIE_LOG2)
        order = np.lexsort((idx[outs], ins))
        a, j = int(outs[order[0]]), int(ins[order[0]])
        sel = ColumnSelection.of([c for c in sel.indices if c != idx[a]] + [j])
        cur = volume(A, sel, tau)
        swaps += 1
        if swaps >= max_swaps:
            raise RuntimeError(f"local search exceeded {max_swaps} swaps")
    return SolveReport(sel, cur, "local", swaps, mu=float(mu))


def is_local_mu_maximum(A, S, mu: float, slack: float = 1e-12) -> bool:
    """True iff ``mu * Vol(S) >= Vol(S')`` for every single-swap neighbour."""
    A = as_matrix(A)
    S = as_selection(S)
    S.check(A.shape[1])
    tau = rank_tolerance(A)
    cur = volume(A, S, tau).volume
    neighbours = np.exp2(swap_log2_volumes(A, np.array(S.indices), tau))
    return bool(np.all(mu * cur >= neighbours - slack))


def volume_sampling_distribution(A, k: int, cap: int = DEFAULT_CAP) -> VolumeDistribution:
    """P(S) = Vol(S)^2 / sum_T Vol(T)^2 over all k-subsets, by enumeration."""
    A = as_matrix(A)
    _check_k(A, k)
    n = A.shape[1]
    _check_cap(n, k, cap)
    logs = subset_log2_volumes(A, k, rank_tolerance(A))
    top = logs.max()
    if top == -np.inf:
        raise RankDeficientError(f"every {k}-subset has zero volume")
    w = np.exp2(2.0 * (logs - top))
    total = w.sum()
    probs = w / total
    entries = [(ColumnSelection(unrank_combination(n, k, r)), float(p)) for r, p in enumerate(probs)]
    return VolumeDistribution(k, n, entries, float(total * np.exp2(2.0 * top)))


def sample_subsets(dist: VolumeDistribution, size: int, seed: int) -> list[ColumnSelection]:
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(dist.entries), size=size, p=dist.probabilities)
    return [dist.entries[i][0] for i in draws]


def sample_subset(dist: VolumeDistribution, seed: int) -> ColumnSelection:
    """One seeded draw from the exact volume-sampling distribution."""
    return sample_subsets(dist, 1, seed)[0]
