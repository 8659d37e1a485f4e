"""Volumes of column sets, distances to spans, singular values, matrix files.

A "dense matrix" here is a finite 2-D float64 numpy array whose columns are
the vectors under consideration; :func:`as_matrix` validates and converts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .kernels import jacobi_singular_values

RANK_RTOL = 1e-12


class MatrixFormatError(ValueError):
    """Malformed matrix text file."""


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def rank_tolerance(A: np.ndarray) -> float:
    """Residuals at or below this count as exact linear dependence."""
    return RANK_RTOL * float(np.max(np.linalg.norm(A, axis=0)))


@dataclass(frozen=True)
class ColumnSelection:
    """Strictly increasing 0-based column indices.

    The empty selection is allowed; its volume is 1.
    """

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"selection indices must be strictly increasing: {idx}")
        if idx and idx[0] < 0:
            raise ValueError(f"negative column index in {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, cols: Iterable[int]) -> "ColumnSelection":
        """Build from any iterable; sorts and rejects duplicates."""
        cols = [int(c) for c in cols]
        if len(set(cols)) != len(cols):
            raise ValueError(f"duplicate column index in {cols}")
        return cls(tuple(sorted(cols)))

    @property
    def k(self) -> int:
        return len(self.indices)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def check(self, ncols: int) -> None:
        if self.indices and self.indices[-1] >= ncols:
            raise IndexError(f"column index {self.indices[-1]} out of range for {ncols} columns")


def as_selection(S) -> ColumnSelection:
    return S if isinstance(S, ColumnSelection) else ColumnSelection.of(S)


@dataclass(frozen=True)
class VolumeResult:
    volume: float
    log2_volume: float  # -inf when the volume is zero
    residual_norms: tuple[float, ...]

    def as_dict(self) -> dict:
        return {
            "volume": self.volume,
            "log2_volume": None if self.log2_volume == -np.inf else self.log2_volume,
            "residual_norms": list(self.residual_norms),
        }


def _residuals(A: np.ndarray, cols: Sequence[int], tau: float) -> tuple[list[float], bool]:
    m = A.shape[0]
    Q = np.zeros((m, len(cols)))
    norms: list[float] = []
    d = 0
    for c in cols:
        r = A[:, c].copy()
        for _ in range(2):
            for t in range(d):
                r -= (Q[:, t] @ r) * Q[:, t]
        nrm = float(np.sqrt(r @ r))
        norms.append(nrm)
        if nrm <= tau:
            return norms + [0.0] * (len(cols) - len(norms)), True
        Q[:, d] = r / nrm
        d += 1
    return norms, False


def volume(A, S, tau: float | None = None) -> VolumeResult:
    """Volume of the parallelepiped spanned by the selected columns.

    Computed as the product of the distances of each column (in index order)
    to the span of the previous ones. A distance at or below the rank
    tolerance makes the volume exactly zero; the remaining recorded residuals
    are then zero too.
    """
    A = as_matrix(A)
    S = as_selection(S)
    S.check(A.shape[1])
    if tau is None:
        tau = rank_tolerance(A)
    if S.k == 0:
        return VolumeResult(1.0, 0.0, ())
    norms, dependent = _residuals(A, S.indices, tau)
    if dependent:
        return VolumeResult(0.0, -np.inf, tuple(norms))
    log2v = float(np.sum(np.log2(norms)))
    return VolumeResult(float(np.prod(norms)), log2v, tuple(norms))


def projection_distance(q, P) -> float:
    """Euclidean distance from ``q`` to the span of the columns of ``P``.

    ``P`` may have zero columns (shape ``(m, 0)``), giving ``||q||``.
    """
    q = np.asarray(q, dtype=np.float64).ravel()
    P = np.asarray(P, dtype=np.float64)
    if P.ndim == 1:
        P = P.reshape(-1, 1)
    if P.shape[0] != q.shape[0]:
        raise ValueError(f"dimension mismatch: q has {q.shape[0]} entries, P has {P.shape[0]} rows")
    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(P))):
        raise ValueError("non-finite input")
    r = q.copy()
    if P.shape[1]:
        tau = RANK_RTOL * max(float(np.max(np.linalg.norm(P, axis=0))), 0.0)
        basis = []
        for c in range(P.shape[1]):
            v = P[:, c].copy()
            for _ in range(2):
                for b in basis:
                    v -= (b @ v) * b
            nv = np.sqrt(v @ v)
            if nv > tau:
                basis.append(v / nv)
        for _ in range(2):
            for b in basis:
                r -= (b @ r) * b
    return float(np.sqrt(r @ r))


def singular_values(A, tol: float = 1e-10, max_sweeps: int = 60) -> np.ndarray:
    """All min(m, n) singular values, descending (one-sided Jacobi)."""
    sigma, _ = jacobi_singular_values(as_matrix(A), tol=tol, max_sweeps=max_sweeps)
    return sigma


# --- matrix text format -----------------------------------------------------


def format_matrix(A) -> str:
    A = as_matrix(A)
    lines = [f"{A.shape[0]} {A.shape[1]}"]
    lines.extend(" ".join(f"{x:.17g}" for x in row) for row in A)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    """Inverse of :func:`format_matrix`: ``"m n"`` then m rows of n reals."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise MatrixFormatError("empty matrix file")
    try:
        m, n = (int(x) for x in rows[0])
    except ValueError as exc:
        raise MatrixFormatError(f"bad header line {' '.join(rows[0])!r}") from exc
    if m < 1 or n < 1:
        raise MatrixFormatError(f"bad dimensions {m}x{n}")
    if len(rows) - 1 != m:
        raise MatrixFormatError(f"expected {m} rows, found {len(rows) - 1}")
    out = np.empty((m, n))
    for i, row in enumerate(rows[1:]):
        if len(row) != n:
            raise MatrixFormatError(f"row {i + 1} has {len(row)} entries, expected {n}")
        try:
            out[i] = [float(x) for x in row]
        except ValueError as exc:
            raise MatrixFormatError(f"row {i + 1}: {exc}") from exc
    if not np.all(np.isfinite(out)):
        raise MatrixFormatError("non-finite entry")
    return out


def read_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return parse_matrix(fh.read())


def write_matrix(path, A) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(A))
