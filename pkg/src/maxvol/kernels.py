"""Hot numeric loops, each with a numba kernel and a pure-numpy twin.

Public entry points dispatch on :func:`maxvol._backend.get_backend`. Both paths
follow the same arithmetic contract (sequential residual norms checked against
the same rank tolerance) so they agree to rounding; they are not guaranteed to
agree bit-for-bit with each other, only with themselves.
"""

import itertools
from math import comb

import numpy as np

from ._backend import get_backend, njit

NEG_INF = -np.inf


class ConvergenceError(RuntimeError):
    """Raised when an iterative kernel hits its iteration cap."""


# ---------------------------------------------------------------------------
# enumeration of all k-subsets
# ---------------------------------------------------------------------------


@njit
def _subset_log2_volumes_nb(A, k, tau):
    m, n = A.shape
    total = 1
    for i in range(k):
        total = total * (n - i) // (i + 1)
    out = np.empty(total)
    comb_idx = np.arange(k)
    Q = np.zeros((m, k))
    levlog = np.zeros(k)
    r = np.empty(m)
    p = 0
    cnt = 0
    while True:
        for d in range(p, k):
            prev = levlog[d - 1] if d > 0 else 0.0
            if prev == NEG_INF:
                levlog[d] = NEG_INF
                continue
            col = comb_idx[d]
            for i in range(m):
                r[i] = A[i, col]
            # modified Gram-Schmidt, two passes
            for _ in range(2):
                for t in range(d):
                    dot = 0.0
                    for i in range(m):
                        dot += Q[i, t] * r[i]
                    for i in range(m):
                        r[i] -= dot * Q[i, t]
            nrm = 0.0
            for i in range(m):
                nrm += r[i] * r[i]
            nrm = np.sqrt(nrm)
            if nrm <= tau:
                levlog[d] = NEG_INF
            else:
                for i in range(m):
                    Q[i, d] = r[i] / nrm
                levlog[d] = prev + np.log2(nrm)
        out[cnt] = levlog[k - 1]
        cnt += 1
        i = k - 1
        while i >= 0 and comb_idx[i] == n - k + i:
            i -= 1
        if i < 0:
            break
        comb_idx[i] += 1
        for j in range(i + 1, k):
            comb_idx[j] = comb_idx[j - 1] + 1
        p = i
    return out


def _subset_log2_volumes_np(A, k, tau, chunk=8192):
    n = A.shape[1]
    out = np.empty(comb(n, k))
    combos = itertools.combinations(range(n), k)
    pos = 0
    while pos < out.size:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=np.intp)
        sub = np.transpose(A[:, block], (1, 0, 2))  # (B, m, k)
        R = np.linalg.qr(sub, mode="r")
        diag = np.abs(np.diagonal(R, axis1=-2, axis2=-1))
        with np.errstate(divide="ignore"):
            logs = np.log2(diag).sum(axis=1)
        logs[(diag <= tau).any(axis=1)] = NEG_INF
        out[pos : pos + len(block)] = logs
        pos += len(block)
    return out


def subset_log2_volumes(A, k, tau):
    """log2 volume of every k-column subset of ``A``, in lexicographic order.

    Subsets whose sequential residual drops to ``tau`` or below get ``-inf``.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    m, n = A.shape
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must lie in [1, {n}]")
    if k > m:
        return np.full(comb(n, k), NEG_INF)
    if get_backend() == "numba":
        return _subset_log2_volumes_nb(A, k, float(tau))
    return _subset_log2_volumes_np(A, k, float(tau))


def unrank_combination(n, k, rank):
    """The ``rank``-th k-subset of range(n) in lexicographic order."""
    out = []
    x = 0
    for slot in range(k):
        while True:
            c = comb(n - x - 1, k - slot - 1)
            if rank < c:
                break
            rank -= c
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


# ---------------------------------------------------------------------------
# single-swap neighbourhood
# ---------------------------------------------------------------------------


@njit
def _swap_log2_volumes_nb(A, sel, tau):
    m, n = A.shape
    k = sel.shape[0]
    out = np.full((k, n), NEG_INF)
    in_sel = np.zeros(n, dtype=np.bool_)
    for a in range(k):
        in_sel[sel[a]] = True
    Q = np.zeros((m, max(k - 1, 1)))
    r = np.empty(m)
    for a in range(k):
        base = 0.0
        d = 0
        for b in range(k):
            if b == a:
                continue
            for i in range(m):
                r[i] = A[i, sel[b]]
            for _ in range(2):
                for t in range(d):
                    dot = 0.0
                    for i in range(m):
                        dot += Q[i, t] * r[i]
                    for i in range(m):
                        r[i] -= dot * Q[i, t]
            nrm = 0.0
            for i in range(m):
                nrm += r[i] * r[i]
            nrm = np.sqrt(nrm)
            if nrm <= tau:
                base = NEG_INF
                break
            for i in range(m):
                Q[i, d] = r[i] / nrm
            base += np.log2(nrm)
            d += 1
        if base == NEG_INF:
            continue
        for j in range(n):
            if in_sel[j]:
                continue
            for i in range(m):
                r[i] = A[i, j]
            for _ in range(2):
                for t in range(d):
                    dot = 0.0
                    for i in range(m):
                        dot += Q[i, t] * r[i]
                    for i in range(m):
                        r[i] -= dot * Q[i, t]
            nrm = 0.0
            for i in range(m):
                nrm += r[i] * r[i]
            nrm = np.sqrt(nrm)
            if nrm > tau:
                out[a, j] = base + np.log2(nrm)
    return out


def _mgs_basis(A, cols, tau):
    """Orthonormal basis of A[:, cols] by two-pass MGS; None if dependent."""
    m = A.shape[0]
    Q = np.zeros((m, len(cols)))
    logs = 0.0
    for d, c in enumerate(cols):
        r = A[:, c].copy()
        for _ in range(2):
            for t in range(d):
                r -= (Q[:, t] @ r) * Q[:, t]
        nrm = np.sqrt(r @ r)
        if nrm <= tau:
            return None, NEG_INF
        Q[:, d] = r / nrm
        logs += np.log2(nrm)
    return Q, logs


def _swap_log2_volumes_np(A, sel, tau):
    n = A.shape[1]
    k = len(sel)
    out = np.full((k, n), NEG_INF)
    outside = np.setdiff1d(np.arange(n), sel)
    for a in range(k):
        rest = [int(s) for b, s in enumerate(sel) if b != a]
        Q, base = _mgs_basis(A, rest, tau)
        if Q is None:
            continue
        R = A[:, outside].copy()
        for _ in range(2):
            R -= Q @ (Q.T @ R)
        norms = np.sqrt(np.einsum("ij,ij->j", R, R))
        with np.errstate(divide="ignore"):
            vals = base + np.log2(norms)
        vals[norms <= tau] = NEG_INF
        out[a, outside] = vals
    return out


def swap_log2_volumes(A, sel, tau):
    """``out[a, j]`` = log2 volume after replacing ``sel[a]`` with column ``j``.

    Entries with ``j`` already in ``sel`` are ``-inf``.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    sel = np.asarray(sel, dtype=np.int64)
    if get_backend() == "numba":
        return _swap_log2_volumes_nb(A, sel, float(tau))
    return _swap_log2_volumes_np(A, sel, float(tau))


# ---------------------------------------------------------------------------
# one-sided Jacobi singular values
# ---------------------------------------------------------------------------


@njit
def _jacobi_nb(U, tol, max_sweeps):
    m, n = U.shape
    for sweep in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for r in range(m):
                    alpha += U[r, i] * U[r, i]
                    beta += U[r, j] * U[r, j]
                    gamma += U[r, i] * U[r, j]
                if alpha == 0.0 or beta == 0.0:
                    continue
                if abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                sgn = 1.0 if zeta >= 0.0 else -1.0
                t = sgn / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                for r in range(m):
                    ui = U[r, i]
                    uj = U[r, j]
                    U[r, i] = c * ui - s * uj
                    U[r, j] = s * ui + c * uj
        if not rotated:
            return sweep + 1, True
    return max_sweeps, False


def _jacobi_np(U, tol, max_sweeps):
    n = U.shape[1]
    for sweep in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                ui, uj = U[:, i], U[:, j]
                alpha, beta, gamma = ui @ ui, uj @ uj, ui @ uj
                if alpha == 0.0 or beta == 0.0 or abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                U[:, i], U[:, j] = c * ui - s * uj, s * ui + c * uj
        if not rotated:
            return sweep + 1, True
    return max_sweeps, False


def jacobi_singular_values(A, tol=1e-10, max_sweeps=60):
    """Singular values by cyclic one-sided (Hestenes) Jacobi rotations.

    Returns ``(sigma, sweeps)`` with ``sigma`` sorted descending; raises
    :class:`ConvergenceError` if a full sweep still rotates after
    ``max_sweeps``.
    """
    A = np.asarray(A, dtype=np.float64)
    U = np.array(A.T if A.shape[0] < A.shape[1] else A, dtype=np.float64, order="F")
    if get_backend() == "numba":
        sweeps, ok = _jacobi_nb(U, float(tol), int(max_sweeps))
    else:
        sweeps, ok = _jacobi_np(U, float(tol), int(max_sweeps))
    if not ok:
        raise ConvergenceError(f"one-sided Jacobi did not converge in {max_sweeps} sweeps")
    sigma = np.sqrt(np.einsum("ij,ij->j", U, U))
    return np.sort(sigma)[::-1], sweeps
