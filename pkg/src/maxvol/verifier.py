"""Checks of the gadget, reduction, and selection-quality inequalities.

Every check returns a :class:`CheckReport` carrying the two sides that were
compared and the absolute slack used, so a failing report is self-describing.
Suites draw their random instances from ``numpy.random.default_rng(seed)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import as_matrix, as_selection, projection_distance, singular_values, volume
from .reduction.gadget import HadamardGadget
from .reduction.instance import V_SIDE, W_SIDE, MaxVolInstance, build_maxvol_instance, labeling_to_selection
from .reduction.labelcover import LabelCoverInstance, Labeling, evaluate_labeling, labelcover_optimum
from .solvers import DEFAULT_CAP, exact_select, greedy_select, is_local_mu_maximum, local_search

SLACK = 1e-9
EXACT_SLACK = 1e-12
HALF_SQRT3 = math.sqrt(3) / 2


@dataclass
class CheckReport:
    name: str
    passed: bool
    lhs: float
    rhs: float
    slack: float
    context: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": bool(self.passed),
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "slack": float(self.slack),
            "context": self.context,
        }


@dataclass(frozen=True)
class SelectionStats:
    k_v: int
    k_w: int
    d_v: int
    d_w: int
    distinct_v: frozenset
    distinct_w: frozenset


# --- gadget and reduction ---------------------------------------------------


def check_gadget(B: HadamardGadget) -> CheckReport:
    """Integer check: |b_i|^2 = 2^(m-1); b_i.b_j = b_i.~b_j = 2^(m-2) for i != j."""
    vecs = np.asarray(B.vectors, dtype=np.int64)
    comp = 1 - vecs
    half, quarter = 2 ** (B.m - 1), 2 ** (B.m - 2)
    gram = vecs @ vecs.T
    cross = vecs @ comp.T
    off = ~np.eye(len(vecs), dtype=bool)
    bad_norm = int(np.count_nonzero(np.diag(gram) != half))
    bad_dot = int(np.count_nonzero(gram[off] != quarter))
    bad_comp = int(np.count_nonzero(cross[off] != quarter))
    binary = bool(np.isin(vecs, (0, 1)).all())
    worst = max(
        int(np.abs(np.diag(gram) - half).max(initial=0)),
        int(np.abs(gram[off] - quarter).max(initial=0)),
        int(np.abs(cross[off] - quarter).max(initial=0)),
    )
    ok = binary and bad_norm == bad_dot == bad_comp == 0 and vecs.shape == (2**B.m - 1, 2**B.m)
    return CheckReport(
        "gadget",
        ok,
        float(worst),
        0.0,
        0.0,
        {"m": B.m, "rows": len(vecs), "bad_norms": bad_norm, "bad_dots": bad_dot, "bad_complement_dots": bad_comp},
    )


def check_completeness(inst: MaxVolInstance, sigma: Labeling, strict: bool = True) -> CheckReport:
    """The labeling's k columns are orthogonal with volume 1.

    With ``strict`` the labeling must satisfy every edge; otherwise the
    report simply fails and names the worst pair.
    """
    frac = evaluate_labeling(inst.source, sigma)
    if strict and frac != 1.0:
        raise ValueError(f"labeling satisfies only {frac:.6f} of the edges")
    S = labeling_to_selection(inst, sigma)
    C = inst.matrix[:, list(S.indices)]
    G = C.T @ C
    np.fill_diagonal(G, 0.0)
    a, b = np.unravel_index(np.argmax(np.abs(G)), G.shape)
    max_dot = float(abs(G[a, b]))
    vol = volume(inst.matrix, S).volume
    ok = max_dot <= EXACT_SLACK and abs(vol - 1.0) <= SLACK
    return CheckReport(
        "completeness",
        ok,
        max_dot,
        0.0,
        EXACT_SLACK,
        {
            "volume": vol,
            "volume_slack": SLACK,
            "satisfied_fraction": frac,
            "worst_pair": [int(S.indices[a]), int(S.indices[b])],
            "k": S.k,
        },
    )


def unsat_edge_dot_value(v_degree: int, w_degree: int) -> float:
    return 1.0 / (2.0 * math.sqrt(v_degree * w_degree))


def check_unsat_edge_dot(inst: MaxVolInstance, edge: int, i: int, j: int) -> CheckReport:
    """A_{v,i} . A_{w,j} = 1/(2 sqrt(d_v d_w)) when (i, j) violates the edge."""
    L = inst.source
    v, w = (int(x) for x in L.edges[edge])
    if L.pi[edge, i] == j:
        raise ValueError(f"edge {edge} is satisfied by labels ({i}, {j})")
    cv, cw = inst.column(V_SIDE, v, i), inst.column(W_SIDE, w, j)
    dot = float(inst.matrix[:, cv] @ inst.matrix[:, cw])
    expected = unsat_edge_dot_value(L.v_degree, L.w_degree)
    return CheckReport(
        "unsat_edge_dot",
        abs(dot - expected) <= EXACT_SLACK,
        dot,
        expected,
        EXACT_SLACK,
        {"edge": edge, "v": v, "w": w, "i": i, "j": j},
    )


def selection_stats(inst: MaxVolInstance, S) -> SelectionStats:
    S = as_selection(S)
    vs, ws = [], []
    for c in S:
        side, vertex, _ = inst.column_owner(c)
        (vs if side == V_SIDE else ws).append(vertex)
    dv, dw = frozenset(vs), frozenset(ws)
    return SelectionStats(len(vs), len(ws), len(vs) - len(dv), len(ws) - len(dw), dv, dw)


def check_duplicate_bound(inst: MaxVolInstance, S) -> CheckReport:
    """Each side's volume is at most (sqrt(3)/2)^duplicates, and columns of
    one vertex have pairwise dot products in [1/2, 1]."""
    S = as_selection(S)
    A = inst.matrix
    stats = selection_stats(inst, S)
    v_cols = [c for c in S if inst.column_owner(c)[0] == V_SIDE]
    w_cols = [c for c in S if inst.column_owner(c)[0] == W_SIDE]
    vol_v = volume(A, v_cols).volume
    vol_w = volume(A, w_cols).volume
    vol_all = volume(A, S).volume
    bound_v, bound_w = HALF_SQRT3**stats.d_v, HALF_SQRT3**stats.d_w
    parts = [
        ("V", vol_v, bound_v),
        ("W", vol_w, bound_w),
        ("all", vol_all, bound_v * bound_w),
    ]
    by_owner: dict[tuple[int, int], list[int]] = {}
    for c in S:
        side, vertex, _ = inst.column_owner(c)
        by_owner.setdefault((side, vertex), []).append(c)
    dots = [
        float(A[:, a] @ A[:, b])
        for cols in by_owner.values()
        for a, b in itertools.combinations(cols, 2)
    ]
    dots_ok = all(0.5 - EXACT_SLACK <= d <= 1.0 + EXACT_SLACK for d in dots)
    name, lhs, rhs = max(parts, key=lambda p: p[1] - p[2])
    ok = dots_ok and all(l <= r + SLACK for _, l, r in parts)
    return CheckReport(
        "duplicate_bound",
        ok,
        lhs,
        rhs,
        SLACK,
        {
            "worst_part": name,
            "parts": {n: {"volume": l, "bound": r} for n, l, r in parts},
            "d_v": stats.d_v,
            "d_w": stats.d_w,
            "same_vertex_dots": [min(dots), max(dots)] if dots else None,
            "same_vertex_dots_in_range": dots_ok,
        },
    )


# --- volume inequalities ----------------------------------------------------


def check_union_lemma(A, P, Q) -> CheckReport:
    """Vol(P u Q) <= Vol(P) * prod_q d(q, P)."""
    A = as_matrix(A)
    P, Q = as_selection(P), as_selection(Q)
    if set(P) & set(Q):
        raise ValueError("P and Q must be disjoint")
    lhs = volume(A, set(P) | set(Q)).volume
    base = A[:, list(P.indices)]
    rhs = volume(A, P).volume * math.prod(projection_distance(A[:, q], base) for q in Q)
    return CheckReport(
        "union_lemma", lhs <= rhs + SLACK, lhs, rhs, SLACK, {"P": list(P.indices), "Q": list(Q.indices)}
    )


def check_greedy_ratio(A, k: int, cap: int = DEFAULT_CAP) -> CheckReport:
    """Vol(greedy) >= Vol(exact) / k!."""
    g = greedy_select(A, k)
    e = exact_select(A, k, cap=cap)
    rhs = e.volume.volume / math.factorial(k)
    return CheckReport(
        "greedy_ratio",
        g.volume.volume >= rhs - EXACT_SLACK,
        g.volume.volume,
        rhs,
        EXACT_SLACK,
        {
            "k": k,
            "greedy": list(g.selection.indices),
            "exact": list(e.selection.indices),
            "exact_volume": e.volume.volume,
            "ratio": g.volume.volume / e.volume.volume if e.volume.volume else None,
        },
    )


def max_abs_minor(A, k: int, cap: int = 10**6) -> float:
    """Largest |det| over all k x k submatrices, by enumeration."""
    A = as_matrix(A)
    m, n = A.shape
    rows = list(itertools.combinations(range(m), k))
    cols = list(itertools.combinations(range(n), k))
    if len(rows) * len(cols) > cap:
        raise ValueError(f"{len(rows) * len(cols)} blocks exceed the cap {cap}")
    r = np.array(rows)[:, None, :, None]
    c = np.array(cols)[None, :, None, :]
    return float(np.abs(np.linalg.det(A[r, c])).max())


def check_gt_bound(A, k: int, rows, cols, cap: int = 10**6) -> CheckReport:
    """||A22 - A21 A11^-1 A12||_max <= mu (k+1) sigma_{k+1}(A), mu brute-forced."""
    A = as_matrix(A)
    m, n = A.shape
    rows, cols = list(rows), list(cols)
    if len(rows) != k or len(cols) != k or len(set(rows)) != k or len(set(cols)) != k:
        raise ValueError("need k distinct rows and k distinct columns")
    if k >= min(m, n):
        raise ValueError("k must be smaller than both dimensions")
    det = abs(float(np.linalg.det(A[np.ix_(rows, cols)])))
    vmax = max_abs_minor(A, k, cap)
    if det <= 1e-12 * max(vmax, 1.0):
        raise ValueError("chosen block is singular")
    mu = vmax / det
    pr = rows + [i for i in range(m) if i not in rows]
    pc = cols + [j for j in range(n) if j not in cols]
    B = A[np.ix_(pr, pc)]
    schur = B[k:, k:] - B[k:, :k] @ np.linalg.solve(B[:k, :k], B[:k, k:])
    lhs = float(np.abs(schur).max())
    sigma = singular_values(A)
    rhs = mu * (k + 1) * float(sigma[k])
    return CheckReport(
        "gt_bound", lhs <= rhs + SLACK, lhs, rhs, SLACK, {"k": k, "rows": rows, "cols": cols, "mu": mu}
    )


def check_pan_bounds(A, k: int, mu: float = 1.0, selection=None) -> CheckReport:
    """RRQR bounds for a column set that is a local mu-maximum.

    sigma_min(R11) >= sigma_k(A) / f and sigma_1(R22) <= f sigma_{k+1}(A)
    with f = sqrt(k (n - k) mu^2 + 1). ``selection`` defaults to the result
    of :func:`local_search` from the greedy start.
    """
    A = as_matrix(A)
    m, n = A.shape
    if not 1 <= k < min(m, n):
        raise ValueError("need 1 <= k < min(m, n)")
    if selection is None:
        selection = local_search(A, k, mu).selection
    S = as_selection(selection)
    if S.k != k or not is_local_mu_maximum(A, S, mu):
        raise ValueError("first-k block is not a local mu-maximum")
    perm = list(S.indices) + [j for j in range(n) if j not in S.indices]
    R = np.linalg.qr(A[:, perm], mode="r")
    s11 = singular_values(R[:k, :k])
    s22 = singular_values(R[k:, k:])
    sigma = singular_values(A)
    f = math.sqrt(k * (n - k) * mu**2 + 1)
    low_lhs, low_rhs = float(s11[-1]), float(sigma[k - 1]) / f
    up_lhs, up_rhs = float(s22[0]), f * float(sigma[k])
    ok_low = low_lhs >= low_rhs - SLACK
    ok_up = up_lhs <= up_rhs + SLACK
    # report the tighter of the two inequalities as lhs/rhs
    if (low_lhs - low_rhs) <= (up_rhs - up_lhs):
        lhs, rhs = low_rhs, low_lhs
    else:
        lhs, rhs = up_lhs, up_rhs
    return CheckReport(
        "pan_bounds",
        ok_low and ok_up,
        lhs,
        rhs,
        SLACK,
        {
            "k": k,
            "mu": mu,
            "selection": list(S.indices),
            "sigma_min_R11": low_lhs,
            "sigma_k_over_f": low_rhs,
            "sigma_1_R22": up_lhs,
            "f_sigma_k_plus_1": up_rhs,
        },
    )


def brute_force_soundness_probe(L: LabelCoverInstance, ell: int = 1, cap: int = DEFAULT_CAP) -> CheckReport:
    """Exact MAX-VOL optimum is 1 exactly when the Label Cover optimum is 1."""
    inst = build_maxvol_instance(L, ell)
    opt, _ = labelcover_optimum(L)
    best = exact_select(inst.matrix, inst.k, cap=cap)
    vol = best.volume.volume
    if opt == 1.0:
        ok, rhs = abs(vol - 1.0) <= SLACK, 1.0
    else:
        ok, rhs = vol < 1.0 - 1e-6, 1.0 - 1e-6
    return CheckReport(
        "soundness_probe",
        ok,
        vol,
        rhs,
        SLACK if opt == 1.0 else 0.0,
        {"opt": opt, "N": inst.N, "k": inst.k, "selection": list(best.selection.indices)},
    )


# --- seeded suites ----------------------------------------------------------


def greedy_ratio_suite(trials: int = 50, seed: int = 0, shape=(6, 6), k: int = 3) -> list[CheckReport]:
    rng = np.random.default_rng(seed)
    return [check_greedy_ratio(rng.standard_normal(shape), k) for _ in range(trials)]


def union_lemma_suite(trials: int = 200, seed: int = 0, size: int = 8, max_q: int = 4) -> list[CheckReport]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(trials):
        A = rng.standard_normal((size, size))
        q = int(rng.integers(1, max_q + 1))
        p = int(rng.integers(0, size - q + 1))
        perm = rng.permutation(size)
        out.append(check_union_lemma(A, perm[:p], perm[p : p + q]))
    return out


def gt_bound_suite(trials: int = 25, seed: int = 0, size: int = 4, k: int = 2) -> list[CheckReport]:
    """Every nonsingular k x k block of each random matrix, max-volume block included."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(trials):
        A = rng.standard_normal((size, size))
        for rows in itertools.combinations(range(size), k):
            for cols in itertools.combinations(range(size), k):
                if abs(np.linalg.det(A[np.ix_(rows, cols)])) < 1e-8:
                    continue
                out.append(check_gt_bound(A, k, rows, cols))
    return out


def pan_bounds_suite(trials: int = 25, seed: int = 0, size: int = 6, k: int = 2, mu: float = 1.0) -> list[CheckReport]:
    rng = np.random.default_rng(seed)
    return [check_pan_bounds(rng.standard_normal((size, size)), k, mu) for _ in range(trials)]


def duplicate_selections(inst: MaxVolInstance, trials: int, seed: int, max_dups: int = 3) -> list:
    """Size-k selections with at least one forced same-vertex duplicate.

    Starts from a random one-per-vertex selection, then repeatedly drops one
    vertex's column and adds an unused label of a vertex already present.
    """
    L = inst.source
    rng = np.random.default_rng(seed)
    owners = [(V_SIDE, v, L.sigma_v) for v in range(L.v_count)] + [(W_SIDE, w, L.sigma_w) for w in range(L.w_count)]
    out = []
    for _ in range(trials):
        chosen: dict[tuple[int, int], set[int]] = {
            (s, x): {int(rng.integers(0, size))} for s, x, size in owners
        }
        for _ in range(int(rng.integers(1, max_dups + 1))):
            growable = [key for key, labs in chosen.items() if len(labs) < (L.sigma_v if key[0] == V_SIDE else L.sigma_w)]
            if not growable:
                break
            grow = growable[int(rng.integers(len(growable)))]
            victims = [key for key in chosen if key != grow]
            victim = victims[int(rng.integers(len(victims)))]
            labs = chosen[victim]
            labs.discard(sorted(labs)[int(rng.integers(len(labs)))])
            if not labs:
                del chosen[victim]
            size = L.sigma_v if grow[0] == V_SIDE else L.sigma_w
            free = [i for i in range(size) if i not in chosen[grow]]
            chosen[grow].add(free[int(rng.integers(len(free)))])
        cols = [inst.column(s, x, i) for (s, x), labs in chosen.items() for i in labs]
        out.append(as_selection(cols))
    return out


def duplicate_bound_suite(inst: MaxVolInstance, trials: int = 100, seed: int = 0) -> list[CheckReport]:
    return [check_duplicate_bound(inst, S) for S in duplicate_selections(inst, trials, seed)]


# (v_count, w_count, sigma_v, sigma_w, planted); all complete bipartite
PROBE_SHAPES = (
    (2, 2, 2, 2, True),
    (2, 2, 2, 2, False),
    (2, 2, 3, 2, False),
    (3, 2, 2, 2, True),
    (3, 2, 2, 2, False),
    (2, 3, 3, 2, False),
    (2, 2, 3, 3, False),
)


def soundness_probe_instances(seed: int = 0) -> list[LabelCoverInstance]:
    """Tiny Label Cover instances (at most 20 MAX-VOL columns) plus a
    two-edge instance whose optimum is exactly 1/2."""
    from .reduction.labelcover import complete_bipartite_labelcover

    out = [
        complete_bipartite_labelcover(v, w, sv, sw, seed + i, planted=p)
        for i, (v, w, sv, sw, p) in enumerate(PROBE_SHAPES)
    ]
    # two V vertices share one W vertex but force opposite labels on it
    out.append(LabelCoverInstance(2, 1, 1, 2, np.array([[0, 0], [1, 0]]), np.array([[0], [1]])))
    return out


def soundness_probe_suite(seed: int = 0) -> list[CheckReport]:
    reports = []
    for L in soundness_probe_instances(seed):
        ell = max(1, math.ceil(math.log2(L.sigma_w)))
        reports.append(brute_force_soundness_probe(L, ell))
    return reports
