"""Acceptance gate: one test per criterion, each at its stated tolerance and
runtime budget. A PASS/FAIL line per criterion is printed in the terminal
summary (see conftest.py). JIT compilation happens in the session warm-up
fixture and is not counted against the budgets.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from maxvol import (
    EnumerationCapError,
    exact_select,
    greedy_select,
    sample_subsets,
    volume,
    volume_sampling_distribution,
)
from maxvol.reduction import (
    V_SIDE,
    W_SIDE,
    assignment_to_labeling,
    build_gadget,
    build_maxvol_instance,
    compute_soundness_parameters,
    find_satisfying_assignment,
    labelcover_optimum,
    labeling_to_selection,
    parse_dimacs,
    sat_to_labelcover,
)
from maxvol.verifier import (
    brute_force_soundness_probe,
    check_gadget,
    duplicate_bound_suite,
    greedy_ratio_suite,
    gt_bound_suite,
    pan_bounds_suite,
    soundness_probe_instances,
    union_lemma_suite,
)

pytestmark = pytest.mark.acceptance

FIXTURE = Path(__file__).parent / "data" / "fixture_3sat5.cnf"
SEED = 20240601

# filled by the tests, printed by conftest.pytest_terminal_summary
RESULTS: dict[int, str] = {}


class Criterion:
    """Times a block and records one PASS/FAIL line for criterion ``num``."""

    def __init__(self, num: int, title: str, budget_s: float):
        self.num, self.title, self.budget = num, title, budget_s
        self.ok = True
        self.detail = ""

    def __enter__(self):
        RESULTS[self.num] = f"FAIL  {self.num:2d}. {self.title} (did not finish)"
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.elapsed = time.perf_counter() - self.t0
        in_time = self.elapsed < self.budget
        passed = exc_type is None and self.ok and in_time
        why = ""
        if exc_type is not None:
            why = f" [{exc_type.__name__}: {exc}]"
        elif not in_time:
            why = " [over budget]"
        RESULTS[self.num] = (
            f"{'PASS' if passed else 'FAIL'}  {self.num:2d}. {self.title}: {self.detail} "
            f"({self.elapsed:.3f}s < {self.budget:g}s){why}"
        )
        if exc_type is None:
            assert in_time, f"criterion {self.num} took {self.elapsed:.3f}s, budget {self.budget}s"
        return False

    def require(self, cond: bool, msg: str):
        if not cond:
            self.ok = False
            self.detail += f" {msg}"
        assert cond, msg


def test_01_gadget_exactness():
    with Criterion(1, "gadget exactness m=2..8", 1.0) as c:
        reports = [check_gadget(build_gadget(m)) for m in range(2, 9)]
        c.detail = f"{sum(r.passed for r in reports)}/7 orders exact"
        c.require(all(r.passed for r in reports), "gadget check failed")


def test_02_completeness_ell1():
    with Criterion(2, "completeness at l=1", 5.0) as c:
        F = parse_dimacs(FIXTURE.read_text())
        L = sat_to_labelcover(F)
        inst = build_maxvol_instance(L, 1)
        c.require((inst.M, inst.N, inst.k) == (60, 41, 8), f"sizes {(inst.M, inst.N, inst.k)}")
        assignment = find_satisfying_assignment(F)
        S = labeling_to_selection(inst, assignment_to_labeling(F, assignment))
        C = inst.matrix[:, list(S.indices)]
        G = C.T @ C
        max_dot = float(np.abs(G - np.diag(np.diag(G))).max())
        vol = volume(inst.matrix, S).volume
        c.require(max_dot <= 1e-12, f"max dot {max_dot:.3e}")
        c.require(abs(vol - 1) <= 1e-9, f"volume {vol!r}")
        with pytest.raises(EnumerationCapError):
            exact_select(inst.matrix, inst.k)
        g = greedy_select(inst.matrix, inst.k).volume.volume
        c.require(abs(g - 1) <= 1e-9, f"greedy volume {g!r}")
        c.detail = f"M,N,k=60,41,8 max|dot|={max_dot:.1e} vol={vol:.12f} greedy={g:.12f} exact skipped (cap)"


def test_03_unsat_edge_constant():
    with Criterion(3, "unsatisfied-edge dot 1/(2 sqrt 15)", 5.0) as c:
        F = parse_dimacs(FIXTURE.read_text())
        L = sat_to_labelcover(F)
        inst = build_maxvol_instance(L, 1)
        A = inst.matrix
        target = 1 / (2 * math.sqrt(15))
        worst, count = 0.0, 0
        for e, (v, w) in enumerate(L.edges):
            for i in range(L.sigma_v):
                for j in range(L.sigma_w):
                    if L.pi[e, i] == j:
                        continue
                    dot = float(A[:, inst.column(V_SIDE, v, i)] @ A[:, inst.column(W_SIDE, w, j)])
                    worst = max(worst, abs(dot - target))
                    count += 1
        c.detail = f"{count} triples, max deviation {worst:.1e}"
        c.require(count == 15 * 7, f"expected 105 triples, got {count}")
        c.require(worst <= 1e-12, "deviation above 1e-12")


def test_04_duplicate_bound():
    with Criterion(4, "duplicate bound (sqrt3/2)^d", 10.0) as c:
        F = parse_dimacs(FIXTURE.read_text())
        inst = build_maxvol_instance(sat_to_labelcover(F), 1)
        reports = duplicate_bound_suite(inst, 100, SEED)
        dots = [d for r in reports for d in (r.context["same_vertex_dots"] or [])]
        c.detail = (
            f"{sum(r.passed for r in reports)}/100 selections, "
            f"same-vertex dots in [{min(dots):.3f}, {max(dots):.3f}]"
        )
        c.require(len(reports) == 100, "wrong number of selections")
        c.require(all(r.context["d_v"] + r.context["d_w"] >= 1 for r in reports), "selection without duplicate")
        c.require(all(r.passed for r in reports), "bound violated")


def test_05_greedy_ratio():
    with Criterion(5, "greedy ratio Vol(greedy) >= Vol(exact)/3!", 2.0) as c:
        reports = greedy_ratio_suite(50, SEED, (6, 6), 3)
        worst = min(r.context["ratio"] for r in reports)
        c.detail = f"{sum(r.passed for r in reports)}/50, worst greedy/exact = {worst:.4f}"
        c.require(all(r.passed for r in reports), "ratio violated")


def test_06_union_lemma():
    with Criterion(6, "union lemma", 2.0) as c:
        reports = union_lemma_suite(200, SEED, 8, 4)
        c.detail = f"{sum(r.passed for r in reports)}/200 splits"
        c.require(all(r.passed for r in reports), "union lemma violated")


def test_07_volume_sampling():
    with Criterion(7, "volume sampling on the three-vector example", 3.0) as c:
        eps = 0.6
        A = np.array([[1.0, 0.0, math.sqrt(1 - eps**2)], [0.0, 1.0, eps]])
        dist = volume_sampling_distribution(A, 2)
        subsets = [tuple(S.indices) for S, _ in dist.entries]
        p = dist.probabilities
        c.require(subsets == [(0, 1), (0, 2), (1, 2)], f"subset order {subsets}")
        c.require(np.allclose(p, [0.5, 0.18, 0.32], atol=1e-12, rtol=0), f"probabilities {p}")
        n = 100_000
        draws = sample_subsets(dist, n, SEED)
        counts = np.array([sum(1 for S in draws if tuple(S.indices) == s) for s in subsets])
        sigma = np.sqrt(n * p * (1 - p))
        z = np.abs(counts - n * p) / sigma
        c.detail = f"p={np.round(p, 12).tolist()} counts={counts.tolist()} max z={z.max():.2f}"
        c.require(bool(np.all(z <= 3)), "draws outside 3 sigma")


def test_08_gt_bound():
    with Criterion(8, "Schur complement bound mu (k+1) sigma_3", 5.0) as c:
        # every nonsingular block of every matrix; the max-volume ones have mu = 1
        reports = gt_bound_suite(25, SEED, 4, 2)
        at_max = [r for r in reports if abs(r.context["mu"] - 1.0) <= 1e-12]
        c.detail = f"{sum(r.passed for r in reports)}/{len(reports)} blocks, {len(at_max)} of them max-volume"
        c.require(len(at_max) >= 25, "max-volume blocks missing from the sweep")
        c.require(all(r.passed for r in reports), "bound violated")


def test_09_rrqr_bounds():
    with Criterion(9, "RRQR bounds at a local 1-maximum", 5.0) as c:
        reports = pan_bounds_suite(25, SEED, 6, 2, 1.0)
        low = min(r.context["sigma_min_R11"] - r.context["sigma_k_over_f"] for r in reports)
        up = min(r.context["f_sigma_k_plus_1"] - r.context["sigma_1_R22"] for r in reports)
        c.detail = f"{sum(r.passed for r in reports)}/25, min margins lower={low:.3e} upper={up:.3e}"
        c.require(all(r.passed for r in reports), "RRQR bound violated")


def test_10_soundness_probe():
    with Criterion(10, "soundness probe on tiny Label Cover instances", 30.0) as c:
        probes = soundness_probe_instances(SEED)
        rows = []
        for L in probes:
            ell = max(1, math.ceil(math.log2(L.sigma_w)))
            inst = build_maxvol_instance(L, ell)
            c.require(inst.N <= 20, f"N={inst.N} above 20")
            opt, _ = labelcover_optimum(L)
            rep = brute_force_soundness_probe(L, ell)
            vol = rep.lhs
            c.require((abs(vol - 1) <= 1e-9) == (opt == 1.0), f"iff broken: opt={opt} vol={vol}")
            if opt < 1.0:
                c.require(vol < 1 - 1e-6, f"opt={opt} but vol={vol}")
            rows.append((opt, vol))
        below = sum(opt < 1 for opt, _ in rows)
        c.detail = f"{len(rows)} instances ({below} with OPT<1), max vol when OPT<1 = " + (
            f"{max(v for o, v in rows if o < 1):.6f}" if below else "n/a"
        )
        c.require(len(rows) >= 5, "fewer than 5 instances")
        c.require(0 < below < len(rows), "need both OPT=1 and OPT<1 instances")


def test_11_parameter_arithmetic():
    with Criterion(11, "soundness parameter arithmetic", 1.0) as c:
        p2 = compute_soundness_parameters(2)
        p1 = compute_soundness_parameters(1)
        c.require(abs(p2.c - 1 / 375) <= 1e-15, f"c(2)={p2.c!r}")
        c.require(abs(p1.epsilon1 - 0.10666666666666667) <= 1e-15, f"eps1(1)={p1.epsilon1!r}")
        for ell in range(2, 31):
            p = compute_soundness_parameters(ell)
            c.require(2 * p.epsilon1 < 1 / 27, f"2 eps1 >= 1/27 at l={ell}")
            c.require(2 * p.epsilon2 < 3 / 27, f"2 eps2 >= 3/27 at l={ell}")
        c.detail = f"c(2)={p2.c:.10g} eps1(1)={p1.epsilon1:.10g} bounds hold for l=2..30"
