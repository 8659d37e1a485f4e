"""Label Cover instances, the canonical Max-3SAT(5) reduction, and l-fold
parallel repetition."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .cnf import CnfFormula, validate_3sat5

DEFAULT_REPEAT_CAP = 5 * 10**7  # entries of the repeated constraint table


@dataclass(frozen=True, eq=False)
class LabelCoverInstance:
    """Bipartite projection game.

    ``edges[e] = (v, w)``; ``pi[e, i]`` is the W-label forced by V-label ``i``
    across edge ``e``.
    """

    v_count: int
    w_count: int
    sigma_v: int
    sigma_w: int
    edges: np.ndarray  # (E, 2) int64
    pi: np.ndarray  # (E, sigma_v) int64

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        pi = np.asarray(self.pi, dtype=np.int64).reshape(len(edges), self.sigma_v)
        edges.setflags(write=False)
        pi.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "pi", pi)
        if min(self.v_count, self.w_count, self.sigma_v, self.sigma_w) < 1:
            raise ValueError("vertex counts and alphabet sizes must be positive")
        if len(edges) and (
            edges[:, 0].min() < 0
            or edges[:, 0].max() >= self.v_count
            or edges[:, 1].min() < 0
            or edges[:, 1].max() >= self.w_count
        ):
            raise ValueError("edge endpoint out of range")
        if pi.size and (pi.min() < 0 or pi.max() >= self.sigma_w):
            raise ValueError("constraint value outside the W alphabet")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def v_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 0], minlength=self.v_count)

    def w_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 1], minlength=self.w_count)

    def is_biregular(self) -> bool:
        dv, dw = self.v_degrees(), self.w_degrees()
        return bool(dv.min() == dv.max() > 0 and dw.min() == dw.max() > 0)

    @property
    def v_degree(self) -> int:
        if not self.is_biregular():
            raise ValueError("instance is not biregular")
        return int(self.v_degrees()[0])

    @property
    def w_degree(self) -> int:
        if not self.is_biregular():
            raise ValueError("instance is not biregular")
        return int(self.w_degrees()[0])

    def __eq__(self, other):
        if not isinstance(other, LabelCoverInstance):
            return NotImplemented
        return (
            (self.v_count, self.w_count, self.sigma_v, self.sigma_w)
            == (other.v_count, other.w_count, other.sigma_v, other.sigma_w)
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.pi, other.pi)
        )

    def to_json(self) -> str:
        doc = {
            "v_count": self.v_count,
            "w_count": self.w_count,
            "sigma_v": self.sigma_v,
            "sigma_w": self.sigma_w,
            "edges": [
                {"v": int(v), "w": int(w), "pi": [int(x) for x in row]}
                for (v, w), row in zip(self.edges, self.pi)
            ],
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "LabelCoverInstance":
        doc = json.loads(text)
        try:
            edges = [(e["v"], e["w"]) for e in doc["edges"]]
            pi = [e["pi"] for e in doc["edges"]]
            sigma_v = int(doc["sigma_v"])
            if any(len(row) != sigma_v for row in pi):
                raise ValueError("every pi table needs sigma_v entries")
            return cls(
                int(doc["v_count"]),
                int(doc["w_count"]),
                sigma_v,
                int(doc["sigma_w"]),
                np.array(edges, dtype=np.int64).reshape(-1, 2),
                np.array(pi, dtype=np.int64).reshape(len(edges), sigma_v),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed Label Cover JSON: {exc}") from exc


@dataclass(frozen=True, eq=False)
class Labeling:
    v_labels: np.ndarray
    w_labels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v_labels", np.asarray(self.v_labels, dtype=np.int64))
        object.__setattr__(self, "w_labels", np.asarray(self.w_labels, dtype=np.int64))


def _check_labeling(L: LabelCoverInstance, sigma: Labeling):
    if sigma.v_labels.shape != (L.v_count,) or sigma.w_labels.shape != (L.w_count,):
        raise ValueError("labeling does not cover every vertex exactly once")
    if (sigma.v_labels.min() < 0 or sigma.v_labels.max() >= L.sigma_v
            or sigma.w_labels.min() < 0 or sigma.w_labels.max() >= L.sigma_w):
        raise ValueError("label out of range")


def satisfied_edges(L: LabelCoverInstance, sigma: Labeling) -> np.ndarray:
    _check_labeling(L, sigma)
    v, w = L.edges[:, 0], L.edges[:, 1]
    return L.pi[np.arange(L.num_edges), sigma.v_labels[v]] == sigma.w_labels[w]


def evaluate_labeling(L: LabelCoverInstance, sigma: Labeling) -> float:
    """Fraction of edges with pi_e(sigma(v)) == sigma(w)."""
    return float(satisfied_edges(L, sigma).mean())


def labelcover_optimum(L: LabelCoverInstance, cap: int = 10**6) -> tuple[float, Labeling]:
    """Exact optimum: enumerate V-labelings, then label each w optimally."""
    if L.sigma_v ** L.v_count > cap:
        raise ValueError(f"{L.sigma_v}^{L.v_count} V-labelings exceed the cap {cap}")
    e_idx = np.arange(L.num_edges)
    best, best_lab = -1, None
    for vl in itertools.product(range(L.sigma_v), repeat=L.v_count):
        vl = np.array(vl, dtype=np.int64)
        forced = L.pi[e_idx, vl[L.edges[:, 0]]]
        votes = np.zeros((L.w_count, L.sigma_w), dtype=np.int64)
        np.add.at(votes, (L.edges[:, 1], forced), 1)
        score = int(votes.max(axis=1).sum())
        if score > best:
            best, best_lab = score, Labeling(vl, votes.argmax(axis=1))
    return best / L.num_edges, best_lab


# --- Max-3SAT(5) -> Label Cover ---------------------------------------------


def clause_label_bits(label: int) -> tuple[bool, bool, bool]:
    """Literal truth values (first literal most significant) for a V-label."""
    b = label + 1  # labels 0..6 are the nonzero 3-bit patterns 1..7
    return bool(b & 4), bool(b & 2), bool(b & 1)


def sat_to_labelcover(F: CnfFormula) -> LabelCoverInstance:
    """V = clauses, W = variables, one edge per clause/variable incidence.

    A V-label is one of the 7 literal truth patterns satisfying the clause;
    the projection sends it to the truth value it gives the edge's variable.
    """
    problems = validate_3sat5(F)
    if problems:
        raise ValueError("not a Max-3SAT(5) formula: " + "; ".join(problems))
    edges, pi = [], []
    for c, clause in enumerate(F.clauses):
        for pos, lit in enumerate(clause):
            edges.append((c, abs(lit) - 1))
            row = []
            for label in range(7):
                lit_true = clause_label_bits(label)[pos]
                row.append(int(lit_true == (lit > 0)))
            pi.append(row)
    return LabelCoverInstance(len(F.clauses), F.num_vars, 7, 2, np.array(edges), np.array(pi))


def assignment_to_labeling(F: CnfFormula, assignment) -> Labeling:
    """Labeling induced by a truth assignment that satisfies every clause."""
    v_labels = []
    for c, clause in enumerate(F.clauses):
        bits = [bool(assignment[abs(l) - 1]) == (l > 0) for l in clause]
        code = 4 * bits[0] + 2 * bits[1] + bits[2]
        if code == 0:
            raise ValueError(f"assignment falsifies clause {c}: {clause}")
        v_labels.append(code - 1)
    return Labeling(np.array(v_labels), np.array([int(bool(a)) for a in assignment]))


# --- parallel repetition ----------------------------------------------------


def _mixed_radix(digits: np.ndarray, base: int) -> np.ndarray:
    """Encode rows of ``digits`` (coordinate 0 most significant)."""
    out = np.zeros(digits.shape[:-1], dtype=np.int64)
    for j in range(digits.shape[-1]):
        out = out * base + digits[..., j]
    return out


def repeat(L: LabelCoverInstance, ell: int, cap: int = DEFAULT_REPEAT_CAP) -> LabelCoverInstance:
    """l-fold Cartesian-product instance.

    Tuple vertices, edges and labels are mixed-radix integers with the first
    coordinate most significant; edges are all l-tuples of base edges in that
    order, and the constraint acts coordinatewise.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    E = L.num_edges
    n_edges, sv = E**ell, L.sigma_v**ell
    if n_edges * sv > cap:
        raise ValueError(f"repeated instance needs {n_edges}x{sv} constraint entries, over the cap {cap}")
    etup = np.array(list(itertools.product(range(E), repeat=ell)), dtype=np.int64).reshape(n_edges, ell)
    edges = np.stack(
        [_mixed_radix(L.edges[etup, 0], L.v_count), _mixed_radix(L.edges[etup, 1], L.w_count)], axis=1
    )
    # digits of every tuple label, coordinate 0 most significant
    labels = np.arange(sv, dtype=np.int64)
    ldig = np.stack([(labels // L.sigma_v ** (ell - 1 - j)) % L.sigma_v for j in range(ell)], axis=1)
    pi = np.zeros((n_edges, sv), dtype=np.int64)
    for j in range(ell):
        pi = pi * L.sigma_w + L.pi[etup[:, j][:, None], ldig[None, :, j]]
    return LabelCoverInstance(L.v_count**ell, L.w_count**ell, sv, L.sigma_w**ell, edges, pi)


def repeat_labeling(L: LabelCoverInstance, sigma: Labeling, ell: int) -> Labeling:
    """Lift a base labeling coordinatewise to the l-fold instance."""
    _check_labeling(L, sigma)
    vt = np.array(list(itertools.product(range(L.v_count), repeat=ell)), dtype=np.int64)
    wt = np.array(list(itertools.product(range(L.w_count), repeat=ell)), dtype=np.int64)
    return Labeling(
        _mixed_radix(sigma.v_labels[vt], L.sigma_v), _mixed_radix(sigma.w_labels[wt], L.sigma_w)
    )


# --- tiny synthetic instances ----------------------------------------------


def complete_bipartite_labelcover(v_count, w_count, sigma_v, sigma_w, seed, planted=False):
    """K_{v,w} with random projections; ``planted`` makes some labeling satisfy all."""
    rng = np.random.default_rng(seed)
    edges = np.array([(v, w) for v in range(v_count) for w in range(w_count)], dtype=np.int64)
    pi = rng.integers(0, sigma_w, size=(len(edges), sigma_v))
    if planted:
        vl = rng.integers(0, sigma_v, size=v_count)
        wl = rng.integers(0, sigma_w, size=w_count)
        pi[np.arange(len(edges)), vl[edges[:, 0]]] = wl[edges[:, 1]]
    return LabelCoverInstance(v_count, w_count, sigma_v, sigma_w, edges, pi)
