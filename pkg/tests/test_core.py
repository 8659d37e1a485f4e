import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxvol import ColumnSelection, format_matrix, parse_matrix, projection_distance, singular_values, volume
from maxvol.core import MatrixFormatError


def gram_volume(A, cols):
    G = A[:, list(cols)]
    return np.sqrt(max(np.linalg.det(G.T @ G), 0.0))


def test_identity_volume():
    res = volume(np.eye(3), [0, 1, 2])
    assert res.volume == 1.0
    assert res.residual_norms == (1.0, 1.0, 1.0)
    assert res.log2_volume == 0.0


def test_three_vector_example(three_vectors):
    res = volume(three_vectors, [0, 2])
    assert res.volume == pytest.approx(0.6, rel=1e-14)
    sub = three_vectors[:, [0, 2]]
    assert res.volume == pytest.approx(abs(np.linalg.det(sub)), rel=1e-14)
    assert res.volume == pytest.approx(gram_volume(three_vectors, [0, 2]), rel=1e-12)


def test_repeated_direction_has_zero_volume():
    A = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 1.0], [0.5, 0.5, 3.0]])
    res = volume(A, [0, 1, 2])
    assert res.volume == 0.0
    assert res.log2_volume == -np.inf


def test_empty_selection_is_one():
    assert volume(np.eye(2), []).volume == 1.0


def test_errors():
    with pytest.raises(IndexError):
        volume(np.eye(2), [0, 2])
    with pytest.raises(ValueError):
        volume(np.array([[np.nan, 1.0]]), [0])
    with pytest.raises(ValueError):
        ColumnSelection((2, 1))
    with pytest.raises(ValueError):
        ColumnSelection.of([1, 1])


@pytest.mark.parametrize(
    "q, P, expected",
    [
        ([0.0, 1.0], [[1.0], [0.0]], 1.0),
        ([0.8, 0.6], [[1.0], [0.0]], 0.6),
        ([1.0, 0.0], [[1.0], [0.0]], 0.0),
    ],
)
def test_projection_distance(q, P, expected):
    assert projection_distance(q, np.array(P)) == pytest.approx(expected, abs=1e-15)


def test_projection_distance_empty_and_mismatch():
    assert projection_distance([3.0, 4.0], np.zeros((2, 0))) == 5.0
    with pytest.raises(ValueError):
        projection_distance([1.0, 0.0, 0.0], np.eye(2))


def test_projection_distance_vs_lstsq():
    rng = np.random.default_rng(3)
    for _ in range(20):
        P = rng.standard_normal((7, 3))
        q = rng.standard_normal(7)
        coef, *_ = np.linalg.lstsq(P, q, rcond=None)
        assert projection_distance(q, P) == pytest.approx(np.linalg.norm(q - P @ coef), rel=1e-10)


def test_singular_values_examples(backend):
    assert np.allclose(singular_values(np.eye(3)), [1, 1, 1], atol=1e-15)
    D = np.diag([3.0, 2.0, 1.0])[[2, 0, 1]]
    assert np.allclose(singular_values(D), [3, 2, 1], rtol=1e-14)
    s = singular_values(np.array([[1.0, 1.0], [0.0, 1.0]]))
    phi = (1 + np.sqrt(5)) / 2
    assert s == pytest.approx([phi, 1 / phi], rel=1e-12)
    assert s[0] * s[1] == pytest.approx(1.0, rel=1e-12)


def test_singular_values_match_numpy(backend):
    rng = np.random.default_rng(11)
    for shape in [(5, 5), (8, 3), (3, 8), (1, 4), (6, 1)]:
        A = rng.standard_normal(shape)
        assert singular_values(A) == pytest.approx(np.linalg.svd(A, compute_uv=False), rel=1e-10, abs=1e-13)


def test_singular_values_nonconvergence_reported():
    from maxvol import ConvergenceError

    A = np.random.default_rng(0).standard_normal((6, 6))
    with pytest.raises(ConvergenceError):
        singular_values(A, max_sweeps=1)


def test_matrix_text_roundtrip():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((4, 3)) * 10.0 ** rng.integers(-8, 8, size=(4, 3))
    B = parse_matrix(format_matrix(A))
    assert np.array_equal(A, B)
    assert format_matrix(B) == format_matrix(A)


@pytest.mark.parametrize("text", ["", "2 2\n1 2\n", "2 2\n1 2\n3\n", "x y\n", "1 1\nnan\n", "1 2\n1 a\n"])
def test_matrix_text_errors(text):
    with pytest.raises(MatrixFormatError):
        parse_matrix(text)


matrices = st.integers(0, 2**31).map(lambda s: np.random.default_rng(s).standard_normal((7, 7)))


@settings(max_examples=60, deadline=None)
@given(A=matrices, data=st.data())
def test_order_invariance_and_gram(A, data):
    k = data.draw(st.integers(1, 6))
    cols = data.draw(st.permutations(range(7)))[:k]
    ref = volume(A, cols).volume
    # process in a different order by permuting the matrix columns
    perm = data.draw(st.permutations(range(k)))
    B = A[:, [cols[p] for p in perm]]
    assert volume(B, range(k)).volume == pytest.approx(ref, rel=1e-10)
    assert ref**2 == pytest.approx(np.linalg.det(A[:, cols].T @ A[:, cols]), rel=1e-9)
    res = volume(A, cols)
    assert res.volume == pytest.approx(np.prod(res.residual_norms), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(A=matrices, data=st.data())
def test_monotone_contraction(A, data):
    k = data.draw(st.integers(1, 5))
    cols = data.draw(st.permutations(range(7)))
    S, j = cols[:k], cols[k]
    assert volume(A, list(S) + [j]).volume <= volume(A, S).volume * np.linalg.norm(A[:, j]) * (1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(A=matrices)
def test_singular_value_product_is_abs_det(A):
    assert np.prod(singular_values(A)) == pytest.approx(abs(np.linalg.det(A)), rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(A=st.integers(0, 2**31).map(lambda s: np.random.default_rng(s).standard_normal((8, 8))), data=st.data())
def test_union_lemma_property(A, data):
    cols = data.draw(st.permutations(range(8)))
    q = data.draw(st.integers(1, 4))
    p = data.draw(st.integers(0, 8 - q))
    P, Q = cols[:p], cols[p : p + q]
    lhs = volume(A, list(P) + list(Q)).volume
    rhs = volume(A, P).volume * np.prod([projection_distance(A[:, c], A[:, list(P)]) for c in Q])
    assert lhs <= rhs + 1e-9


def test_volume_gram_consistency_enumerated():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((6, 6))
    for k in range(1, 7):
        for cols in itertools.combinations(range(6), k):
            assert volume(A, cols).volume == pytest.approx(gram_volume(A, cols), rel=1e-9)
