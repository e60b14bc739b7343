import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framelab.errors import DimensionMismatch, NotParseval
from framelab.frame_model import VectorFamily, gram_matrix, is_parseval
from framelab.naimark import naimark_complement, random_parseval_frame, verify_naimark_pair
from framelab.spark_cp import is_full_spark

S = np.sqrt(2 / 3)
MERCEDES = [[S, 0.0], [-S / 2, 1 / np.sqrt(2)], [-S / 2, -1 / np.sqrt(2)]]


def test_mercedes_complement():
    f = VectorFamily.from_rows(MERCEDES)
    g = naimark_complement(f)
    assert g.N == 1 and g.M == 3
    # rows of [T | U] are orthonormal, so every psi_i has norm 1/sqrt(3)
    assert np.allclose(np.abs(g.vectors[:, 0]), 1 / np.sqrt(3))
    assert verify_naimark_pair(f, g).passed


def test_orthonormal_basis_has_zero_complement():
    g = naimark_complement(VectorFamily.from_rows(np.eye(3)))
    assert g.zero_complement and g.vectors.shape == (3, 0)


def test_exact_input_note_and_errors():
    g = naimark_complement(VectorFamily.from_rows([[1, 0], [0, 1]]))
    assert g.notes
    with pytest.raises(NotParseval):
        naimark_complement(VectorFamily.from_rows([[1.0, 0.0], [0.0, 2.0]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 4), st.booleans(), st.integers(0, 2**32 - 1))
def test_naimark_identities(n, extra, complex_, seed):
    rng = np.random.default_rng(seed)
    f = random_parseval_frame(n + extra, n, rng, complex_)
    g = naimark_complement(f)
    assert is_parseval(g)
    assert np.abs(gram_matrix(f) + gram_matrix(g) - np.eye(f.M)).max() <= 1e-10
    if extra:
        assert is_full_spark(f) == is_full_spark(g)
    # a random completion differs by a unitary, so the Gram matrix is the same
    h = naimark_complement(f, rng=np.random.default_rng(seed + 1))
    assert np.abs(gram_matrix(h) - gram_matrix(g)).max() <= 1e-10


def test_complement_of_complement_recovers_gram():
    f = random_parseval_frame(5, 2, np.random.default_rng(4))
    back = naimark_complement(naimark_complement(f))
    assert np.abs(gram_matrix(back) - gram_matrix(f)).max() <= 1e-10


def test_greedy_completion_is_deterministic():
    f = random_parseval_frame(6, 3, np.random.default_rng(8))
    assert np.array_equal(naimark_complement(f).vectors, naimark_complement(f).vectors)


def test_verify_pair_rejects():
    f = VectorFamily.from_rows(MERCEDES)
    bad = VectorFamily.from_rows([[1.0], [0.0], [0.0]])
    cert = verify_naimark_pair(f, bad)
    assert cert.failed and cert.details["gram_residual"] > 0.1
    with pytest.raises(DimensionMismatch):
        verify_naimark_pair(f, VectorFamily.from_rows([[1.0], [0.0]]))
    with pytest.raises(DimensionMismatch):
        verify_naimark_pair(f, VectorFamily.from_rows(np.eye(3)))
