from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from framelab.errors import ComplexNotSupported, NormsDiffer, SingularOperator, UnrealizableNorms
from framelab.formats import load_fixture
from framelab.frame_model import Subspace, SubspaceFamily, VectorFamily
from framelab.phase_retrieval import (
    apply_invertible,
    equimodular_onb,
    johnsex_measurements,
    norm_retrieval_spanning_check,
    norm_retrieval_subspaces_real,
    norm_retrieval_vectors_real,
    onb_union,
    pr_subspaces_real,
    pr_vectors_complex_necessary,
    pr_vectors_real,
    project_family,
    reconstruct_johnsex,
)
from framelab.spark_cp import check_complement_property


def families(max_m=5, max_n=3):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n).filter(any),
                           min_size=1, max_size=max_m))


def test_pr_fail_witness_is_exact():
    f = load_fixture("two_in_r2").obj
    cert = pr_vectors_real(f)
    assert cert.decision == "FAIL" and cert.verification == "exact"
    assert oracles.is_real_pr_witness(f.rows_as_lists(), cert.witness["x"], cert.witness["y"])
    assert pr_vectors_real(load_fixture("full_spark_3in2").obj).decision == "PASS_exact"


def test_pr_float_witness():
    rng = np.random.default_rng(0)
    q = np.linalg.qr(rng.standard_normal((3, 3)))[0]
    f = VectorFamily.from_rows(np.array([[1.0, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0]]) @ q.T)
    cert = pr_vectors_real(f)
    assert cert.decision == "FAIL" and cert.arithmetic_mode == "float"
    x, y = np.array(cert.witness["x"]), np.array(cert.witness["y"])
    a = f.vectors
    assert np.abs(np.abs(a @ x) - np.abs(a @ y)).max() < 1e-8
    assert min(np.linalg.norm(x - y), np.linalg.norm(x + y)) > 1e-3


def test_complex_necessary_condition():
    f = VectorFamily.from_rows([[1, 0], [0, 1j]])
    assert pr_vectors_complex_necessary(f).decision == "FAIL"
    g = VectorFamily.from_rows([[1, 0], [0, 1], [1, 1], [1, 1j]])
    assert pr_vectors_complex_necessary(g).decision == "INCONCLUSIVE_NECESSARY_PASSED"
    with pytest.raises(ComplexNotSupported):
        pr_vectors_real(g)


def test_norm_retrieval_vectors():
    # an orthonormal basis gives norm retrieval but not phase retrieval
    e = VectorFamily.from_rows([[1, 0], [0, 1]])
    assert norm_retrieval_vectors_real(e).decision == "PASS_exact"
    assert pr_vectors_real(e).failed
    cert = norm_retrieval_vectors_real(VectorFamily.from_rows([[1, 1], [0, 1]]))
    assert cert.failed and cert.verification == "exact"
    x, y = cert.witness["x"], cert.witness["y"]
    assert cert.witness["norm_sq_difference"] == oracles.dot(x, x) - oracles.dot(y, y) != 0
    assert all(abs(oracles.dot(x, r)) == abs(oracles.dot(y, r)) for r in [[1, 1], [0, 1]])


def test_norm_retrieval_inside_subspace():
    w1 = Subspace.from_spanning([[1, 0, 0], [0, 1, 0]])
    assert norm_retrieval_vectors_real(VectorFamily.from_rows([[1, 0, 0], [0, 1, 0]]), within=w1).passed
    # the skewed basis {e1 + e2, e2} of the same plane does not retrieve norms
    cert = norm_retrieval_vectors_real(VectorFamily.from_rows([[1, 1, 0], [0, 1, 0]]), within=w1)
    assert cert.failed
    x = np.array(cert.witness["x"], dtype=object)
    assert x[2] == 0  # the witness stays inside the plane


@settings(max_examples=80, deadline=None)
@given(families())
def test_pr_implies_nr_and_witnesses_check_out(rows):
    n = len(rows[0])
    f = VectorFamily.from_rows(rows, dim=n)
    pr = pr_vectors_real(f)
    nr = norm_retrieval_vectors_real(f)
    if pr.passed:
        assert nr.passed
    else:
        assert oracles.is_real_pr_witness(rows, pr.witness["x"], pr.witness["y"])
    if nr.failed:
        x, y = nr.witness["x"], nr.witness["y"]
        assert all(abs(oracles.dot(x, r)) == abs(oracles.dot(y, r)) for r in rows)
        assert oracles.dot(x, x) != oracles.dot(y, y)


def test_pr_subspaces_lines_match_vectors():
    lines = SubspaceFamily.from_spanning_sets([[[1, 0]], [[0, 1]], [[1, 1]]])
    cert = pr_subspaces_real(lines, budget=20, seed=1)
    assert cert.decision == "PASS_budgeted" and cert.min_residual > 1e-3
    two = SubspaceFamily.from_spanning_sets([[[1, 0]], [[0, 1]]])
    fail = pr_subspaces_real(two, budget=20)
    assert fail.decision == "FAIL" and fail.verification == "exact"


def test_pr_subspaces_johnsex_and_operator():
    sf = load_fixture("johnsex_subspaces").obj
    assert pr_subspaces_real(sf, budget=40, seed=3).decision == "PASS_budgeted"
    t = load_fixture("johnsex2_operator").operator
    cert = pr_subspaces_real(apply_invertible(sf, t), budget=40, seed=3)
    assert cert.decision == "FAIL"
    with pytest.raises(SingularOperator):
        apply_invertible(sf, [[1, 0, 0], [1, 0, 0], [0, 0, 1]])


def test_pr_subspaces_thread_count_does_not_change_results(monkeypatch):
    sf = load_fixture("johnsex_subspaces").obj
    monkeypatch.setenv("FRAMELAB_THREADS", "1")
    one = pr_subspaces_real(sf, budget=30, seed=4)
    monkeypatch.setenv("FRAMELAB_THREADS", "4")
    four = pr_subspaces_real(sf, budget=30, seed=4)
    assert one.to_dict() == four.to_dict()


def test_norm_retrieval_subspaces():
    perp = load_fixture("johnsex_perp").obj
    assert norm_retrieval_subspaces_real(perp, budget=20, seed=0).decision == "PASS_budgeted"
    skew = SubspaceFamily.from_spanning_sets([[[1, 1]], [[0, 1]]])
    cert = norm_retrieval_subspaces_real(skew, budget=20)
    assert cert.decision == "FAIL" and cert.verification == "exact"
    assert cert.witness["norm_sq_difference"] != 0


def test_spanning_check_premises():
    sf = load_fixture("johnsex_subspaces").obj
    onbs = [w.basis_rows() for w in sf]
    ok = norm_retrieval_spanning_check(sf, onbs)
    assert not ok.details["failed_premises"]
    skewed = [VectorFamily.from_rows([[1, 1, 0], [0, 1, 0]])] + onbs[1:]
    bad = norm_retrieval_spanning_check(sf, skewed)
    assert bad.decision == "PREMISE_FAILED" and bad.details["failed_premises"] == [1]
    # the flattened family is the one whose complement property fails
    assert bad.details["flattened_pr"] == "FAIL"


def test_onb_union_normalizes():
    union, prov = onb_union(load_fixture("johnsex_subspaces").obj)
    assert np.allclose(np.linalg.norm(union.vectors, axis=1), 1.0)
    assert len(prov) == 7
    rotated, _ = onb_union(load_fixture("johnsex_subspaces").obj, basis_choice=3)
    assert rotated.M == 7


def test_project_family_keeps_cp():
    f = load_fixture("six_in_r3").obj
    w = Subspace.from_spanning([[1, 0, 0], [0, 1, 1]])
    g = project_family(f, w)
    assert g.exact and g.N == 2
    flt = project_family(f.as_float(), w.as_float())
    assert check_complement_property(g).decision == check_complement_property(flt).decision


def test_johnsex_measurements_match_projectors():
    sf = load_fixture("johnsex_subspaces").obj
    x = np.array([0.3, -1.2, 2.0])
    want = [oracles.proj_sq_norm(np.array(p, dtype=float), x) for p in sf.projectors()]
    assert np.allclose(johnsex_measurements(x), want)


@pytest.mark.parametrize("x,branch", [
    ([1.0, 2.0, -3.0], "alpha1_nonzero"),
    ([0.0, 2.0, -3.0], "alpha1_zero"),
    ([0.0, 0.0, 4.0], "single"),
])
def test_reconstruct_branches(x, branch):
    xh, got = reconstruct_johnsex(johnsex_measurements(np.array(x)))
    assert got == branch
    assert min(np.linalg.norm(xh - x), np.linalg.norm(xh + x)) < 1e-12


def test_reconstruct_rejects_bad_norms():
    with pytest.raises(UnrealizableNorms):
        reconstruct_johnsex([1, 2, 0, 0, 0, 0])
    with pytest.raises(UnrealizableNorms):
        reconstruct_johnsex([1, 1, 1, 5, 5, 5])
    with pytest.raises(UnrealizableNorms):
        reconstruct_johnsex([1, 1])


def test_equimodular_cases():
    w = Subspace.from_spanning(np.array([[1.0, 0, 0], [0, 1.0, 0]]))
    assert equimodular_onb(w, [0, 0, 1.0], [0, 0, 2.0]).case == 0
    assert equimodular_onb(w, [1.0, 0, 0], [-1.0, 0, 5.0]).case == 1
    assert equimodular_onb(w, [1.0, 0, 0], [0, 1.0, 0]).case == 2
    eb = equimodular_onb(w, [1.0, 0, 0], [0.6, 0.8, 0])
    assert eb.case == 3
    b = eb.basis
    assert np.allclose(np.abs(b.T @ [1.0, 0, 0]), np.abs(b.T @ [0.6, 0.8, 0]))
    with pytest.raises(NormsDiffer):
        equimodular_onb(w, [1.0, 0, 0], [2.0, 0, 0])


def test_exact_subspace_equimodular():
    w = Subspace.from_spanning([[1, 1, 0], [0, 0, 1]])
    x = np.array([1.0, 1.0, 0.0])
    y = np.array([0.0, 0.0, np.sqrt(2)])
    eb = equimodular_onb(w, x, y)
    assert eb.case == 2
    assert np.allclose(np.abs(eb.basis.T @ x), np.abs(eb.basis.T @ y))
    assert Fraction(1, 2) == w.projector[0, 0]
