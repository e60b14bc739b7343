import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from framelab.errors import NotAFrame, ScanTooLarge, TooFewVectors
from framelab.formats import load_fixture
from framelab.frame_model import VectorFamily
from framelab.spark_cp import (
    blocking_partition,
    check_complement_property,
    complement_deficiency,
    cp_augmentation_number,
    cp_blocked_forever,
    hyperplane_partition_scan,
    is_full_spark,
    open_problem_probe,
    smallest_dependent_subset,
    spark,
)

E = np.eye(4, dtype=int).tolist()
# deficiency 2, yet 3 vectors are needed
BLOCKS = [E[0], E[1], E[2], E[3], [1, 1, 0, 0], [0, 0, 1, 1]]


def families(max_m=6, max_n=3):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n).filter(any),
                           min_size=1, max_size=max_m))


def test_spark_examples():
    f = load_fixture("six_in_r3").obj  # e1, e2, e3, e1+e2, e1+e3, e2+e3
    assert spark(f) == 3
    assert smallest_dependent_subset(f) == (1, 2, 4)
    assert not is_full_spark(f)
    g = load_fixture("full_spark_3in2").obj
    assert spark(g) == 3 and is_full_spark(g)
    assert spark(VectorFamily.from_rows([[1, 0], [0, 1]])) == 3
    with pytest.raises(TooFewVectors):
        is_full_spark(VectorFamily.from_rows([[1, 0, 0]]))


@settings(max_examples=120, deadline=None)
@given(families())
def test_cp_matches_minor_oracle(rows):
    n = len(rows[0])
    cert = check_complement_property(VectorFamily.from_rows(rows, dim=n))
    assert cert.passed == oracles.exact_cp(rows, n)
    if cert.failed:
        w = cert.witness
        assert w.dim_subset < n and w.dim_complement < n
        assert sorted(w.subset + w.complement) == list(range(1, len(rows) + 1))


@settings(max_examples=60, deadline=None)
@given(families(max_m=5))
def test_float_and_exact_cp_agree(rows):
    n = len(rows[0])
    exact = check_complement_property(VectorFamily.from_rows(rows, dim=n))
    rng = np.random.default_rng(len(rows))
    q = np.linalg.qr(rng.standard_normal((n, n)))[0]  # irrational rotation keeps float mode
    flt = check_complement_property(VectorFamily.from_rows(np.pi * np.array(rows, dtype=float) @ q.T))
    assert flt.arithmetic_mode == "float"
    assert exact.decision == flt.decision


def test_cp_backends_agree():
    f = load_fixture("johnsex5").obj
    a = check_complement_property(f, backend="python")
    b = check_complement_property(f)
    assert a.decision == b.decision == "FAIL"
    assert a.witness == b.witness


def test_cp_edge_cases():
    assert check_complement_property(VectorFamily.from_rows([], dim=0, exact=True)).passed
    assert check_complement_property(VectorFamily.from_rows([], dim=2, exact=True)).failed
    assert check_complement_property(VectorFamily.from_rows([[3]])).passed
    with pytest.raises(ScanTooLarge):
        check_complement_property(VectorFamily.from_rows(np.ones((25, 1), dtype=int).tolist()))


def test_deficiency_of_generic_family():
    rng = np.random.default_rng(5)
    for n in (2, 3, 4):
        for m in range(n, 2 * n):
            f = VectorFamily.from_rows(rng.integers(-50, 51, size=(m, n)).tolist())
            if not is_full_spark(f):
                continue
            k, part = complement_deficiency(f)
            assert k == 2 * n - 1 - m == cp_augmentation_number(f)
            if k:
                assert part.dim_subset < n


def test_deficiency_lower_bound_is_not_always_enough():
    f = VectorFamily.from_rows(BLOCKS)
    k, _ = complement_deficiency(f)
    assert k == 2
    assert cp_augmentation_number(f) == 3
    rng = np.random.default_rng(0)
    for _ in range(100):
        extra = rng.integers(-9, 10, size=(2, 4)).tolist()
        assert check_complement_property(f.extend(extra)).failed
    with pytest.raises(NotAFrame):
        complement_deficiency(VectorFamily.from_rows([[1, 0, 0], [0, 1, 0]]))


@settings(max_examples=60, deadline=None)
@given(families(max_m=6))
def test_augmentation_number_bounds_deficiency(rows):
    n = len(rows[0])
    f = VectorFamily.from_rows(rows, dim=n)
    if np.linalg.matrix_rank(np.array(rows, dtype=float)) < n:
        return
    k, _ = complement_deficiency(f)
    s = cp_augmentation_number(f)
    assert s >= k
    assert (s == 0) == check_complement_property(f).passed


def test_hyperplane_scan_johnsex():
    scan = hyperplane_partition_scan(load_fixture("johnsex5").obj)
    assert scan.all_hyperplanes and len(scan.partitions) == 1
    assert not cp_blocked_forever(load_fixture("johnsex5").obj)


def test_blocked_partition():
    f = VectorFamily.from_rows([[1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    part = blocking_partition(f)
    assert part is not None and min(part.dim_subset, part.dim_complement) == 1
    assert cp_blocked_forever(f)


def test_hyperplane_scan_of_subspaces():
    scan = hyperplane_partition_scan(load_fixture("johnsex_subspaces").obj)
    assert scan.partitions == [] and scan.all_hyperplanes
    assert scan.provenance[0] == (1, 1)


def test_open_problem_probe_records():
    recs = open_problem_probe(load_fixture("johnsex_subspaces").obj, trials=5, seed=1)
    assert len(recs) == 5 and all("smallest_side_dim" in r for r in recs)
