import numpy as np
import pytest

from framelab.augmentation import (
    augment_to_cp,
    complete_hyperplane_family,
    direct_sum_augment,
    is_admissible_next,
)
from framelab.errors import NotAFrame, PremiseFailed
from framelab.formats import load_fixture
from framelab.frame_model import VectorFamily
from framelab.phase_retrieval import pr_vectors_real
from framelab.spark_cp import check_complement_property, complement_deficiency

E = np.eye(4, dtype=int).tolist()
BLOCKS = [E[0], E[1], E[2], E[3], [1, 1, 0, 0], [0, 0, 1, 1]]


def test_two_vectors_in_the_plane():
    f = load_fixture("two_in_r2").obj
    added, trace = augment_to_cp(f, seed=7)
    assert added.M == 1 == trace["deficiency"] and trace["met_lower_bound"]
    assert check_complement_property(f.extend(added)).passed
    assert trace["rounds"][0]["still_deficient"] == 0
    again, _ = augment_to_cp(f, seed=7)
    assert again.rows_as_lists() == added.rows_as_lists()


def test_cp_family_needs_nothing():
    added, trace = augment_to_cp(load_fixture("full_spark_3in2").obj)
    assert added.M == 0 and trace["deficiency"] == 0 and trace["final_cp"] == "PASS"


def test_blocks_need_more_than_the_deficiency():
    f = VectorFamily.from_rows(BLOCKS)
    added, trace = augment_to_cp(f, seed=1)
    assert trace["deficiency"] == 2
    assert added.M == 3 and trace["extra_rounds"] == 1 and not trace["met_lower_bound"]
    assert check_complement_property(f.extend(added)).passed


def test_admissibility():
    f = load_fixture("two_in_r2").obj
    assert not is_admissible_next(f, [1, 0])
    assert not is_admissible_next(f, [0, 3])
    assert is_admissible_next(f, [1, 1])
    assert is_admissible_next(load_fixture("full_spark_3in2").obj, [1, 0])


def test_augment_rejects_non_frames():
    with pytest.raises(NotAFrame):
        augment_to_cp(VectorFamily.from_rows([[1, 0, 0], [0, 1, 0]]))


def test_float_family_is_augmented_exactly_when_rational():
    f = VectorFamily.from_rows([[0.5, 0.0], [0.0, 0.25]])
    added, trace = augment_to_cp(f, seed=2)
    assert added.M == 1 and trace["final_cp"] == "PASS"


def test_direct_sum():
    f1 = load_fixture("full_spark_3in2").obj
    f2 = VectorFamily.from_rows([[2]])
    added, trace = direct_sum_augment(f1, f2, seed=4)
    assert added.M == 2 and trace["final_cp"] == "PASS" and trace["combined_size"] == 6
    with pytest.raises(PremiseFailed) as exc:
        direct_sum_augment(load_fixture("two_in_r2").obj, f2)
    assert exc.value.partition is not None


def test_complete_hyperplane_family():
    f = load_fixture("johnsex5").obj
    f0, info = complete_hyperplane_family(f, seed=3)
    assert pr_vectors_real(f.extend([f0])).passed
    assert info["failing_splits"] == 1
    k, _ = complement_deficiency(f)
    assert k == 1


def test_complete_hyperplane_family_blocked():
    f = VectorFamily.from_rows([[1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(PremiseFailed) as exc:
        complete_hyperplane_family(f)
    part = exc.value.partition
    assert min(part.dim_subset, part.dim_complement) <= 1
