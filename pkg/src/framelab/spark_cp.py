"""Spark, full spark, the complement property and the structure of its failures.

All scans enumerate subsets by increasing size and bitmask order within a
size. Unordered splits {S, S^c} are represented by the side containing
vector 1, so a family of M vectors has 2^(M-1) splits. Results are
therefore deterministic and independent of the kernel backend.
"""

from itertools import combinations
from typing import NamedTuple

import numpy as np

from . import numerics as nm
from .certificates import Certificate, PartitionCertificate
from .errors import NotAFrame, TooFewVectors
from .frame_model import SubspaceFamily, VectorFamily
from .numerics import DEFAULT_TOL
from .subsets import SubsetRanker, check_scan_size, mask_indices, subset_order


def ranker(f, tol=DEFAULT_TOL, backend=None):
    return SubsetRanker(f.vectors, tol, backend)


def masks_of_size(m, k):
    return np.array([sum(1 << i for i in c) for c in combinations(range(m), k)], dtype=np.int64)


def partition_certificate(r, mask):
    mask = int(mask)
    rest = r.full ^ mask
    return PartitionCertificate(
        subset=mask_indices(mask),
        complement=mask_indices(rest),
        dim_subset=r.rank(mask) if mask else 0,
        dim_complement=r.rank(rest) if rest else 0,
        n=r.n,
    )


def smallest_dependent_subset(f, tol=DEFAULT_TOL):
    """First dependent subfamily of minimal size (1-based indices), or None if independent."""
    r = ranker(f, tol)
    for k in range(1, min(f.M, f.N + 1) + 1):
        masks = masks_of_size(f.M, k)
        hits = np.flatnonzero(r.ranks(masks) < k)
        if hits.size:
            return mask_indices(masks[hits[0]])
    return None


def spark(f, tol=DEFAULT_TOL):
    """Size of the smallest linearly dependent subfamily (M + 1 if independent)."""
    if f.M < 1:
        raise ValueError("spark needs at least one vector")
    dep = smallest_dependent_subset(f, tol)
    return f.M + 1 if dep is None else len(dep)


def is_full_spark(f, tol=DEFAULT_TOL):
    """Every N vectors of the family are linearly independent."""
    if f.M < f.N:
        raise TooFewVectors(f"full spark needs M >= N, got M={f.M}, N={f.N}")
    if f.N == 0:
        return True
    r = ranker(f, tol)
    return bool(np.all(r.ranks(masks_of_size(f.M, f.N)) == f.N))


def check_complement_property(f, tol=DEFAULT_TOL, force=False, backend=None):
    """Certify that every split of the family has a spanning side.

    PASS carries the enumeration digest; FAIL carries the first split (in
    enumeration order) where neither side spans.
    """
    check_scan_size(f.M, force)
    r = ranker(f, tol, backend)
    details = {"representatives": (1 << (f.M - 1)) if f.M else 1, "backend": r.backend}
    if f.M == 0:
        if f.N == 0:
            return Certificate("complement_property", "PASS", r.mode, None, {**details, "checked": 1, "pruned": 1})
        witness = PartitionCertificate((), (), 0, 0, f.N)
        return Certificate("complement_property", "FAIL", r.mode, witness, {**details, "checked": 1, "pruned": 0})
    order = subset_order(f.M, representatives=True)
    pos, checked, pruned = r.cp_search(order)
    details.update(checked=checked, pruned=pruned)
    if pos < 0:
        return Certificate("complement_property", "PASS", r.mode, None, details)
    return Certificate("complement_property", "FAIL", r.mode, partition_certificate(r, order[pos]), details)


def has_complement_property(f, tol=DEFAULT_TOL, force=False):
    return check_complement_property(f, tol, force).passed


def complement_deficiency(f, tol=DEFAULT_TOL, force=False):
    """(k, witness) with N - k = min dim span(I^c) over subsets I that do not span.

    k = 0 exactly when the complement property holds. The witness is the
    first minimizing I in enumeration order. This k is a lower bound on the
    number of vectors needed to reach the complement property; see
    :func:`cp_augmentation_number` for the exact count.
    """
    check_scan_size(f.M, force)
    r = ranker(f, tol)
    if nm.rank(f.vectors, tol) < f.N:
        raise NotAFrame("complement deficiency is defined for frames (spanning families)")
    t = r.table()
    order = subset_order(f.M)
    rs = t[order]
    rc = t[r.full ^ order]
    candidates = np.flatnonzero(rs < f.N)
    if candidates.size == 0:
        return 0, partition_certificate(r, 0)
    dims = rc[candidates]
    best = int(candidates[int(np.argmin(dims))])
    k = f.N - int(rc[best])
    return k, partition_certificate(r, order[best])


def doubly_deficient(r):
    """Representative masks of every split where neither side spans."""
    order = subset_order(r.m, representatives=True)
    t = r.table()
    bad = (t[order] < r.n) & (t[r.full ^ order] < r.n)
    return order[bad]


def cp_augmentation_number(f, tol=DEFAULT_TOL, force=False):
    """Fewest generic vectors whose addition gives the complement property.

    A split (I, I^c) with spans of dimensions a, b < N survives s added
    vectors exactly when they can be shared out so both sides stay below N,
    i.e. when s <= 2N - 2 - a - b. So the answer is the maximum of
    2N - 1 - a - b over doubly deficient splits, and 0 when there are none.
    """
    check_scan_size(f.M, force)
    r = ranker(f, tol)
    bad = doubly_deficient(r)
    if bad.size == 0:
        return 0
    t = r.table()
    return int(np.max(2 * f.N - 1 - t[bad].astype(int) - t[r.full ^ bad].astype(int)))


class HyperplaneScan(NamedTuple):
    partitions: list
    all_hyperplanes: bool
    n: int
    provenance: list


def _as_family(obj):
    if isinstance(obj, SubspaceFamily):
        return obj.onb_union()
    return obj, None


def hyperplane_partition_scan(obj, tol=DEFAULT_TOL, force=False):
    """Every split of the family (or of a subspace family's basis union) with no spanning side.

    ``all_hyperplanes`` is true when each such split has both spans of
    dimension N - 1 (vacuously true when there are none).
    """
    f, provenance = _as_family(obj)
    check_scan_size(f.M, force)
    r = ranker(f, tol)
    parts = [partition_certificate(r, mask) for mask in doubly_deficient(r)] if f.M else []
    return HyperplaneScan(parts, all(p.both_hyperplanes for p in parts), f.N, provenance)


def blocking_partition(obj, tol=DEFAULT_TOL, force=False):
    """First non-spanning split with a side of dimension <= N - 2, or None."""
    scan = hyperplane_partition_scan(obj, tol, force)
    for p in scan.partitions:
        if min(p.dim_subset, p.dim_complement) <= scan.n - 2:
            return p
    return None


def cp_blocked_forever(obj, tol=DEFAULT_TOL, force=False):
    """True when no single added vector or subspace can restore phase retrieval."""
    return blocking_partition(obj, tol, force) is not None


def open_problem_probe(sf, trials=20, seed=0, tol=DEFAULT_TOL):
    """Experiment helper: smallest side dimension of failing splits over random basis choices.

    Returns one record per trial. This only samples orthonormal bases and
    never decides the open question of whether such a basis must exist.
    """
    rng = np.random.default_rng(seed)
    records = []
    for t in range(trials):
        union, _ = sf.onb_union(rng=rng)
        scan = hyperplane_partition_scan(union, tol)
        smallest = min((min(p.dim_subset, p.dim_complement) for p in scan.partitions), default=None)
        records.append({"trial": t, "failing_splits": len(scan.partitions), "smallest_side_dim": smallest})
    return records


__all__ = [
    "spark",
    "smallest_dependent_subset",
    "is_full_spark",
    "check_complement_property",
    "has_complement_property",
    "complement_deficiency",
    "cp_augmentation_number",
    "hyperplane_partition_scan",
    "blocking_partition",
    "cp_blocked_forever",
    "open_problem_probe",
]
