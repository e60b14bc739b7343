"""Adding vectors until the complement property holds.

Candidates are random integer vectors in [-B, B]^N, accepted by exact span
membership tests, so every construction is verified rather than argued by
genericity.
"""

from typing import NamedTuple

import numpy as np

from . import numerics as nm
from .errors import CandidateBudgetExhausted, NotAFrame, PremiseFailed
from .frame_model import VectorFamily
from .numerics import DEFAULT_TOL
from .phase_retrieval import _require_real, pr_vectors_real
from .spark_cp import (
    check_complement_property,
    complement_deficiency,
    doubly_deficient,
    hyperplane_partition_scan,
    ranker,
)
from .subsets import SubsetRanker, check_scan_size

DEFAULT_BOUND = 10
DEFAULT_BUDGET = 1000


class AugmentResult(NamedTuple):
    added: VectorFamily
    trace: dict


def _draw(rng, n, bound):
    while True:
        c = rng.integers(-bound, bound + 1, size=n)
        if np.any(c):
            return [int(v) for v in c]


def _family(f):
    # exact when possible so membership tests never round
    a = f.vectors if f.exact else (nm.rationalize(f.vectors))
    return VectorFamily(a, f.field) if a is not None else f


def _outside_all(f, candidate, masks, tol):
    """candidate is outside span(S) for every mask S (rank goes up by one)."""
    if len(masks) == 0:
        return True
    g = f.extend([candidate]) if f.exact else VectorFamily(np.concatenate([f.vectors, [candidate]]))
    r = SubsetRanker(g.vectors, tol)
    masks = np.asarray(masks, dtype=np.int64)
    bit = np.int64(1) << f.M
    return bool(np.all(r.ranks(masks | bit) == r.ranks(masks) + 1))


def _deficient_sides(f, tol):
    r = ranker(f, tol)
    bad = doubly_deficient(r) if f.M else np.zeros(0, dtype=np.int64)
    return bad, (r.full ^ bad) if bad.size else bad


def is_admissible_next(f, candidate, tol=DEFAULT_TOL):
    """True iff candidate avoids span(I) and span(I^c) for every split with no spanning side."""
    f = _family(f)
    bad, comp = _deficient_sides(f, tol)
    if bad.size == 0:
        return True
    return _outside_all(f, candidate, np.concatenate([bad, comp]), tol)


def augment_to_cp(f, seed=0, bound=DEFAULT_BOUND, budget=DEFAULT_BUDGET, tol=DEFAULT_TOL, force=False):
    """Add admissible random vectors, one per round, until the complement property holds.

    The deficiency k is a lower bound on the number needed. Each round keeps
    the splits that are still doubly deficient (only those can stay so) and
    accepts the first candidate outside both spans of each of them. The
    trace records k, per-round draws and the growth of the original
    deficient splits: after round r both sides, each taken together with all
    added vectors, have dimension at least min(N, N - k + r).
    """
    _require_real(f)
    check_scan_size(f.M, force)
    if nm.rank(f.vectors, tol) < f.N:
        raise NotAFrame("augmentation needs a spanning family")
    f = _family(f)
    k, _ = complement_deficiency(f, tol, force)
    rng = np.random.default_rng(seed)
    m0, n = f.M, f.N
    bad, comp = _deficient_sides(f, tol)
    pairs = [(int(s), int(c)) for s, c in zip(bad, comp)]
    original = list(pairs)
    current = f
    added = []
    rounds = []
    while pairs:
        for draws in range(1, budget + 1):
            cand = _draw(rng, n, bound)
            sides = [p[0] for p in pairs] + [p[1] for p in pairs]
            if _outside_all(current, cand, sides, tol):
                break
        else:
            raise CandidateBudgetExhausted(f"no admissible vector in {budget} draws (round {len(added) + 1})")
        bit = 1 << current.M
        current = current.extend([cand])
        added.append(cand)
        r = ranker(current, tol)
        grown = []
        for s, c in pairs:
            grown.extend([(s | bit, c), (s, c | bit)])
        if grown:
            s_arr = np.array([g[0] for g in grown], dtype=np.int64)
            c_arr = np.array([g[1] for g in grown], dtype=np.int64)
            keep = (r.ranks(s_arr) < n) & (r.ranks(c_arr) < n)
            pairs = [g for g, kp in zip(grown, keep) if kp]
        allbits = ((1 << current.M) - 1) ^ ((1 << m0) - 1)
        growth = None
        if original:
            sides = [s | allbits for s, _ in original] + [c | allbits for _, c in original]
            growth = int(r.ranks(np.array(sides, dtype=np.int64)).min())
        rounds.append({"round": len(added), "draws": draws, "vector": cand,
                       "still_deficient": len(pairs), "min_dim_with_added": growth})
    final = check_complement_property(current, tol, force=True)
    if not final.passed:
        raise AssertionError("augmented family fails the complement property")
    added_family = VectorFamily.from_rows(added, dim=n) if added else VectorFamily.from_rows([], dim=n, exact=True)
    trace = {
        "deficiency": k,
        "added": len(added),
        "extra_rounds": len(added) - k,
        "met_lower_bound": len(added) == k,
        "rounds": rounds,
        "initial_deficient_splits": len(original),
        "final_cp": final.decision,
        "seed": seed,
    }
    return AugmentResult(added_family, trace)


def _direct_sum(f1, f2):
    n1, n2 = f1.N, f2.N
    rows = [list(r) + [0] * n2 for r in f1.vectors] + [[0] * n1 + list(r) for r in f2.vectors]
    exact = f1.exact and f2.exact
    return VectorFamily.from_rows(rows, dim=n1 + n2, exact=exact)


def _tracked_subsets(f, n1, n2, tol):
    """Masks S with span(S) != H that contain all of H_1 + 0 or all of 0 + H_2."""
    r = ranker(f, tol)
    t = r.table()
    masks = np.arange(1 << f.M, dtype=np.int64)
    a = f.vectors
    p1 = ranker(VectorFamily(a[:, :n1].copy()), tol).table() if n1 else np.zeros(1 << f.M, dtype=np.uint8)
    p2 = ranker(VectorFamily(a[:, n1:].copy()), tol).table() if n2 else np.zeros(1 << f.M, dtype=np.uint8)
    t = t.astype(int)
    keep = (t < n1 + n2) & (((t - p2.astype(int)) == n1) | ((t - p1.astype(int)) == n2))
    return masks[keep]


def direct_sum_augment(f1, f2, seed=0, bound=DEFAULT_BOUND, budget=DEFAULT_BUDGET, tol=DEFAULT_TOL):
    """N1 + N2 - 1 vectors that make (f1 + 0) u (0 + f2) u added have the complement property.

    Each new vector must avoid the span of every subset that does not span
    the sum but contains one of the two factors.
    """
    for name, g in (("first", f1), ("second", f2)):
        _require_real(g)
        cert = pr_vectors_real(g, tol)
        if not cert.passed:
            raise PremiseFailed(f"{name} family does not do phase retrieval", partition=cert.witness)
    f1, f2 = _family(f1), _family(f2)
    n1, n2 = f1.N, f2.N
    n = n1 + n2
    base = _direct_sum(f1, f2)
    rng = np.random.default_rng(seed)
    current = base
    added = []
    draws_log = []
    for _ in range(max(n - 1, 0)):
        tracked = _tracked_subsets(current, n1, n2, tol)
        for draws in range(1, budget + 1):
            cand = _draw(rng, n, bound)
            if _outside_all(current, cand, tracked, tol):
                break
        else:
            raise CandidateBudgetExhausted(f"no admissible vector in {budget} draws")
        current = current.extend([cand])
        added.append(cand)
        draws_log.append(draws)
    final = check_complement_property(current, tol, force=True)
    if not final.passed:
        raise AssertionError("direct-sum family fails the complement property")
    out = VectorFamily.from_rows(added, dim=n) if added else VectorFamily.from_rows([], dim=n, exact=True)
    return AugmentResult(out, {"added": len(added), "draws": draws_log, "combined_size": current.M,
                               "final_cp": final.decision, "seed": seed})


def complete_hyperplane_family(f, seed=0, bound=DEFAULT_BOUND, budget=DEFAULT_BUDGET, tol=DEFAULT_TOL):
    """One vector f0 making f u {f0} do phase retrieval, when every failing split is two hyperplanes.

    f0 is drawn outside span(J) for every non-spanning subset J. If some
    failing split has a side of dimension <= N - 2 no single vector can
    work, and PremiseFailed carries that split.
    """
    _require_real(f)
    f = _family(f)
    scan = hyperplane_partition_scan(f, tol)
    for p in scan.partitions:
        if min(p.dim_subset, p.dim_complement) <= f.N - 2:
            raise PremiseFailed("a failing split has a side of dimension <= N - 2", partition=p)
    r = ranker(f, tol)
    t = r.table()
    non_spanning = np.flatnonzero(t < f.N).astype(np.int64)
    rng = np.random.default_rng(seed)
    for draws in range(1, budget + 1):
        cand = _draw(rng, f.N, bound)
        if _outside_all(f, cand, non_spanning, tol):
            break
    else:
        raise CandidateBudgetExhausted(f"no admissible vector in {budget} draws")
    cert = pr_vectors_real(f.extend([cand]), tol)
    if not cert.passed:
        raise AssertionError("completed family fails phase retrieval")
    return cand, {"draws": draws, "failing_splits": len(scan.partitions), "pr": cert.decision, "seed": seed}


__all__ = [
    "AugmentResult",
    "augment_to_cp",
    "is_admissible_next",
    "direct_sum_augment",
    "complete_hyperplane_family",
]
