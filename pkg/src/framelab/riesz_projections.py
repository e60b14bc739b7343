"""Projections of orthonormal and Riesz bases: span/independence dualities and full-spark constructions.

"Full spark on the range" of a rank-N projection P means every N of the
vectors P phi_i span range(P). It is tested on the ambient vectors
directly, since N of them span range(P) iff they have rank N.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np

from . import numerics as nm
from .certificates import Certificate
from .errors import ConstructionBudgetExhausted, NotABasis, NotRieszBasis, PreconditionRange, SelfCheckFailed
from .frame_model import Subspace, VectorFamily, canonical_tight_transform, dual_riesz_basis, frame_operator
from .numerics import DEFAULT_TOL
from .phase_retrieval import pr_vectors_real, project_family
from .spark_cp import is_full_spark, masks_of_size
from .subsets import SubsetRanker


def _projector(p):
    return p.projector if isinstance(p, Subspace) else np.asarray(p) if not nm.is_exact(p) else p


def _complement(p):
    n = p.shape[0]
    return nm.identity(n, nm.is_exact(p)) - p


def _rank_rows(rows, tol):
    return nm.rank(rows, tol) if rows.shape[0] else 0


def _images(p, f):
    """Rows P phi_i (P symmetric, so rows of phi @ P)."""
    a = f.vectors
    if nm.is_exact(p) and f.exact:
        return a @ p
    return nm.as_float(a) @ nm.as_float(p).T


def _mode(p, f=None):
    return "exact" if nm.is_exact(p) and (f is None or f.exact) else "float"


def bcps_duality_check(p, subset, tol=DEFAULT_TOL):
    """({P e_i}_{i in I} independent, {(I-P) e_i}_{i in I^c} spans (I-P)H); indices 1-based."""
    p = _projector(p)
    n = p.shape[0]
    idx = [i - 1 for i in subset]
    rest = [i for i in range(n) if i not in idx]
    q = _complement(p)
    left = _rank_rows(p[idx], tol) == len(idx)
    right = _rank_rows(q[rest], tol) == _rank_rows(q, tol)
    if left != right:
        raise SelfCheckFailed(f"duality broken for I = {sorted(subset)}: {left} vs {right}")
    return bool(left), bool(right)


def _require_basis(f, kind, tol):
    if f.M != f.N or nm.rank(f.vectors, tol) < f.N:
        raise NotABasis("family is not a basis")
    if kind == "onb":
        g = f.vectors @ nm.conj(f.vectors).T if f.exact else nm.as_float(f.vectors) @ nm.as_float(f.vectors).conj().T
        eye = nm.identity(f.M, f.exact)
        ok = bool(np.all(g == eye)) if f.exact else float(np.abs(g - eye).max()) <= tol.ortho_tol
        if not ok:
            raise NotABasis("family is not orthonormal")
    elif kind != "riesz":
        raise ValueError(f"kind must be 'onb' or 'riesz', got {kind!r}")


def projected_full_spark(p, f, tol=DEFAULT_TOL):
    """Direct test: every rank(P)-subset of {P phi_i} has rank rank(P)."""
    p = _projector(p)
    k = _rank_rows(p, tol)
    if k == 0:
        return True
    imgs = _images(p, f)
    r = SubsetRanker(imgs, tol)
    return bool(np.all(r.ranks(masks_of_size(f.M, k)) == k))


def full_spark_projection_check(p, f, kind="riesz", tol=DEFAULT_TOL):
    """Decide whether {P phi_i} is full spark on range(P) through the dual criterion.

    onb: every (M - N)-subset of {(I - P) phi_i} spans (I - P)H.
    riesz: (I - P)H meets span{phi_i : i in I} only in 0 for every |I| = N.
    The verdict is cross-checked against the direct rank test.
    """
    _require_basis(f, kind, tol)
    p = _projector(p)
    m = f.M
    q = _complement(p)
    n = _rank_rows(p, tol)
    qrank = m - n
    a = f.vectors if (f.exact and nm.is_exact(p)) else nm.as_float(f.vectors)
    first_bad = None
    if kind == "onb":
        imgs = _images(q, f)
        for idx in combinations(range(m), m - n):
            if _rank_rows(imgs[list(idx)], tol) != qrank:
                first_bad = idx
                break
    else:
        qb = Subspace.from_spanning(q, tol=tol) if qrank else None
        qrows = qb.basis.T if qb is not None else None
        if qrows is not None and not nm.is_exact(a):
            qrows = nm.as_float(qrows)
        for idx in combinations(range(m), n):
            rows = a[list(idx)]
            if qrows is not None:
                rows = np.concatenate([qrows, rows])
            if _rank_rows(rows, tol) != qrank + n:
                first_bad = idx
                break
    verdict = first_bad is None
    direct = projected_full_spark(p, f, tol)
    if verdict != direct:
        raise SelfCheckFailed(f"dual criterion says {verdict}, direct check says {direct}")
    witness = None if verdict else {"index_set": [i + 1 for i in first_bad]}
    return Certificate("full_spark_projection", "PASS" if verdict else "FAIL", _mode(p, f), witness,
                       {"kind": kind, "rank": n, "direct_full_spark": direct})


def riesz_span_independence_dual(p, f, subset, tol=DEFAULT_TOL):
    """({P phi_i}_{i in I} spans PH, {(I-P) phi_i*}_{i in I^c} independent); indices 1-based."""
    if f.M != f.N:
        raise NotRieszBasis("a Riesz basis needs M = N")
    dual = dual_riesz_basis(f, tol)
    p = _projector(p)
    q = _complement(p)
    idx = [i - 1 for i in subset]
    rest = [i for i in range(f.M) if i not in idx]
    imgs = _images(p, f)
    dual_imgs = _images(q, dual)
    left = _rank_rows(imgs[idx], tol) == _rank_rows(p, tol)
    right = _rank_rows(dual_imgs[rest], tol) == len(rest)
    if left != right:
        raise SelfCheckFailed(f"duality broken for I = {sorted(subset)}: {left} vs {right}")
    return bool(left), bool(right)


def _random_full_spark_parseval(m, n, rng, bound, tries):
    for attempt in range(1, tries + 1):
        g = VectorFamily.from_rows(rng.integers(-bound, bound + 1, size=(m, n)).tolist(), dim=n)
        if nm.rank(g.vectors) == n and is_full_spark(g):
            return canonical_tight_transform(g), attempt
    raise ConstructionBudgetExhausted(f"no full-spark integer frame in {tries} draws")


def _inv_sqrt_and_sqrt(s):
    w, v = np.linalg.eigh(s)
    r = np.sqrt(w)
    return (v / r) @ v.T, (v * r) @ v.T


def _rational_span(cols, denominators=(100, 10**4, 10**6, 10**8)):
    for d in denominators:
        yield np.array([[Fraction(float(x)).limit_denominator(d) for x in row] for row in cols.T], dtype=object)


def construct_full_spark_projection(f, n, seed=0, tries=50, tol=DEFAULT_TOL):
    """Rank-n projection P with {P phi_i} full spark on its range, for a Riesz basis f of M-space.

    A random integer full-spark frame g of M vectors in n-space is made
    Parseval; P0 projects onto the range of its analysis matrix, so
    {P0 e_i} is full spark. Conjugating through the orthonormal basis
    S^{-1/2} phi_i gives P', and P = I - Q with Q the projector onto
    W = S^{1/2} (I - P') H. For exact f the basis of W is rounded to nearby
    rationals and the result re-verified exactly.
    """
    m = f.M
    if f.N != m or nm.rank(f.vectors, tol) < m:
        raise NotRieszBasis("need a basis of M-space")
    if not 0 <= n <= m:
        raise PreconditionRange(f"rank must be between 0 and {m}")
    if n == m:
        return Subspace.full(m, exact=f.exact)
    if n == 0:
        return Subspace.from_spanning(nm.zeros_like_mode((0, m), f.exact), dim=m)
    rng = np.random.default_rng(seed)
    a = nm.as_float(f.vectors)
    s = nm.as_float(frame_operator(f))
    s_inv_half, s_half = _inv_sqrt_and_sqrt(s)
    u = s_inv_half @ a.T  # columns: orthonormal basis S^{-1/2} phi_i
    for _ in range(tries):
        g, _ = _random_full_spark_parseval(m, n, rng, 10, tries)
        t = np.conj(g.vectors)  # analysis matrix, an isometry
        p0 = t @ t.T
        p_prime = u @ p0 @ u.T
        w_cols = s_half @ (np.eye(m) - p_prime)
        w_basis = nm.orthonormalize(w_cols.T, tol).vectors
        candidates = []
        if f.exact:
            candidates.extend(Subspace.from_spanning(rows) for rows in _rational_span(w_basis))
        candidates.append(Subspace.from_spanning(w_basis.T.copy(), tol=tol))
        for w in candidates:
            if w.dim != m - n:
                continue
            proj = _complement(w.projector)
            if projected_full_spark(proj, f if w.exact else f.as_float(), tol):
                return Subspace.from_spanning(proj, tol=tol)
    raise ConstructionBudgetExhausted(f"no verified full-spark projection in {tries} attempts")


def range_family(p, f, tol=DEFAULT_TOL):
    """{P phi_i} in a coordinate chart of range(P)."""
    w = p if isinstance(p, Subspace) else Subspace.from_spanning(p, tol=tol)
    g = f if (w.exact and f.exact) else f.as_float()
    return project_family(g, w, tol)


def dual_pair_projection(f, n, seed=0, tries=20, tol=DEFAULT_TOL):
    """Rank-n P with {P phi_i} and {(I - P) phi_i*} both doing phase retrieval on their ranges."""
    m = f.M
    if not (2 * n - 1 <= m <= 2 * n + 1):
        raise PreconditionRange(f"need 2N-1 <= M <= 2N+1, got M={m}, N={n}")
    dual = dual_riesz_basis(f, tol)
    for attempt in range(tries):
        w = construct_full_spark_projection(f, n, seed + attempt, tol=tol)
        comp = w.orthogonal_complement(tol)
        first = pr_vectors_real(range_family(w, f, tol), tol)
        second = pr_vectors_real(range_family(comp, dual, tol), tol)
        if first.passed and second.passed:
            return w, {"projection": first, "dual_complement": second, "attempts": attempt + 1}
    raise ConstructionBudgetExhausted(f"no projection passed both checks in {tries} attempts")


__all__ = [
    "bcps_duality_check",
    "full_spark_projection_check",
    "riesz_span_independence_dual",
    "construct_full_spark_projection",
    "dual_pair_projection",
    "projected_full_spark",
    "range_family",
]
