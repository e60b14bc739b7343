"""Phase retrieval and norm retrieval for vectors and subspaces (real case).

Everything here rests on real polarization: for a projection P,

    ||P x||^2 - ||P y||^2 = <P(x + y), x - y>.

Writing u = x + y and v = x - y, a pair (x, y) with equal measurements is a
pair (u, v) with <P_i u, v> = 0 for every i, i.e. v orthogonal to
span{P_i u}. Phase retrieval fails iff some u != 0 leaves that span short of
the whole space, and norm retrieval fails iff some u lies outside it (then
v = (I - Q_u) u has <u, v> > 0 so ||x|| != ||y||). For vectors P_i is the
rank-one projection and the first condition is the complement property.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from . import numerics as nm
from .certificates import PRCertificate
from .errors import (
    ComplexNotSupported,
    NormsDiffer,
    SingularOperator,
    UnrealizableNorms,
    VectorsOutsideSubspace,
)
from .frame_model import Subspace, SubspaceFamily, VectorFamily
from .numerics import DEFAULT_TOL
from .spark_cp import check_complement_property, doubly_deficient, partition_certificate, ranker
from .subsets import check_scan_size, mask_indices, subset_order

DEFAULT_BUDGET = 200


def worker_count():
    try:
        return max(1, int(os.environ.get("FRAMELAB_THREADS", "1")))
    except ValueError:
        return 1


def exact_view(a):
    """Exact copy of an array if it is exact or exactly rationalizable, else None."""
    if nm.is_exact(a):
        return a
    return nm.rationalize(a)


def _require_real(f):
    if f.field == "complex":
        raise ComplexNotSupported("real phase retrieval only; use pr_vectors_complex_necessary")


def _rows(a, idx):
    return a[list(idx)] if len(idx) else a[:0]


def _null(rows, n, exact):
    if rows.shape[0] == 0:
        return nm.identity(n, exact)
    return nm.null_space_basis(rows)


def _pair(u, v):
    return (u + v) / 2, (u - v) / 2


def _vec(a):
    return [x for x in a]


# ---------------------------------------------------------------------------
# vectors


def _measurement_gap(vectors, x, y):
    """max_i | |<x, phi_i>|^2 - |<y, phi_i>|^2 |."""
    if vectors.shape[0] == 0:
        return 0 if nm.is_exact(vectors) else 0.0
    gx = vectors @ x
    gy = vectors @ y
    d = gx * gx - gy * gy
    if nm.is_exact(d):
        return max(abs(v) for v in d)
    return float(np.abs(d).max())


def _partition_witness(a, cert, exact, tol):
    n = a.shape[1]
    u = _null(_rows(a, [i - 1 for i in cert.subset]), n, exact)[:, 0]
    v = _null(_rows(a, [i - 1 for i in cert.complement]), n, exact)[:, 0]
    x, y = _pair(u, v)
    gap = _measurement_gap(a, x, y)
    if exact:
        ok = gap == 0 and any(c != 0 for c in u) and any(c != 0 for c in v)
        how = "exact"
    else:
        ok = gap <= tol.witness_tol and np.linalg.norm(u) > tol.witness_tol and np.linalg.norm(v) > tol.witness_tol
        how = f"float: measurement gap {gap:.3e} <= witness_tol"
    if not ok:
        raise AssertionError("partition witness failed verification")
    return {"x": _vec(x), "y": _vec(y), "u": _vec(u), "v": _vec(v), "partition": cert}, how


def pr_vectors_real(f, tol=DEFAULT_TOL, force=False):
    """Real phase retrieval by vectors: PASS_exact iff the complement property holds."""
    _require_real(f)
    cp = check_complement_property(f, tol, force)
    if cp.passed:
        return PRCertificate("phase_retrieval", "PASS_exact", cp.arithmetic_mode, None, cp.details,
                             verification="complement property")
    a = exact_view(f.vectors) if cp.arithmetic_mode == "exact" else None
    exact = a is not None
    if not exact:
        a = nm.as_float(f.vectors)
    witness, how = _partition_witness(a, cp.witness, exact, tol)
    return PRCertificate("phase_retrieval", "FAIL", cp.arithmetic_mode, witness, cp.details, verification=how)


def pr_vectors_complex_necessary(f, tol=DEFAULT_TOL, force=False):
    """Complex families: the complement property is only necessary, so PASS is never claimed."""
    cp = check_complement_property(f.as_float() if f.exact else f, tol, force)
    if cp.failed:
        return PRCertificate("phase_retrieval_complex", "FAIL", cp.arithmetic_mode, cp.witness, cp.details,
                             notes=("complement property fails, so complex phase retrieval fails",),
                             verification="complement property")
    return PRCertificate("phase_retrieval_complex", "INCONCLUSIVE_NECESSARY_PASSED", cp.arithmetic_mode, None,
                         cp.details, notes=("complement property holds; it is necessary but not sufficient",))


def _constraint_rows(a, idx, within_perp):
    rows = _rows(a, idx)
    if within_perp is not None and within_perp.shape[0]:
        rows = np.concatenate([rows, within_perp]) if rows.shape[0] else within_perp
    return rows


def norm_retrieval_vectors_real(f, tol=DEFAULT_TOL, force=False, within=None):
    """Real norm retrieval by vectors.

    Fails iff some split (I, I^c) has span(I)^perp and span(I^c)^perp not
    orthogonal; then u, v taken from them with <u, v> != 0 give x = (u+v)/2,
    y = (u-v)/2 with equal measurements and ||x||^2 - ||y||^2 = <u, v>.
    Only splits where neither side spans can fail. With ``within`` (a
    Subspace containing the family) the question is asked inside that
    subspace, in ambient coordinates.
    """
    _require_real(f)
    check_scan_size(f.M, force)
    a = exact_view(f.vectors)
    exact = a is not None
    if not exact:
        a = nm.as_float(f.vectors)
    n = f.N
    perp = None
    target = n
    if within is not None:
        target = within.dim
        comp = within.orthogonal_complement(tol)
        perp = comp.basis.T.copy()
        if exact and not nm.is_exact(perp):
            exact = False
            a = nm.as_float(a)
        if not exact:
            perp = nm.as_float(perp)
    mode = "exact" if exact else "float"
    if target == 0:
        return PRCertificate("norm_retrieval", "PASS_exact", mode, None, {"splits": 0}, verification="zero space")

    if f.M == 0:
        splits = [((), ())]
    else:
        r = ranker(VectorFamily(a), tol)
        if within is None:
            bad = doubly_deficient(r)
        else:
            # inside W a side spans iff its rank reaches dim W
            order = subset_order(f.M, representatives=True)
            t = r.table()
            bad = order[(t[order] < target) & (t[r.full ^ order] < target)]
        splits = [(mask_indices(mk), mask_indices(r.full ^ int(mk))) for mk in bad]
    for subset, complement in splits:
        nu = _null(_constraint_rows(a, [i - 1 for i in subset], perp), n, exact)
        nv = _null(_constraint_rows(a, [i - 1 for i in complement], perp), n, exact)
        if nu.shape[1] == 0 or nv.shape[1] == 0:
            continue
        cross = nu.T @ nv
        if exact:
            hits = [(i, j) for i in range(cross.shape[0]) for j in range(cross.shape[1]) if cross[i, j] != 0]
        else:
            hits = [tuple(int(k) for k in np.unravel_index(np.argmax(np.abs(cross)), cross.shape))]
            if abs(cross[hits[0]]) <= tol.witness_tol:
                hits = []
        if not hits:
            continue
        i, j = hits[0]
        u, v = nu[:, i], nv[:, j]
        x, y = _pair(u, v)
        gap = _measurement_gap(a, x, y)
        norm_gap = (x @ x) - (y @ y)
        if exact:
            assert gap == 0 and norm_gap != 0
            how = "exact"
        else:
            assert gap <= tol.witness_tol and abs(norm_gap) > tol.witness_tol
            how = f"float: measurement gap {gap:.3e}, norm gap {float(norm_gap):.3e}"
        cert = {"subset": list(subset), "complement": list(complement)}
        witness = {"x": _vec(x), "y": _vec(y), "u": _vec(u), "v": _vec(v), "partition": cert,
                   "norm_sq_difference": norm_gap}
        return PRCertificate("norm_retrieval", "FAIL", mode, witness, {"splits_checked": len(splits)},
                             verification=how)
    return PRCertificate("norm_retrieval", "PASS_exact", mode, None, {"splits_checked": len(splits)},
                         verification="complements orthogonal on every split")


# ---------------------------------------------------------------------------
# subspaces: search machinery


def _float_projectors(sf):
    return np.stack([nm.as_float(p) for p in sf.projectors(exact=False)]) if sf.M else np.zeros((0, sf.N, sf.N))


def pr_objective(projs, u):
    """(lambda_min(sum P_i u u^T P_i) / ||u||^2, gradient, minimizing eigenvector)."""
    nu2 = float(u @ u)
    pu = projs @ u  # M x N
    g = pu.T @ pu
    w, vecs = np.linalg.eigh(g)
    lam = float(w[0])
    wv = vecs[:, 0]
    coef = pu @ wv
    grad = 2.0 * (projs @ wv).T @ coef
    value = lam / nu2
    return value, grad / nu2 - 2.0 * lam * u / (nu2 * nu2), wv


def nr_objective(projs, u, tol=DEFAULT_TOL):
    """||(I - Q_u) u||^2 / ||u||^2 with Q_u the projector onto span{P_i u}."""
    pu = projs @ u
    uu, sv, _ = np.linalg.svd(pu.T, full_matrices=False)
    basis = uu[:, sv > tol.rank_tol * max(float(sv[0]) if sv.size else 0.0, 1.0)]
    r = u - basis @ (basis.T @ u)
    return float(r @ r) / float(u @ u), r


def _minimize_pr(projs, u0):
    fun = lambda u: pr_objective(projs, u)[:2]
    res = minimize(fun, u0, jac=True, method="L-BFGS-B", options={"maxiter": 200, "gtol": 1e-14, "ftol": 1e-16})
    u = res.x / np.linalg.norm(res.x)
    value = pr_objective(projs, u)[0]
    v0 = pr_objective(projs, u0 / np.linalg.norm(u0))[0]
    if v0 <= value:
        u, value = u0 / np.linalg.norm(u0), v0
    return float(np.sqrt(max(value, 0.0))), u


def _maximize_nr(projs, u0, tol):
    def neg(u):
        return -nr_objective(projs, u, tol)[0]

    res = minimize(neg, u0, method="Nelder-Mead", options={"maxiter": 150, "xatol": 1e-9, "fatol": 1e-14})
    best = u0 / np.linalg.norm(u0)
    best_val = nr_objective(projs, best, tol)[0]
    cand = res.x / np.linalg.norm(res.x)
    val = nr_objective(projs, cand, tol)[0]
    if val > best_val:
        best, best_val = cand, val
    return best_val, best


def _sphere_points(n, count, rng):
    g = rng.standard_normal((count, n))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0] = 1.0
    return g / norms[:, None]


def structured_starts(sf, tol=DEFAULT_TOL):
    """Basis-union vectors and normals of every non-spanning split side of the union."""
    union, _ = sf.onb_union()
    a = nm.as_float(union.vectors)
    starts = [row for row in a if np.linalg.norm(row) > 0]
    starts.extend(np.eye(sf.N))
    if union.M and union.M <= 16:
        r = ranker(union, tol)
        for mask in doubly_deficient(r):
            for side in (int(mask), r.full ^ int(mask)):
                idx = [i - 1 for i in mask_indices(side)]
                rows = a[idx] if idx else np.zeros((0, sf.N))
                null = nm.null_space_basis(rows, tol) if rows.shape[0] else np.eye(sf.N)
                starts.extend(null.T)
    out = []
    for s in starts:
        s = np.asarray(s, dtype=float)
        nrm = np.linalg.norm(s)
        if nrm > 0:
            out.append(s / nrm)
    return out


def _run(fn, items):
    threads = worker_count()
    if threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _snap(u, denominators=(1, 2, 4, 10, 100, 1000, 10**4, 10**6)):
    """Rational approximations of the direction u, coarsest first."""
    scale = np.abs(u).max()
    if scale == 0:
        return
    w = u / scale
    seen = set()
    for d in denominators:
        q = tuple(Fraction(float(c)).limit_denominator(d) for c in w)
        if q in seen or all(c == 0 for c in q):
            continue
        seen.add(q)
        yield np.array(q, dtype=object)


def _exact_pr_witness(sf, u):
    """For exact subspaces and rational u: an exact (x, y) if span{P_i u} is short, else None."""
    projs = sf.projectors(exact=True)
    pu = np.array([p @ u for p in projs], dtype=object)
    null = nm.null_space_basis(pu)
    if null.shape[1] == 0:
        return None
    v = null[:, 0]
    x, y = _pair(u, v)
    gaps = [(x @ p @ x) - (y @ p @ y) for p in projs]
    if any(g != 0 for g in gaps):
        return None
    return {"x": _vec(x), "y": _vec(y), "u": _vec(u), "v": _vec(v)}


def _float_pr_witness(projs, u, tol):
    _, _, v = pr_objective(projs, u)
    x, y = _pair(u, v)
    gap = float(max(abs(x @ p @ x - y @ p @ y) for p in projs)) if len(projs) else 0.0
    if gap > tol.witness_tol:
        return None
    return {"x": list(x), "y": list(y), "u": list(u), "v": list(v)}, gap


def _union_cp_stage(sf, tol, force):
    union, provenance = sf.onb_union()
    cp = check_complement_property(union, tol, force)
    return union, provenance, cp


def _subspace_partition_witness(sf, union, cp, tol):
    exact = cp.arithmetic_mode == "exact" and sf.exact
    a = union.vectors if exact else nm.as_float(union.vectors)
    if exact and not nm.is_exact(a):
        a = nm.exact_array(a)
    witness, _ = _partition_witness(a, cp.witness, exact, tol)
    x = np.array(witness["x"], dtype=object if exact else float)
    y = np.array(witness["y"], dtype=object if exact else float)
    projs = sf.projectors(exact=exact)
    gaps = [(x @ p @ x) - (y @ p @ y) for p in projs]
    if exact:
        assert all(g == 0 for g in gaps)
        how = "exact"
    else:
        gap = float(max(abs(g) for g in gaps))
        assert gap <= tol.witness_tol
        how = f"float: projection-norm gap {gap:.3e}"
    return witness, how


def pr_subspaces_real(sf, budget=DEFAULT_BUDGET, seed=0, tol=DEFAULT_TOL, force=False):
    """Phase retrieval by projections onto subspaces (real case), in three stages.

    (a) the union of the stored bases must have the complement property;
    failure gives an exact witness. (b) multistart minimization of
    sigma_N([P_1 u ... P_M u]) over the unit sphere, seeded by structured
    starts and ``budget`` random ones; a small minimum is turned into a
    verified witness. (c) otherwise PASS_budgeted with the minimum recorded.
    A minimum between witness_tol and 10 * witness_tol that cannot be
    verified is reported as INCONCLUSIVE_BUDGETED.
    """
    union, provenance, cp = _union_cp_stage(sf, tol, force)
    mode = "exact" if sf.exact else "float"
    details = {"union_size": union.M, "union_cp": cp.decision}
    if cp.failed:
        witness, how = _subspace_partition_witness(sf, union, cp, tol)
        part = cp.witness
        witness["partition"] = part
        witness["provenance"] = {"subset": [list(provenance[i - 1]) for i in part.subset],
                                 "complement": [list(provenance[i - 1]) for i in part.complement]}
        return PRCertificate("phase_retrieval_subspaces", "FAIL", mode, witness, details, verification=how)

    projs = _float_projectors(sf)
    rng = np.random.default_rng(seed)
    starts = structured_starts(sf, tol) + list(_sphere_points(sf.N, budget, rng))
    results = _run(lambda u0: _minimize_pr(projs, u0), starts)
    order = sorted(range(len(results)), key=lambda i: (results[i][0], i))
    best_res, best_u = results[order[0]]
    details.update(starts=len(starts), structured_starts=len(starts) - budget)

    if best_res <= 10 * tol.witness_tol:
        for i in order:
            res, u = results[i]
            if res > 10 * tol.witness_tol:
                break
            if sf.exact:
                for q in _snap(u):
                    w = _exact_pr_witness(sf, q)
                    if w is not None:
                        return PRCertificate("phase_retrieval_subspaces", "FAIL", mode, w, details,
                                             search_budget=budget, min_residual=best_res, verification="exact")
            found = _float_pr_witness(projs, u, tol)
            if found is not None and res <= tol.witness_tol:
                w, gap = found
                return PRCertificate("phase_retrieval_subspaces", "FAIL", "float", w, details,
                                     search_budget=budget, min_residual=best_res,
                                     verification=f"float: projection-norm gap {gap:.3e}")
    if best_res > 10 * tol.witness_tol:
        return PRCertificate("phase_retrieval_subspaces", "PASS_budgeted", mode, None, details,
                             search_budget=budget, min_residual=best_res,
                             verification="no witness found by multistart search")
    return PRCertificate("phase_retrieval_subspaces", "INCONCLUSIVE_BUDGETED", mode, None, details,
                         search_budget=budget, min_residual=best_res,
                         notes=("small residual found but no witness could be verified",))


def _exact_nr_witness(sf, u):
    projs = sf.projectors(exact=True)
    pu = np.array([p @ u for p in projs], dtype=object)
    q = nm.projection_onto_span(pu) if nm.rank(pu) else nm.zeros_like_mode((sf.N, sf.N), True)
    v = u - q @ u
    if all(c == 0 for c in v):
        return None
    x, y = _pair(u, v)
    gaps = [(x @ p @ x) - (y @ p @ y) for p in projs]
    if any(g != 0 for g in gaps):
        return None
    return {"x": _vec(x), "y": _vec(y), "u": _vec(u), "v": _vec(v), "norm_sq_difference": (x @ x) - (y @ y)}


def norm_retrieval_subspaces_real(sf, budget=DEFAULT_BUDGET, seed=0, tol=DEFAULT_TOL):
    """Norm retrieval by projections: fails iff some u lies outside span{P_i u}.

    Candidates are structured probes, random points and the local maxima of
    ||(I - Q_u) u|| / ||u|| reached from them; any candidate with a positive
    value is verified (exactly for exact families) and returned as a witness.
    """
    mode = "exact" if sf.exact else "float"
    projs = _float_projectors(sf)
    rng = np.random.default_rng(seed)
    probes = structured_starts(sf, tol)
    if sf.M and sf.N:
        probes += [pr[1] for pr in (_minimize_pr(projs, u0) for u0 in probes[: 4 * sf.N])]
    starts = probes + list(_sphere_points(sf.N, budget, rng))
    details = {"starts": len(starts)}
    if sf.N == 0:
        return PRCertificate("norm_retrieval_subspaces", "PASS_exact", mode, None, details, verification="zero space")
    if sf.exact:
        for u in probes:
            for q in _snap(u, (1, 2, 4, 10, 100)):
                w = _exact_nr_witness(sf, q)
                if w is not None:
                    return PRCertificate("norm_retrieval_subspaces", "FAIL", mode, w, details,
                                         search_budget=budget, min_residual=None, verification="exact")
    results = _run(lambda u0: _maximize_nr(projs, u0, tol), starts)
    order = sorted(range(len(results)), key=lambda i: (-results[i][0], i))
    best_val, _ = results[order[0]]
    for i in order:
        val, u = results[i]
        if val <= tol.witness_tol:
            break
        if sf.exact:
            for q in _snap(u):
                w = _exact_nr_witness(sf, q)
                if w is not None:
                    return PRCertificate("norm_retrieval_subspaces", "FAIL", mode, w, details,
                                         search_budget=budget, min_residual=best_val, verification="exact")
        _, r = nr_objective(projs, u, tol)
        x, y = _pair(u, r)
        gap = float(max(abs(x @ p @ x - y @ p @ y) for p in projs))
        if gap <= tol.witness_tol and float(u @ r) > tol.witness_tol:
            w = {"x": list(x), "y": list(y), "u": list(u), "v": list(r), "norm_sq_difference": float(x @ x - y @ y)}
            return PRCertificate("norm_retrieval_subspaces", "FAIL", "float", w, details, search_budget=budget,
                                 min_residual=best_val, verification=f"float: projection-norm gap {gap:.3e}")
    return PRCertificate("norm_retrieval_subspaces", "PASS_budgeted", mode, None, details, search_budget=budget,
                         min_residual=best_val, verification="no witness found by multistart search")


# ---------------------------------------------------------------------------
# constructive reductions


class EquimodularBasis(NamedTuple):
    """Orthonormal basis (columns) of W with |<x, phi_j>| = |<y, phi_j>|, and the proof case used."""

    basis: np.ndarray
    case: int


def _complete_onb(first, w_onb, tol):
    cols = list(first)
    for c in w_onb.T:
        r = np.array(c, dtype=w_onb.dtype if np.iscomplexobj(w_onb) else float)
        for _ in range(2):
            for b in cols:
                r = r - np.vdot(b, r) * b
        nr = np.linalg.norm(r)
        if nr > 1e3 * tol.rank_tol:
            cols.append(r / nr)
        if len(cols) == w_onb.shape[1]:
            break
    return np.column_stack(cols)


def equimodular_onb(p, x, y, tol=DEFAULT_TOL):
    """Orthonormal basis of W = range(P) on which x and y have equal moduli.

    Case 0: Px = Py = 0 (any basis). Case 1: Px = c Py with |c| = 1 (any
    basis). Case 2: <Px, Py> = 0, use (Px +- Py)/norm. Case 3: otherwise,
    rotate Py by the phase d of <Px, Py> first. The two special vectors are
    completed inside W by vectors orthogonal to both.
    """
    w = p.as_float() if p.exact else p
    onb = w.onb()
    proj = nm.as_float(w.projector)
    x = np.asarray(x)
    y = np.asarray(y)
    px, py = proj @ x, proj @ y
    nx, ny = np.linalg.norm(px), np.linalg.norm(py)
    scale = max(1.0, nx, ny)
    if abs(nx - ny) > tol.witness_tol * scale:
        raise NormsDiffer(f"||Px|| = {nx!r} and ||Py|| = {ny!r} differ")
    if max(nx, ny) <= tol.witness_tol * scale:
        return EquimodularBasis(onb, 0)
    inner = np.vdot(py, px)  # <Px, Py>, linear in the first slot
    if abs(abs(inner) - nx * ny) <= tol.rank_tol * scale * scale:
        return EquimodularBasis(onb, 1)
    if abs(inner) <= tol.rank_tol * scale * scale:
        case, d = 2, 1.0
    else:
        case, d = 3, inner / abs(inner)
    s, t = px + d * py, px - d * py
    first = [s / np.linalg.norm(s), t / np.linalg.norm(t)]
    return EquimodularBasis(_complete_onb(first, onb, tol), case)


def onb_union(sf, basis_choice="stored", normalized=True):
    """Flattened bases of a subspace family with provenance (i, j) -> flat index.

    ``basis_choice`` is ``"stored"`` or an integer seed for random orthonormal
    bases. Stored exact bases are orthogonal; ``normalized`` scales them to
    unit length (leaving exact arithmetic).
    """
    if basis_choice == "stored":
        union, provenance = sf.onb_union()
        if normalized and union.exact:
            a = nm.as_float(union.vectors)
            norms = np.linalg.norm(a, axis=1)
            union = VectorFamily(a / norms[:, None] if a.size else a)
        return union, provenance
    return sf.onb_union(rng=np.random.default_rng(int(basis_choice)))


def norm_retrieval_spanning_check(sf, per_subspace_vectors, tol=DEFAULT_TOL):
    """Check the premises (norm retrieval of each family inside its subspace) and PR of the flattening."""
    if len(per_subspace_vectors) != sf.M:
        raise VectorsOutsideSubspace(f"expected {sf.M} families, got {len(per_subspace_vectors)}")
    premises = []
    flat = []
    for i, (w, fam) in enumerate(zip(sf.subspaces, per_subspace_vectors), start=1):
        if not isinstance(fam, VectorFamily):
            fam = VectorFamily.from_rows(fam, dim=sf.N)
        for row in fam.vectors:
            if not w.contains(row, tol):
                raise VectorsOutsideSubspace(f"a vector of family {i} is not in subspace {i}")
        nr = norm_retrieval_vectors_real(fam, tol, within=w)
        premises.append({"subspace": i, "norm_retrieval": nr.decision, "witness": nr.witness})
        flat.append(fam)
    total = flat[0]
    for fam in flat[1:]:
        total = total.extend(fam)
    pr = pr_vectors_real(total, tol)
    failed = [p["subspace"] for p in premises if p["norm_retrieval"] == "FAIL"]
    details = {"premises": premises, "flattened_pr": pr.decision, "failed_premises": failed}
    if failed:
        return PRCertificate("norm_retrieval_spanning", "PREMISE_FAILED", pr.arithmetic_mode, pr.witness, details,
                             notes=(f"norm retrieval fails inside subspaces {failed}",))
    return PRCertificate("norm_retrieval_spanning", pr.decision, pr.arithmetic_mode, pr.witness, details,
                         verification=pr.verification)


def apply_invertible(obj, t, tol=DEFAULT_TOL):
    """Image of a vector or subspace family under an invertible operator T (N x N)."""
    n = obj.N
    if not isinstance(t, np.ndarray):
        t = VectorFamily.from_rows(t, dim=n).vectors
    if t.shape != (n, n):
        raise SingularOperator(f"operator must be {n} x {n}")
    if nm.rank(t, tol) < n:
        raise SingularOperator("operator is not invertible")
    if isinstance(obj, SubspaceFamily):
        exact = obj.exact and nm.is_exact(t)
        tt = t if exact else nm.as_float(t)
        subs = []
        for w in obj.subspaces:
            b = w.basis if exact else nm.as_float(w.basis)
            subs.append(Subspace.from_spanning((tt @ b).T.copy(), tol=tol))
        return SubspaceFamily(tuple(subs))
    if obj.exact and nm.is_exact(t):
        return VectorFamily(obj.vectors @ t.T if obj.M else obj.vectors.copy(), obj.field)
    return VectorFamily(nm.as_float(obj.vectors) @ nm.as_float(t).T, obj.field)


def range_chart(p, tol=DEFAULT_TOL):
    """Basis columns of range(P) used as coordinates (orthonormal in float mode, orthogonal when exact)."""
    w = p if isinstance(p, Subspace) else Subspace.from_spanning(p, tol=tol)
    return w


def project_family(f, p, tol=DEFAULT_TOL):
    """{P phi_i} in coordinates of range(P).

    Exact subspaces use their orthogonal basis as the chart, an invertible
    change of coordinates that preserves spans, spark and the complement
    property; float subspaces use an orthonormal chart.
    """
    w = range_chart(p, tol)
    if w.exact and f.exact:
        coords = np.array([[sum((a * b for a, b in zip(row, w.basis[:, k])), Fraction(0)) / nb
                            for k, nb in enumerate(w.sq_norms)] for row in f.vectors], dtype=object)
        if f.M == 0 or w.dim == 0:
            coords = nm.zeros_like_mode((f.M, w.dim), True)
        return VectorFamily(coords, f.field)
    onb = w.onb() if w.exact else w.basis
    coords = nm.as_float(f.vectors) @ np.conj(onb)
    return VectorFamily(coords.reshape(f.M, w.dim), f.field)


# ---------------------------------------------------------------------------
# the six-subspace example


def johnsex_measurements(x):
    """Squared projection norms of x onto the six lines/planes of the worked example."""
    a1, a2, a3 = (float(c) for c in x)
    return np.array([a1 * a1 + a2 * a2, a2 * a2, a3 * a3,
                     (a1 + a2) ** 2 / 2, (a2 + a3) ** 2 / 2, (a1 + a3) ** 2 / 2])


def reconstruct_johnsex(norms_sq, tol=DEFAULT_TOL):
    """Recover x up to sign from its six squared projection norms.

    Returns (x_hat, branch) where branch names the case used: ``"single"``
    (two coefficients zero), ``"alpha1_zero"`` or ``"alpha1_nonzero"``.
    """
    q = np.asarray(norms_sq, dtype=float)
    if q.shape != (6,):
        raise UnrealizableNorms("need exactly six squared norms")
    scale = max(1.0, float(np.abs(q).max()))
    if np.any(q < -tol.witness_tol * scale):
        raise UnrealizableNorms("squared norms must be nonnegative")
    q = np.maximum(q, 0.0)
    p1, p2, p3, p4, p5, p6 = q
    if p1 - p2 < -tol.witness_tol * scale:
        raise UnrealizableNorms("||P_1 x|| < ||P_2 x|| is impossible")
    zero = 1e-14 * scale
    a1_sq = max(p1 - p2, 0.0)
    mags = np.sqrt([a1_sq, p2, p3])
    if np.count_nonzero(np.array([a1_sq, p2, p3]) > zero) <= 1:
        branch = "single"
        x = mags.copy()
    elif a1_sq <= zero:
        branch = "alpha1_zero"
        a2 = np.sqrt(p2)
        x = np.array([0.0, a2, (2 * p5 - p2 - p3) / (2 * a2)])
    else:
        branch = "alpha1_nonzero"
        a1 = np.sqrt(a1_sq)
        x = np.array([a1, (2 * p4 - p1) / (2 * a1), (2 * p6 + p2 - p1 - p3) / (2 * a1)])
    if np.abs(johnsex_measurements(x) - q).max() > tol.witness_tol * scale * 10:
        raise UnrealizableNorms("no vector has these projection norms")
    return x, branch


__all__ = [
    "pr_vectors_real",
    "pr_vectors_complex_necessary",
    "norm_retrieval_vectors_real",
    "pr_subspaces_real",
    "norm_retrieval_subspaces_real",
    "equimodular_onb",
    "EquimodularBasis",
    "onb_union",
    "norm_retrieval_spanning_check",
    "apply_invertible",
    "project_family",
    "johnsex_measurements",
    "reconstruct_johnsex",
    "partition_certificate",
]
