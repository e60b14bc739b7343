"""Scalar arithmetic and the linear-algebra primitives everything else uses.

Two arithmetic modes share one representation, the numpy array:

* exact: ``dtype=object`` arrays of :class:`fractions.Fraction` (real only);
* float: ``float64`` or ``complex128`` arrays, compared through a
  :class:`ToleranceConfig`, never with raw equality.

Exact rank goes through fraction-free (Bareiss) elimination on integer rows,
so combinatorial decisions on rational input never round.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import NotSymmetric


@dataclass(frozen=True)
class ToleranceConfig:
    """Float-mode thresholds; ignored by exact arithmetic."""

    rank_tol: float = 1e-9
    ortho_tol: float = 1e-10
    witness_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_tol", "ortho_tol", "witness_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    @classmethod
    def from_rank_tol(cls, tol):
        """The CLI's ``--tol``: orthogonality 10x tighter, witnesses 10x looser."""
        return cls(rank_tol=tol, ortho_tol=0.1 * tol, witness_tol=10.0 * tol)


DEFAULT_TOL = ToleranceConfig()


# ---------------------------------------------------------------------------
# scalars and conversions


def to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite entry {x!r}")
        # the decimal literal, so 0.1 means 1/10
        return Fraction(repr(float(x)))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


_to_fraction_ufunc = np.frompyfunc(to_fraction, 1, 1)


def exact_array(data):
    """Object array of Fractions with the shape of ``data``."""
    a = np.asarray(data, dtype=object)
    if a.size == 0:
        return np.empty(a.shape, dtype=object)
    return _to_fraction_ufunc(a).astype(object)


def is_exact(a):
    return isinstance(a, np.ndarray) and a.dtype == object


def as_float(a):
    if is_exact(a):
        return np.array(a, dtype=float) if a.size else np.zeros(a.shape)
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return a.astype(complex)
    return a.astype(float)


def rationalize(a, max_denominator=1024):
    """Exact copy of a float array whose entries are all small-denominator rationals, else None.

    Only entries that are *exactly* such rationals qualify (integers, halves,
    quarters, ...); a float like 0.1 or 1/sqrt(2) keeps the family in float mode.
    """
    a = np.asarray(a)
    if np.iscomplexobj(a) or not np.all(np.isfinite(a)):
        return None
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        exact = Fraction(float(x))
        if exact.denominator > max_denominator:
            return None
        out[idx] = exact
    return out


def zeros_like_mode(shape, exact, complex_=False):
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=complex if complex_ else float)


def identity(n, exact=False):
    if exact:
        out = zeros_like_mode((n, n), True)
        for i in range(n):
            out[i, i] = Fraction(1)
        return out
    return np.eye(n)


def conj(a):
    return a if is_exact(a) else np.conj(a)


def integer_rows(a):
    """Scale each row of an exact matrix to coprime integers (spans are unchanged)."""
    rows = []
    for row in a:
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [int(x * den) for x in row]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        rows.append(ints)
    return rows


# ---------------------------------------------------------------------------
# rank


def bareiss_rank(rows):
    """Rank of an integer matrix (list of rows) by fraction-free elimination."""
    a = [list(r) for r in rows]
    m = len(a)
    if m == 0:
        return 0
    n = len(a[0])
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        p = r
        while p < m and a[p][c] == 0:
            p += 1
        if p == m:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        piv_row = a[r]
        piv = piv_row[c]
        for i in range(r + 1, m):
            row = a[i]
            lead = row[c]
            for j in range(c + 1, n):
                row[j] = (piv * row[j] - lead * piv_row[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r


def float_rank(a, tol=DEFAULT_TOL):
    a = np.asarray(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.count_nonzero(s > tol.rank_tol * max(float(s[0]), 1.0)))


def rank(m, tol=DEFAULT_TOL):
    """Dimension of the row space of ``m``."""
    if is_exact(m):
        if m.size == 0:
            return 0
        return bareiss_rank(integer_rows(m))
    return float_rank(m, tol)


# ---------------------------------------------------------------------------
# null spaces and bases


def rref(m):
    """Reduced row echelon form of an exact matrix: (rows as Fraction lists, pivot columns)."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = m.shape[1]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def null_space_basis(m, tol=DEFAULT_TOL):
    """Columns spanning {x : m x = 0}; there are ``cols - rank(m)`` of them."""
    cols = m.shape[1]
    if is_exact(m):
        reduced, pivots = rref(m) if m.shape[0] else ([], [])
        free = [c for c in range(cols) if c not in pivots]
        out = zeros_like_mode((cols, len(free)), True)
        for k, f in enumerate(free):
            out[f, k] = Fraction(1)
            for row, p in zip(reduced, pivots):
                out[p, k] = -row[f]
        return out
    m = np.asarray(m)
    if m.shape[0] == 0:
        return np.eye(cols, dtype=m.dtype if np.iscomplexobj(m) else float)
    r = float_rank(m, tol)
    _, _, vh = np.linalg.svd(m)
    return vh[r:].conj().T


class Basis(NamedTuple):
    """Orthogonal basis as columns, with squared norms (all 1 in float mode)."""

    vectors: np.ndarray
    sq_norms: tuple


def orthonormalize(vectors, tol=DEFAULT_TOL):
    """Orthonormal basis of the span of the rows of ``vectors``.

    Float mode runs modified Gram-Schmidt with one re-orthogonalization pass.
    Exact mode cannot take square roots, so it returns an orthogonal basis and
    the exact squared norms instead.
    """
    vectors = np.asarray(vectors) if not is_exact(vectors) else vectors
    n = vectors.shape[1]
    if is_exact(vectors):
        basis = []
        norms = []
        for v in vectors:
            w = list(v)
            for b, nb in zip(basis, norms):
                c = sum((x * y for x, y in zip(w, b)), Fraction(0)) / nb
                if c:
                    w = [x - c * y for x, y in zip(w, b)]
            nw = sum((x * x for x in w), Fraction(0))
            if nw:
                basis.append(w)
                norms.append(nw)
        out = zeros_like_mode((n, len(basis)), True)
        for k, b in enumerate(basis):
            out[:, k] = b
        return Basis(out, tuple(norms))
    dtype = complex if np.iscomplexobj(vectors) else float
    norms_in = np.linalg.norm(vectors, axis=1) if vectors.size else np.zeros(0)
    scale = max(1.0, float(norms_in.max())) if norms_in.size else 1.0
    cut = tol.rank_tol * scale
    q = []
    for v in vectors:
        w = np.array(v, dtype=dtype)
        for _ in range(2):
            for b in q:
                w = w - np.vdot(b, w) * b
        nw = np.linalg.norm(w)
        if nw > cut:
            q.append(w / nw)
    out = np.column_stack(q) if q else np.zeros((n, 0), dtype=dtype)
    return Basis(out, (1.0,) * len(q))


def projection_onto_span(vectors, tol=DEFAULT_TOL):
    """Orthogonal projector (N x N) onto the span of the rows of ``vectors``."""
    basis = orthonormalize(vectors, tol)
    b = basis.vectors
    n = b.shape[0]
    if is_exact(b):
        p = zeros_like_mode((n, n), True)
        for k, nb in enumerate(basis.sq_norms):
            col = b[:, k]
            p = p + np.outer(col, col) / nb
        return p
    return b @ b.conj().T


# ---------------------------------------------------------------------------
# spectra


class Enclosure(NamedTuple):
    """Certified rational interval [lo, hi] containing an eigenvalue."""

    lo: Fraction
    hi: Fraction

    def __float__(self):
        return float((self.lo + self.hi) / 2)

    def contains(self, value):
        return self.lo <= to_fraction(value) <= self.hi


def symmetric_spectrum_extremes(m, tol=DEFAULT_TOL):
    """(min eigenvalue, max eigenvalue) of a symmetric / Hermitian matrix.

    Exact input yields :class:`Enclosure` intervals of width at most
    ``tol.witness_tol``, isolated on the characteristic polynomial.
    """
    n = m.shape[0]
    if m.shape != (n, n):
        raise NotSymmetric("matrix is not square")
    if is_exact(m):
        if any(m[i, j] != m[j, i] for i in range(n) for j in range(i + 1, n)):
            raise NotSymmetric("exact matrix is not symmetric")
        import sympy

        lam = sympy.Symbol("lam")
        poly = sympy.Matrix(m.tolist()).charpoly(lam)
        eps = sympy.Rational(to_fraction(tol.witness_tol))
        intervals = sympy.Poly(poly.as_expr(), lam).intervals(eps=eps)

        def frac(r):
            r = sympy.Rational(r)
            return Fraction(int(r.p), int(r.q))

        (lo_a, lo_b), _ = intervals[0]
        (hi_a, hi_b), _ = intervals[-1]
        return Enclosure(frac(lo_a), frac(lo_b)), Enclosure(frac(hi_a), frac(hi_b))
    m = np.asarray(m)
    scale = max(1.0, float(np.abs(m).max())) if m.size else 1.0
    if m.size and float(np.abs(m - m.conj().T).max()) > tol.ortho_tol * scale:
        raise NotSymmetric("matrix is not symmetric within ortho_tol")
    w = np.linalg.eigvalsh(m)
    return float(w[0]), float(w[-1])


def spectrum_value(v):
    """Float view of a value returned by :func:`symmetric_spectrum_extremes`."""
    return float(v)


def exact_inverse(m):
    """Inverse of a square exact matrix, or None when singular."""
    n = m.shape[0]
    aug = np.concatenate([m, identity(n, exact=True)], axis=1)
    reduced, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    out = zeros_like_mode((n, n), True)
    for i in range(n):
        out[i, :] = reduced[i][n:]
    return out
