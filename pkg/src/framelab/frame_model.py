"""Frames, Parseval frames, Riesz bases and subspaces, with their basic operators.

A family of M vectors in an N-dimensional space is stored as an M x N array
whose rows are the vectors. Subspaces keep an orthonormal basis in float mode
and an orthogonal basis with exact squared norms in exact mode, together with
the projector.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import numerics as nm
from .errors import DimensionMismatch, NotAFrame, NotRieszBasis
from .numerics import DEFAULT_TOL


def _freeze(a):
    a.flags.writeable = False
    return a


def _looks_exact(rows):
    return all(
        isinstance(x, (int, Fraction, str, np.integer)) and not isinstance(x, bool)
        for row in rows
        for x in row
    )


@dataclass(frozen=True, eq=False)
class VectorFamily:
    """Finite indexed family of coordinate vectors (rows of ``vectors``)."""

    vectors: np.ndarray
    field: str = "real"

    def __post_init__(self):
        v = self.vectors
        if not isinstance(v, np.ndarray) or v.ndim != 2:
            raise DimensionMismatch("a vector family needs an M x N array")
        if np.iscomplexobj(v) and self.field != "complex":
            object.__setattr__(self, "field", "complex")
        if self.field not in ("real", "complex"):
            raise ValueError(f"unknown field {self.field!r}")
        _freeze(v)

    @classmethod
    def from_rows(cls, rows, dim=None, exact=None, field=None):
        """Build a family from nested sequences.

        ``exact=None`` picks exact arithmetic when every entry is an int,
        Fraction or ``"p/q"`` string.
        """
        if isinstance(rows, np.ndarray) and rows.ndim == 2:
            if exact is None:
                exact = nm.is_exact(rows)
            arr = nm.exact_array(rows) if exact else nm.as_float(rows)
            return cls(arr, field or ("complex" if np.iscomplexobj(arr) else "real"))
        rows = [list(r) for r in rows]
        if not rows:
            if dim is None:
                raise DimensionMismatch("empty family needs an explicit dimension")
            return cls(nm.zeros_like_mode((0, dim), bool(exact)), field or "real")
        lengths = {len(r) for r in rows}
        if len(lengths) != 1 or (dim is not None and lengths != {dim}):
            raise DimensionMismatch(f"vectors have lengths {sorted(lengths)}, expected {dim}")
        if exact is None:
            exact = _looks_exact(rows)
        if exact:
            arr = nm.exact_array(rows)
        else:
            arr = np.array(
                [[complex(x) if isinstance(x, complex) else float(nm.to_fraction(x)) if isinstance(x, str) else x for x in r] for r in rows]
            )
            arr = nm.as_float(arr)
        return cls(arr, field or ("complex" if np.iscomplexobj(arr) else "real"))

    @property
    def M(self):
        return self.vectors.shape[0]

    @property
    def N(self):
        return self.vectors.shape[1]

    @property
    def exact(self):
        return nm.is_exact(self.vectors)

    def __len__(self):
        return self.M

    def __getitem__(self, i):
        return self.vectors[i]

    def subset(self, indices):
        idx = list(indices)
        return VectorFamily(self.vectors[idx].copy() if idx else nm.zeros_like_mode((0, self.N), self.exact, self.field == "complex"), self.field)

    def extend(self, rows):
        """Family with ``rows`` appended (exact only if both sides are exact)."""
        other = rows if isinstance(rows, VectorFamily) else VectorFamily.from_rows(rows, dim=self.N)
        if other.N != self.N:
            raise DimensionMismatch("cannot concatenate families of different dimension")
        if self.exact and other.exact:
            return VectorFamily(np.concatenate([self.vectors, other.vectors]), self.field)
        stacked = np.concatenate([nm.as_float(self.vectors), nm.as_float(other.vectors)])
        field = "complex" if "complex" in (self.field, other.field) else "real"
        return VectorFamily(stacked, field)

    def as_float(self):
        return self if not self.exact else VectorFamily(nm.as_float(self.vectors), self.field)

    def rows_as_lists(self):
        return [list(r) for r in self.vectors]


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of N-space stored by basis columns and cached projector."""

    basis: np.ndarray
    sq_norms: tuple
    projector: np.ndarray

    @classmethod
    def from_spanning(cls, vectors, dim=None, tol=DEFAULT_TOL, exact=None):
        """Subspace spanned by the rows of ``vectors``."""
        if not isinstance(vectors, np.ndarray):
            vectors = VectorFamily.from_rows(vectors, dim=dim, exact=exact).vectors
        elif exact and not nm.is_exact(vectors):
            vectors = nm.exact_array(vectors)
        basis = nm.orthonormalize(vectors, tol)
        b = basis.vectors
        if nm.is_exact(b):
            p = nm.zeros_like_mode((b.shape[0], b.shape[0]), True)
            for k, nb in enumerate(basis.sq_norms):
                p = p + np.outer(b[:, k], b[:, k]) / nb
        else:
            p = b @ b.conj().T
        return cls(_freeze(b), basis.sq_norms, _freeze(p))

    @classmethod
    def full(cls, n, exact=True):
        return cls.from_spanning(nm.identity(n, exact=exact))

    @property
    def N(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def exact(self):
        return nm.is_exact(self.basis)

    def basis_rows(self):
        """Basis vectors as a family (orthonormal in float mode, orthogonal in exact mode)."""
        return VectorFamily(self.basis.T.copy(), "complex" if np.iscomplexobj(self.basis) else "real")

    def onb(self):
        """Float orthonormal basis columns (normalizes the exact orthogonal basis)."""
        b = nm.as_float(self.basis)
        if self.exact:
            b = b / np.sqrt(np.array([float(x) for x in self.sq_norms]))[None, :] if self.dim else b
        return b

    def project(self, x):
        return self.projector @ x

    def contains(self, x, tol=DEFAULT_TOL):
        r = np.asarray(x) - self.projector @ np.asarray(x)
        if nm.is_exact(r) or (nm.is_exact(self.projector) and nm.is_exact(np.asarray(x, dtype=object))):
            return all(v == 0 for v in r)
        scale = max(1.0, float(np.linalg.norm(nm.as_float(np.asarray(x)))))
        return float(np.linalg.norm(nm.as_float(r))) <= tol.witness_tol * scale

    def orthogonal_complement(self, tol=DEFAULT_TOL):
        if self.exact:
            null = nm.null_space_basis(self.basis.T.copy()) if self.dim else nm.identity(self.N, True)
            return Subspace.from_spanning(null.T.copy(), tol=tol)
        if self.dim == 0:
            return Subspace.from_spanning(np.eye(self.N), tol=tol)
        null = nm.null_space_basis(self.basis.conj().T, tol)
        return Subspace.from_spanning(null.T.copy(), tol=tol)

    def coordinates(self, x):
        """Coordinates of P x in this subspace's stored basis."""
        if self.exact:
            return np.array([sum((a * b for a, b in zip(x, self.basis[:, k])), Fraction(0)) / nb
                             for k, nb in enumerate(self.sq_norms)], dtype=object)
        return self.basis.conj().T @ np.asarray(x)

    def as_float(self):
        if not self.exact:
            return self
        return Subspace.from_spanning(self.onb().T.copy())


@dataclass(frozen=True, eq=False)
class SubspaceFamily:
    subspaces: tuple

    def __post_init__(self):
        object.__setattr__(self, "subspaces", tuple(self.subspaces))
        if not self.subspaces:
            raise DimensionMismatch("a subspace family needs at least one subspace")
        dims = {w.N for w in self.subspaces}
        if len(dims) != 1:
            raise DimensionMismatch(f"subspaces live in different ambient dimensions {sorted(dims)}")

    @classmethod
    def from_spanning_sets(cls, sets, dim=None, tol=DEFAULT_TOL, exact=None):
        return cls(tuple(Subspace.from_spanning(s, dim=dim, tol=tol, exact=exact) for s in sets))

    @property
    def N(self):
        return self.subspaces[0].N

    @property
    def M(self):
        return len(self.subspaces)

    @property
    def exact(self):
        return all(w.exact for w in self.subspaces)

    def __len__(self):
        return self.M

    def __iter__(self):
        return iter(self.subspaces)

    def __getitem__(self, i):
        return self.subspaces[i]

    def projectors(self, exact=None):
        use_exact = self.exact if exact is None else exact
        if use_exact:
            return [w.projector for w in self.subspaces]
        return [nm.as_float(w.projector) for w in self.subspaces]

    def onb_union(self, rng=None):
        """Concatenated bases and the flat-index provenance ``[(i, j), ...]`` (1-based).

        Without ``rng`` the stored bases are used (exact orthogonal bases stay
        exact; spans are what matter for rank decisions). With a numpy
        Generator each orthonormal basis is rotated by a random orthogonal
        matrix, giving a random orthonormal basis of every subspace.
        """
        rows = []
        provenance = []
        exact = self.exact and rng is None
        for i, w in enumerate(self.subspaces, start=1):
            b = w.basis if exact else w.onb()
            if rng is not None and w.dim > 1:
                b = b @ random_orthogonal(w.dim, rng)
            for j in range(w.dim):
                rows.append(b[:, j])
                provenance.append((i, j + 1))
        if rows:
            arr = np.array(rows, dtype=object) if exact else np.array(rows)
        else:
            arr = nm.zeros_like_mode((0, self.N), exact)
        return VectorFamily(arr), provenance


def random_orthogonal(d, rng):
    """Haar-distributed d x d orthogonal matrix."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))[None, :]


# ---------------------------------------------------------------------------
# operators


def analysis_matrix(f):
    """M x N matrix T with (T x)_i = <x, phi_i>."""
    return nm.conj(f.vectors).copy()


def frame_operator(f):
    """S = T* T = sum_i phi_i phi_i*."""
    t = analysis_matrix(f)
    if f.exact:
        if f.M == 0:
            return nm.zeros_like_mode((f.N, f.N), True)
        return t.T @ t
    return t.conj().T @ t


def gram_matrix(f):
    """M x M matrix with entry (i, j) = <phi_j, phi_i>."""
    if f.exact:
        return f.vectors @ f.vectors.T if f.M else nm.zeros_like_mode((0, 0), True)
    return np.conj(f.vectors) @ f.vectors.T


class FrameBounds(NamedTuple):
    lower: float
    upper: float
    is_frame: bool


def frame_bounds(f, tol=DEFAULT_TOL):
    """Optimal frame bounds (smallest and largest eigenvalue of S).

    A family that does not span reports ``lower = 0`` and ``is_frame = False``.
    """
    s = frame_operator(f)
    spans = nm.rank(f.vectors, tol) == f.N
    if f.N == 0:
        return FrameBounds(0.0, 0.0, True)
    lo, hi = nm.symmetric_spectrum_extremes(s, tol)
    lower = float(lo) if spans else 0.0
    return FrameBounds(lower, float(hi), spans)


def is_parseval(f, tol=DEFAULT_TOL):
    s = frame_operator(f)
    eye = nm.identity(f.N, exact=f.exact)
    if f.exact:
        return bool(np.all(s == eye))
    return bool(np.abs(s - eye).max() <= tol.ortho_tol) if f.N else True


def _inv_sqrt(s):
    w, v = np.linalg.eigh(s)
    return (v * (1.0 / np.sqrt(w))) @ v.conj().T


def canonical_tight_transform(f, tol=DEFAULT_TOL):
    """The Parseval frame {S^{-1/2} phi_i}; an orthonormal basis when M = N."""
    if nm.rank(f.vectors, tol) < f.N:
        raise NotAFrame("family does not span, S is not invertible")
    s = nm.as_float(frame_operator(f))
    root = _inv_sqrt(s)
    return VectorFamily(nm.as_float(f.vectors) @ root.T, f.field)


def _require_riesz(f, tol):
    if f.M != f.N:
        raise NotRieszBasis(f"a Riesz basis needs M = N, got M={f.M}, N={f.N}")
    if nm.rank(f.vectors, tol) < f.N:
        raise NotRieszBasis("vectors are linearly dependent")


def riesz_bounds(f, tol=DEFAULT_TOL):
    """Optimal Riesz bounds: extreme eigenvalues of the Gram matrix."""
    _require_riesz(f, tol)
    lo, hi = nm.symmetric_spectrum_extremes(gram_matrix(f), tol)
    return float(lo), float(hi)


def dual_riesz_basis(f, tol=DEFAULT_TOL):
    """Biorthogonal dual {phi_i*}: <phi_i*, phi_j> = delta_ij."""
    _require_riesz(f, tol)
    if f.exact:
        inv = nm.exact_inverse(f.vectors)
        if inv is None:
            raise NotRieszBasis("basis matrix is singular")
        return VectorFamily(inv.T.copy(), f.field)
    inv = np.linalg.inv(f.vectors)
    return VectorFamily(inv.conj().T.copy(), f.field)
