"""Naimark complements of Parseval frames.

A Parseval frame's analysis matrix T (M x N) is an isometry. Completing it
to an M x M unitary [T | U] and reading off the rows of U gives the
complement: the vectors phi_i + psi_i are then orthonormal in M-space.
"""

from dataclasses import dataclass

import numpy as np

from . import numerics as nm
from .certificates import Certificate
from .errors import DimensionMismatch, NotParseval
from .frame_model import VectorFamily, analysis_matrix, gram_matrix, is_parseval
from .numerics import DEFAULT_TOL


@dataclass(frozen=True, eq=False)
class NaimarkComplement(VectorFamily):
    """Complement family; ``zero_complement`` marks the M = N case (dimension 0)."""

    zero_complement: bool = False
    notes: tuple = ()


def random_parseval_frame(m, n, rng, complex_=False):
    """Rows of a random M x N isometry, i.e. a Parseval frame of M vectors in N-space."""
    a = rng.standard_normal((m, n))
    if complex_:
        a = a + 1j * rng.standard_normal((m, n))
    q, _ = np.linalg.qr(a)
    return VectorFamily(np.conj(q).copy(), "complex" if complex_ else "real")


def _greedy_completion(t, tol):
    # orthonormalize (I - TT*) e_i, always taking the largest residual next
    m, n = t.shape
    basis = [t[:, j] for j in range(n)]
    picked = []
    residual = np.eye(m, dtype=t.dtype) - t @ t.conj().T
    cols = [residual[:, i].copy() for i in range(m)]
    for _ in range(m - n):
        norms = np.array([np.linalg.norm(c) for c in cols])
        i = int(np.argmax(norms))  # argmax keeps the lowest index on ties
        if norms[i] <= tol.rank_tol:
            raise NotParseval("analysis matrix is not an isometry")
        w = cols[i]
        for _ in range(2):
            for b in basis:
                w = w - np.vdot(b, w) * b
        w = w / np.linalg.norm(w)
        basis.append(w)
        picked.append(w)
        cols = [c - np.vdot(w, c) * w for c in cols]
    return np.column_stack(picked) if picked else np.zeros((m, 0), dtype=t.dtype)


def _random_completion(t, rng):
    m, n = t.shape
    g = rng.standard_normal((m, m - n))
    if np.iscomplexobj(t):
        g = g + 1j * rng.standard_normal((m, m - n))
    g = g - t @ (t.conj().T @ g)
    q, _ = np.linalg.qr(g)
    q = q - t @ (t.conj().T @ q)
    q, _ = np.linalg.qr(q)
    return q


def naimark_complement(f, tol=DEFAULT_TOL, rng=None):
    """Naimark complement of a Parseval frame.

    The default completion is deterministic; passing a numpy Generator draws
    a random completion instead (all completions agree up to a unitary, so
    their Gram matrices coincide).
    """
    notes = []
    if f.exact:
        notes.append("exact input converted to float: unit vectors leave the rationals")
    if not is_parseval(f, tol):
        raise NotParseval("Naimark complements are only defined for Parseval frames")
    g = f.as_float()
    t = analysis_matrix(g)
    m, n = t.shape
    u = _greedy_completion(t, tol) if rng is None else _random_completion(t, rng)
    psi = np.conj(u).copy()
    field = "complex" if np.iscomplexobj(psi) else "real"
    return NaimarkComplement(psi, field, zero_complement=(m == n), notes=tuple(notes))


def verify_naimark_pair(f, g, tol=DEFAULT_TOL):
    """PASS when both families are Parseval and Gram(f) + Gram(g) = I_M."""
    if f.M != g.M:
        raise DimensionMismatch(f"families have {f.M} and {g.M} vectors")
    if f.N + g.N != f.M:
        raise DimensionMismatch(f"dimensions {f.N} + {g.N} do not add up to M = {f.M}")
    a, b = f.as_float(), g.as_float()
    total = gram_matrix(a) + gram_matrix(b)
    residual = float(np.abs(total - np.eye(f.M)).max()) if f.M else 0.0
    pa = is_parseval(a, tol)
    pb = is_parseval(b, tol)
    ok = pa and pb and residual <= tol.ortho_tol
    details = {"gram_residual": residual, "first_parseval": pa, "second_parseval": pb}
    return Certificate("naimark_pair", "PASS" if ok else "FAIL", "float", None if ok else details, details)


__all__ = ["NaimarkComplement", "naimark_complement", "verify_naimark_pair", "random_parseval_frame", "nm"]
