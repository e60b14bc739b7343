"""Ranks of row subsets, the hot loop behind every combinatorial certifier.

Subsets are bitmasks over the family (bit i is vector i+1). Exact families go
through the integer kernel; float families are ranked by batched SVD.
"""

from functools import lru_cache

import numpy as np

from . import numerics as nm
from .errors import ScanTooLarge
from .kernels import IntKernel
from .numerics import DEFAULT_TOL

MAX_SCAN = 24
_CHUNK = 4096


def check_scan_size(m, force=False):
    if m > MAX_SCAN and not force:
        raise ScanTooLarge(f"exhaustive scan over {m} vectors refused (limit {MAX_SCAN}); pass force=True")


def popcount(masks):
    masks = np.asarray(masks, dtype=np.int64)
    out = np.zeros(masks.shape, dtype=np.int64)
    work = masks.copy()
    while np.any(work):
        out += work & 1
        work >>= 1
    return out


@lru_cache(maxsize=64)
def _order(m, representatives):
    if representatives:
        if m == 0:
            return np.zeros(0, dtype=np.int64)
        masks = (np.arange(1 << (m - 1), dtype=np.int64) << 1) | 1
    else:
        masks = np.arange(1 << m, dtype=np.int64)
    order = np.lexsort((masks, popcount(masks)))
    out = masks[order]
    out.flags.writeable = False
    return out


def subset_order(m, representatives=False):
    """Masks by increasing size, numeric order within a size.

    With ``representatives`` only masks containing vector 1 are listed, one
    per unordered split {S, S^c}.
    """
    return _order(m, representatives)


def mask_indices(mask, base=1):
    out = []
    i = 0
    mask = int(mask)
    while mask:
        if mask & 1:
            out.append(i + base)
        mask >>= 1
        i += 1
    return tuple(out)


def indices_mask(indices, base=1):
    mask = 0
    for i in indices:
        mask |= 1 << (i - base)
    return mask


def float_ranks(a, masks, tol=DEFAULT_TOL):
    m, n = a.shape
    masks = np.asarray(masks, dtype=np.int64)
    out = np.zeros(len(masks), dtype=np.uint8)
    if m == 0 or n == 0 or len(masks) == 0:
        return out
    bits = np.arange(m, dtype=np.int64)
    for start in range(0, len(masks), _CHUNK):
        chunk = masks[start:start + _CHUNK]
        sel = ((chunk[:, None] >> bits) & 1).astype(a.dtype)
        s = np.linalg.svd(a[None, :, :] * sel[:, :, None], compute_uv=False)
        cut = tol.rank_tol * np.maximum(s[:, 0], 1.0)
        out[start:start + len(chunk)] = np.count_nonzero(s > cut[:, None], axis=1)
    return out


class SubsetRanker:
    """Rank oracle for the subsets of one family.

    Float families whose entries are exactly small-denominator rationals are
    promoted to exact arithmetic first.
    """

    def __init__(self, vectors, tol=DEFAULT_TOL, backend=None):
        vectors = getattr(vectors, "vectors", vectors)
        exact = nm.is_exact(vectors)
        if not exact:
            promoted = nm.rationalize(vectors)
            if promoted is not None:
                vectors, exact = promoted, True
        self.exact = exact
        self.m, self.n = vectors.shape
        self.tol = tol
        self.full = (1 << self.m) - 1
        self._table = None
        if exact:
            self._kernel = IntKernel(nm.integer_rows(vectors), self.n, backend)
        else:
            self._kernel = None
            self._float = np.asarray(vectors)

    @property
    def mode(self):
        return "exact" if self.exact else "float"

    @property
    def backend(self):
        return self._kernel.backend if self._kernel is not None else "numpy"

    def ranks(self, masks):
        masks = np.asarray(masks, dtype=np.int64)
        if self._table is not None:
            return self._table[masks]
        if self._kernel is not None:
            if self.n == 0:
                return np.zeros(len(masks), dtype=np.uint8)
            return self._kernel.ranks(masks)
        return float_ranks(self._float, masks, self.tol)

    def rank(self, mask):
        return int(self.ranks([mask])[0])

    def table(self):
        """Ranks of all 2^M subsets, indexed by mask."""
        if self._table is None:
            self._table = self.ranks(np.arange(1 << self.m, dtype=np.int64))
        return self._table

    def cp_search(self, order):
        """First representative S (position in ``order``) with both S and S^c non-spanning."""
        order = np.asarray(order, dtype=np.int64)
        if self._kernel is not None and self._table is None and self.n > 0:
            pos, checked, pruned = self._kernel.cp_search(order)
            return int(pos), int(checked), int(pruned)
        t = self.table()
        rs = t[order]
        rc = t[self.full ^ order]
        bad = np.flatnonzero((rs < self.n) & (rc < self.n))
        pos = int(bad[0]) if bad.size else -1
        checked = pos + 1 if pos >= 0 else len(order)
        pruned = int(np.count_nonzero(rs[:checked] == self.n))
        return pos, checked, pruned
