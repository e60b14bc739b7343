"""Backend selection for the subset-rank kernel.

``compiled``: int64 Bareiss, used when every minor provably fits in int64.
``modular``: compiled rank mod a prime for larger entries. A full answer
(rank = min(|S|, N)) is certified because the modular rank never exceeds
the rational one; anything smaller is recomputed exactly in Python.
``python``: Bareiss on arbitrary-precision ints, the fallback when the
extension is missing. ``FRAMELAB_PURE_PYTHON=1`` forces it.
"""

import math
import os

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # no compiler at install time
    _ckernels = None

# Bareiss entries are minors; |minor| <= Hadamard bound < 2**62 keeps them
# inside int64, and the kernel forms product-differences in 128 bits.
_HADAMARD_LIMIT = 2.0**62
_PRIME = 2147483647  # 2**31 - 1


def compiled_available():
    return _ckernels is not None


def default_backend():
    if os.environ.get("FRAMELAB_PURE_PYTHON") or _ckernels is None:
        return "python"
    return "compiled"


def hadamard_bound(rows, n):
    norms = sorted((math.sqrt(sum(float(x) * float(x) for x in r)) for r in rows), reverse=True)
    bound = 1.0
    for v in norms[:n]:
        bound *= max(v, 1.0)
    return bound


class IntKernel:
    """Rank oracle for row subsets of one fixed integer matrix."""

    def __init__(self, rows, n, backend=None):
        self.rows = [list(map(int, r)) for r in rows]
        self.n = n
        self.m = len(self.rows)
        wanted = backend or default_backend()
        if _ckernels is None and wanted != "python":
            wanted = "python"
        if wanted == "compiled" and hadamard_bound(self.rows, n) >= _HADAMARD_LIMIT:
            wanted = "modular"
        self.backend = wanted
        if wanted == "compiled":
            self._array = np.ascontiguousarray(np.array(self.rows, dtype=np.int64).reshape(self.m, n))
        elif wanted == "modular":
            reduced = [[x % _PRIME for x in r] for r in self.rows]
            self._array = np.ascontiguousarray(np.array(reduced, dtype=np.int64).reshape(self.m, n))

    def _exact_rank(self, mask):
        return int(_pykernels.ranks_of_masks(self.rows, self.n, [mask])[0])

    def ranks(self, masks):
        masks = np.ascontiguousarray(np.asarray(masks, dtype=np.int64))
        if self.backend == "compiled":
            return _ckernels.ranks_of_masks(self._array, self.n, masks)
        if self.backend == "modular":
            out = _ckernels.ranks_of_masks_mod(self._array, self.n, masks, _PRIME)
            cap = np.minimum(_pykernels.popcounts(masks), self.n)
            for k in np.flatnonzero(out < cap):
                out[k] = self._exact_rank(int(masks[k]))
            return out
        return _pykernels.ranks_of_masks(self.rows, self.n, masks)

    def cp_search(self, order):
        order = np.ascontiguousarray(np.asarray(order, dtype=np.int64))
        if self.backend == "compiled":
            return _ckernels.cp_search(self._array, self.n, order)
        if self.backend == "modular":
            full = (1 << self.m) - 1
            start = checked = pruned = 0
            while True:
                pos, c, p = _ckernels.cp_search_mod(self._array, self.n, order, start, _PRIME)
                checked += c
                pruned += p
                if pos < 0:
                    return -1, checked, pruned
                mask = int(order[pos])
                if self._exact_rank(mask) == self.n:
                    pruned += 1
                elif self._exact_rank(full ^ mask) < self.n:
                    return pos, checked, pruned
                start = pos + 1
        return _pykernels.cp_search(self.rows, self.n, order)
