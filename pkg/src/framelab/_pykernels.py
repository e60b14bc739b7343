"""Pure-Python subset-rank kernel; same contract as the compiled ``_ckernels``.

``rows`` is a list of integer rows (Python ints, so no overflow), ``masks``
select rows by bit position.
"""

import numpy as np

from .numerics import bareiss_rank


def _select(rows, mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(rows[i])
        mask >>= 1
        i += 1
    return out


def popcounts(masks):
    work = np.array(masks, dtype=np.int64)
    out = np.zeros(work.shape, dtype=np.int64)
    while np.any(work):
        out += work & 1
        work >>= 1
    return out


def ranks_of_masks(rows, n, masks):
    out = np.empty(len(masks), dtype=np.uint8)
    for k, mask in enumerate(masks):
        out[k] = bareiss_rank(_select(rows, int(mask))) if mask else 0
    return out


def cp_search(rows, n, order):
    """Scan representative masks; return (position of first doubly-deficient one or -1, checked, pruned)."""
    full = (1 << len(rows)) - 1
    checked = 0
    pruned = 0
    for pos, mask in enumerate(order):
        mask = int(mask)
        checked += 1
        if bareiss_rank(_select(rows, mask)) == n:
            pruned += 1
            continue
        rest = full ^ mask
        if (bareiss_rank(_select(rows, rest)) if rest else 0) < n:
            return pos, checked, pruned
    return -1, checked, pruned
