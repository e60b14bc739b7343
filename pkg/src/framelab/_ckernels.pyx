# Compiled subset-rank kernel: int64 Bareiss elimination on row subsets.
# Entries are minors; callers guarantee they fit in int64 (see kernels.IntKernel).
# The cross products are formed in 128 bits before the exact division.
from libc.stdint cimport int64_t, uint8_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    ctypedef long long i128 "__int128"

import numpy as np


cdef int _mask_rank(const int64_t[:, ::1] rows, int64_t mask, int n, int64_t* work) noexcept nogil:
    cdef int m = rows.shape[0]
    cdef int k = 0
    cdef int i, j, c, r, p
    cdef int64_t piv, lead, prev, tmp
    for i in range(m):
        if (mask >> i) & 1:
            for j in range(n):
                work[k * n + j] = rows[i, j]
            k += 1
    r = 0
    prev = 1
    for c in range(n):
        if r == k:
            break
        p = r
        while p < k and work[p * n + c] == 0:
            p += 1
        if p == k:
            continue
        if p != r:
            for j in range(n):
                tmp = work[r * n + j]
                work[r * n + j] = work[p * n + j]
                work[p * n + j] = tmp
        piv = work[r * n + c]
        for i in range(r + 1, k):
            lead = work[i * n + c]
            for j in range(c + 1, n):
                work[i * n + j] = <int64_t> ((<i128> piv * work[i * n + j] - <i128> lead * work[r * n + j]) / prev)
            work[i * n + c] = 0
        prev = piv
        r += 1
    return r


def ranks_of_masks(const int64_t[:, ::1] rows, int n, const int64_t[::1] masks):
    cdef Py_ssize_t count = masks.shape[0]
    cdef Py_ssize_t t
    out = np.empty(count, dtype=np.uint8)
    cdef uint8_t[::1] ov = out
    cdef int64_t* work = <int64_t*> malloc(max(1, rows.shape[0] * n) * sizeof(int64_t))
    if work == NULL:
        raise MemoryError()
    try:
        with nogil:
            for t in range(count):
                ov[t] = <uint8_t> _mask_rank(rows, masks[t], n, work)
    finally:
        free(work)
    return out


def cp_search(const int64_t[:, ::1] rows, int n, const int64_t[::1] order):
    cdef int m = rows.shape[0]
    cdef int64_t full = (<int64_t> 1 << m) - 1
    cdef Py_ssize_t t, found = -1
    cdef Py_ssize_t checked = 0, pruned = 0
    cdef int64_t mask
    cdef int64_t* work = <int64_t*> malloc(max(1, m * n) * sizeof(int64_t))
    if work == NULL:
        raise MemoryError()
    try:
        with nogil:
            for t in range(order.shape[0]):
                mask = order[t]
                checked += 1
                if _mask_rank(rows, mask, n, work) == n:
                    pruned += 1
                    continue
                if _mask_rank(rows, full ^ mask, n, work) < n:
                    found = t
                    break
    finally:
        free(work)
    return found, checked, pruned


# Rank modulo a prime p < 2**31. It never exceeds the rational rank, so a
# value of min(|S|, n) is certified; smaller values need an exact recheck.

cdef int64_t _inv_mod(int64_t a, int64_t p) noexcept nogil:
    cdef int64_t result = 1
    cdef int64_t e = p - 2
    a %= p
    while e:
        if e & 1:
            result = result * a % p
        a = a * a % p
        e >>= 1
    return result


cdef int _mask_rank_mod(const int64_t[:, ::1] rows, int64_t mask, int n, int64_t p, int64_t* work) noexcept nogil:
    cdef int m = rows.shape[0]
    cdef int k = 0
    cdef int i, j, c, r, q
    cdef int64_t inv, lead, tmp
    for i in range(m):
        if (mask >> i) & 1:
            for j in range(n):
                work[k * n + j] = rows[i, j]
            k += 1
    r = 0
    for c in range(n):
        if r == k:
            break
        q = r
        while q < k and work[q * n + c] == 0:
            q += 1
        if q == k:
            continue
        if q != r:
            for j in range(n):
                tmp = work[r * n + j]
                work[r * n + j] = work[q * n + j]
                work[q * n + j] = tmp
        inv = _inv_mod(work[r * n + c], p)
        for i in range(r + 1, k):
            lead = work[i * n + c] * inv % p
            if lead:
                for j in range(c, n):
                    work[i * n + j] = (work[i * n + j] - lead * work[r * n + j]) % p
                    if work[i * n + j] < 0:
                        work[i * n + j] += p
        r += 1
    return r


def ranks_of_masks_mod(const int64_t[:, ::1] rows, int n, const int64_t[::1] masks, int64_t p):
    cdef Py_ssize_t count = masks.shape[0]
    cdef Py_ssize_t t
    out = np.empty(count, dtype=np.uint8)
    cdef uint8_t[::1] ov = out
    cdef int64_t* work = <int64_t*> malloc(max(1, rows.shape[0] * n) * sizeof(int64_t))
    if work == NULL:
        raise MemoryError()
    try:
        with nogil:
            for t in range(count):
                ov[t] = <uint8_t> _mask_rank_mod(rows, masks[t], n, p, work)
    finally:
        free(work)
    return out


def cp_search_mod(const int64_t[:, ::1] rows, int n, const int64_t[::1] order, Py_ssize_t start, int64_t p):
    """First position >= start where neither side has full rank mod p (a candidate, not yet certified)."""
    cdef int m = rows.shape[0]
    cdef int64_t full = (<int64_t> 1 << m) - 1
    cdef Py_ssize_t t, found = -1
    cdef Py_ssize_t checked = 0, pruned = 0
    cdef int64_t mask
    cdef int64_t* work = <int64_t*> malloc(max(1, m * n) * sizeof(int64_t))
    if work == NULL:
        raise MemoryError()
    try:
        with nogil:
            for t in range(start, order.shape[0]):
                mask = order[t]
                checked += 1
                if _mask_rank_mod(rows, mask, n, p, work) == n:
                    pruned += 1
                    continue
                if _mask_rank_mod(rows, full ^ mask, n, p, work) < n:
                    found = t
                    break
    finally:
        free(work)
    return found, checked, pruned
