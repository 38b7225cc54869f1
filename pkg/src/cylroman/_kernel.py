"""Compiled (min,+) product kernel.

The kernel works on int32 arrays in which infinity has already been replaced
by ``INNER_INF`` (2**30) in the right operand, so that ``a + b`` never wraps
as long as finite entries stay within ``FINITE_LIMIT``. Rows whose left entry
is the public sentinel are skipped, which is what makes the first, sparse
powers cheap.
"""
import numba as nb
import numpy as np

INF_SENTINEL = np.int32(2**31 - 1)
INNER_INF = np.int32(2**30)
FINITE_LIMIT = 2**28 - 1
# any sum at or above this involved an infinite operand
INF_THRESHOLD = 2**29

ROW_TILE = 32


@nb.njit(nogil=True, cache=True, boundscheck=False)
def minplus_rows(a, b_inner, out, r0, r1, tile):
    n = b_inner.shape[0]
    big = np.int32(INNER_INF)
    inf = np.int32(INF_SENTINEL)
    for i0 in range(r0, r1, tile):
        i1 = min(i0 + tile, r1)
        for i in range(i0, i1):
            for j in range(n):
                out[i, j] = big
        for k in range(a.shape[1]):
            for i in range(i0, i1):
                aik = a[i, k]
                if aik == inf:
                    continue
                for j in range(n):
                    s = aik + b_inner[k, j]
                    if s < out[i, j]:
                        out[i, j] = s
