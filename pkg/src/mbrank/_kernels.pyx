# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: count coefficient vectors whose slice combination has low rank.

This is the hot loop behind the finite-field intersection dimensions: up to
p^m rank computations of m x m matrices over F_p per direction.
"""

from libc.string cimport memset


def count_low_rank(slices, int p, int r):
    """Number of alpha in F_p^m with rank(sum alpha_k * slices[k]) <= r.

    slices: nested lists (m of m x m) of ints already reduced mod p.
    """
    cdef int m = len(slices)
    cdef int n = len(slices[0])
    cdef long sl[8][8][8]
    cdef int alpha[8]
    cdef long mat[8][8]
    cdef long work[8][8]
    cdef int i, j, k
    if m > 8 or n > 8:
        raise ValueError("kernel supports m, n <= 8")
    for k in range(m):
        for i in range(n):
            for j in range(n):
                sl[k][i][j] = slices[k][i][j] % p
    for k in range(m):
        alpha[k] = 0
    cdef long total = 0
    cdef long count = 1
    for k in range(m):
        count *= p
    cdef long step, rk
    cdef int pos
    for step in range(count):
        # build the combination
        memset(mat, 0, sizeof(mat))
        for k in range(m):
            if alpha[k]:
                for i in range(n):
                    for j in range(n):
                        mat[i][j] += alpha[k] * sl[k][i][j]
        for i in range(n):
            for j in range(n):
                work[i][j] = mat[i][j] % p
        rk = _rank(work, n, p)
        if rk <= r:
            total += 1
        # odometer
        pos = 0
        while pos < m:
            alpha[pos] += 1
            if alpha[pos] < p:
                break
            alpha[pos] = 0
            pos += 1
    return total


cdef long _rank(long a[8][8], int n, int p):
    cdef int row = 0
    cdef int col, i, j, sel
    cdef long inv, factor, piv
    for col in range(n):
        sel = -1
        for i in range(row, n):
            if a[i][col] % p != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != row:
            for j in range(n):
                piv = a[row][j]
                a[row][j] = a[sel][j]
                a[sel][j] = piv
        inv = _inv_mod(a[row][col] % p, p)
        for j in range(n):
            a[row][j] = (a[row][j] * inv) % p
        for i in range(row + 1, n):
            factor = a[i][col] % p
            if factor:
                for j in range(n):
                    a[i][j] = (a[i][j] - factor * a[row][j]) % p
        row += 1
        if row == n:
            break
    return row


cdef long _inv_mod(long a, long p):
    cdef long result = 1
    cdef long base = a % p
    cdef long e = p - 2
    while e:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result
