# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: polar transform, SC and SCL decoding.

Mirrors ``_pycore`` operation for operation.  The list decoder keeps one
LLR array and one partial-sum array per tree level per path, shared between
paths through reference counts and copied on write, so cloning a path costs
O(log N) pointer copies instead of O(N) data.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs
from libc.string cimport memcpy

cnp.import_array()

IMPLEMENTATION = "cython"

cdef enum:
    FROZEN = 0
    INFO = 1
    CHECK = 2

cdef enum:
    DYNAMIC_FROZEN = 0
    KILL = 1
    KEEP = 2


cdef inline int _ctz(int i) noexcept nogil:
    cdef int k = 0
    while not (i & 1):
        i >>= 1
        k += 1
    return k


cdef inline double _f(double a, double b) noexcept nogil:
    cdef double m = fabs(a)
    cdef double mb = fabs(b)
    if mb < m:
        m = mb
    if (a < 0) != (b < 0):
        return -m
    return m


def polar_transform(u):
    arr = np.array(u, dtype=np.uint8, copy=True)
    shape = arr.shape
    cdef unsigned char[:, ::1] x = arr.reshape(-1, arr.shape[arr.ndim - 1])
    cdef Py_ssize_t rows = x.shape[0], N = x.shape[1]
    cdef Py_ssize_t r, h, blk, j
    with nogil:
        for r in range(rows):
            h = 1
            while h < N:
                blk = 0
                while blk < N:
                    for j in range(blk, blk + h):
                        x[r, j] ^= x[r, j + h]
                    blk += 2 * h
                h *= 2
    return arr


def sc_decode_llr(llr_in, frozen_in):
    cdef double[::1] llr = np.ascontiguousarray(llr_in, dtype=np.float64)
    cdef unsigned char[::1] frozen = np.ascontiguousarray(frozen_in, dtype=np.uint8)
    cdef Py_ssize_t N = llr.shape[0]
    cdef int n = 0
    while (1 << n) < N:
        n += 1
    cdef double[::1] alpha = np.zeros(max(N, 1), dtype=np.float64)
    cdef unsigned char[::1] bl = np.zeros(max(N, 1), dtype=np.uint8)
    cdef unsigned char[::1] cbuf = np.zeros(2 * max(N, 1), dtype=np.uint8)
    u_arr = np.zeros(N, dtype=np.uint8)
    cdef unsigned char[::1] u = u_arr
    cdef double *a = &alpha[0]
    cdef double *ch = &llr[0]
    cdef unsigned char *b = &bl[0]
    cdef unsigned char *cb = &cbuf[0]
    cdef double *src
    cdef Py_ssize_t i, j, h
    cdef int s, top, k, bit
    cdef double lam
    with nogil:
        for i in range(N):
            top = n - 1 if i == 0 else _ctz(<int>i)
            s = top
            while s >= 0:
                h = 1 << s
                src = ch if s + 1 == n else a + 2 * h - 1
                if s == top and i != 0:
                    for j in range(h):
                        if b[h - 1 + j]:
                            a[h - 1 + j] = src[h + j] - src[j]
                        else:
                            a[h - 1 + j] = src[h + j] + src[j]
                else:
                    for j in range(h):
                        a[h - 1 + j] = _f(src[j], src[h + j])
                s -= 1
            lam = a[0] if n > 0 else ch[0]
            bit = 0 if (frozen[i] or lam >= 0) else 1
            u[i] = bit
            cb[0] = bit
            k = 0
            while k < n and (i >> k) & 1:
                h = 1 << k
                for j in range(h):
                    cb[N + j] = b[h - 1 + j] ^ cb[j]
                    cb[N + h + j] = cb[j]
                memcpy(cb, cb + N, 2 * h)
                k += 1
            if k < n:
                memcpy(b + (1 << k) - 1, cb, 1 << k)
    return u_arr


cdef class _Pool:
    """Per-level arrays shared by reference count."""
    cdef int n, L
    cdef double[::1] alpha
    cdef unsigned char[::1] bits
    cdef int[:, ::1] a_ref
    cdef int[:, ::1] b_ref
    cdef int[:, ::1] a_cnt
    cdef int[:, ::1] b_cnt

    def __init__(self, int n, int L):
        self.n = n
        self.L = L
        size = max(L * ((1 << n) - 1), 1)
        self.alpha = np.zeros(size, dtype=np.float64)
        self.bits = np.zeros(size, dtype=np.uint8)
        self.a_ref = np.zeros((L, max(n, 1)), dtype=np.int32)
        self.b_ref = np.zeros((L, max(n, 1)), dtype=np.int32)
        self.a_cnt = np.zeros((max(n, 1), L), dtype=np.int32)
        self.b_cnt = np.zeros((max(n, 1), L), dtype=np.int32)

    cdef inline double* a_ptr(self, int slot, int s) noexcept nogil:
        return &self.alpha[self.L * ((1 << s) - 1) + self.a_ref[slot, s] * (1 << s)]

    cdef inline unsigned char* b_ptr(self, int slot, int s) noexcept nogil:
        return &self.bits[self.L * ((1 << s) - 1) + self.b_ref[slot, s] * (1 << s)]

    cdef double* a_write(self, int slot, int s) noexcept nogil:
        cdef int r = self.a_ref[slot, s], t
        if self.a_cnt[s, r] > 1:
            self.a_cnt[s, r] -= 1
            t = 0
            while self.a_cnt[s, t] != 0:
                t += 1
            self.a_cnt[s, t] = 1
            self.a_ref[slot, s] = t
        return self.a_ptr(slot, s)

    cdef unsigned char* b_write(self, int slot, int s) noexcept nogil:
        cdef int r = self.b_ref[slot, s], t
        if self.b_cnt[s, r] > 1:
            self.b_cnt[s, r] -= 1
            t = 0
            while self.b_cnt[s, t] != 0:
                t += 1
            self.b_cnt[s, t] = 1
            self.b_ref[slot, s] = t
        return self.b_ptr(slot, s)

    cdef void share(self, int dst, int src) noexcept nogil:
        cdef int s
        for s in range(self.n):
            self.a_ref[dst, s] = self.a_ref[src, s]
            self.b_ref[dst, s] = self.b_ref[src, s]
            self.a_cnt[s, self.a_ref[src, s]] += 1
            self.b_cnt[s, self.b_ref[src, s]] += 1

    cdef void release(self, int slot) noexcept nogil:
        cdef int s
        for s in range(self.n):
            self.a_cnt[s, self.a_ref[slot, s]] -= 1
            self.b_cnt[s, self.b_ref[slot, s]] -= 1


def scl_core(llr_in, kind_in, check_of_in, chk_ptr_in, chk_deps_in, chk_const_in,
             chk_mode_in, int list_size, bint early_term):
    cdef double[::1] llr = np.ascontiguousarray(llr_in, dtype=np.float64)
    cdef signed char[::1] kind = np.ascontiguousarray(kind_in, dtype=np.int8)
    cdef int[::1] check_of = np.ascontiguousarray(check_of_in, dtype=np.int32)
    cdef int[::1] chk_ptr = np.ascontiguousarray(chk_ptr_in, dtype=np.int32)
    cdef int[::1] chk_deps = np.ascontiguousarray(
        chk_deps_in if len(chk_deps_in) else [0], dtype=np.int32)
    cdef unsigned char[::1] chk_const = np.ascontiguousarray(
        chk_const_in if len(chk_const_in) else [0], dtype=np.uint8)
    cdef signed char[::1] chk_mode = np.ascontiguousarray(
        chk_mode_in if len(chk_mode_in) else [0], dtype=np.int8)
    cdef int N = llr.shape[0]
    cdef int n = 0
    while (1 << n) < N:
        n += 1
    cdef int L = list_size
    cdef _Pool pool = _Pool(n, L)

    cdef unsigned char[:, ::1] u = np.zeros((L, N), dtype=np.uint8)
    cdef double[::1] metric = np.zeros(L, dtype=np.float64)
    cdef unsigned char[::1] failed = np.zeros(L, dtype=np.uint8)
    cdef int[::1] act = np.zeros(L, dtype=np.int32)
    cdef int[::1] new_act = np.zeros(L, dtype=np.int32)
    cdef int[::1] free_slots = np.zeros(L, dtype=np.int32)
    cdef double[::1] lam = np.zeros(L, dtype=np.float64)
    cdef unsigned char[::1] bits = np.zeros(L, dtype=np.uint8)
    cdef unsigned char[::1] new_bits = np.zeros(L, dtype=np.uint8)
    cdef double[::1] cand_m = np.zeros(2 * L, dtype=np.float64)
    cdef int[::1] cand_i = np.zeros(2 * L, dtype=np.int32)
    cdef unsigned char[::1] chosen = np.zeros(2 * L, dtype=np.uint8)
    cdef unsigned char[::1] fail = np.zeros(L, dtype=np.uint8)
    cdef unsigned char[::1] cbuf = np.zeros(2 * max(N, 1), dtype=np.uint8)
    cdef int[::1] counts = np.zeros(N, dtype=np.int32)
    cdef double *ch = &llr[0]
    cdef unsigned char *cb = &cbuf[0]

    cdef int P = 1, nfree, i, s, top, p, slot, q, j, h, k, c, nc, t, ti, kk
    cdef int nsel, parent, b0, b1, dst, bit, par, nk
    cdef long explored = 0
    cdef int terminated = -1
    cdef double *dstp
    cdef double *srcp
    cdef unsigned char *blp
    cdef double pen, mv
    cdef int hv
    cdef bint fork, allfail

    for s in range(n):
        pool.a_cnt[s, 0] = 1
        pool.b_cnt[s, 0] = 1
    act[0] = 0
    nfree = 0
    for t in range(L - 1, 0, -1):
        free_slots[nfree] = t
        nfree += 1

    with nogil:
        for i in range(N):
            top = n - 1 if i == 0 else _ctz(i)
            for p in range(P):
                slot = act[p]
                s = top
                while s >= 0:
                    h = 1 << s
                    srcp = ch if s + 1 == n else pool.a_ptr(slot, s + 1)
                    dstp = pool.a_write(slot, s)
                    if s == top and i != 0:
                        blp = pool.b_ptr(slot, s)
                        for j in range(h):
                            if blp[j]:
                                dstp[j] = srcp[h + j] - srcp[j]
                            else:
                                dstp[j] = srcp[h + j] + srcp[j]
                    else:
                        for j in range(h):
                            dstp[j] = _f(srcp[j], srcp[h + j])
                    s -= 1
                lam[p] = pool.a_ptr(slot, 0)[0] if n > 0 else ch[0]

            k = kind[i]
            c = check_of[i]
            fork = k == INFO or (k == CHECK and chk_mode[c] != DYNAMIC_FROZEN)
            if not fork:
                for p in range(P):
                    slot = act[p]
                    if k == FROZEN:
                        bit = 0
                    else:
                        bit = chk_const[c]
                        for j in range(chk_ptr[c], chk_ptr[c + 1]):
                            bit ^= u[slot, chk_deps[j]]
                    hv = 1 if lam[p] < 0 else 0
                    if bit != hv:
                        metric[slot] += fabs(lam[p])
                    bits[p] = bit
                    u[slot, i] = bit
            else:
                nc = 2 * P
                explored += nc
                for p in range(P):
                    slot = act[p]
                    pen = fabs(lam[p])
                    if lam[p] < 0:
                        cand_m[2 * p] = metric[slot] + pen
                        cand_m[2 * p + 1] = metric[slot]
                    else:
                        cand_m[2 * p] = metric[slot]
                        cand_m[2 * p + 1] = metric[slot] + pen
                for q in range(nc):
                    chosen[q] = 1
                if nc > L:
                    # stable insertion sort of candidate ids by (metric, id)
                    for q in range(nc):
                        cand_i[q] = q
                    for q in range(1, nc):
                        ti = cand_i[q]
                        mv = cand_m[ti]
                        j = q - 1
                        while j >= 0 and cand_m[cand_i[j]] > mv:
                            cand_i[j + 1] = cand_i[j]
                            j -= 1
                        cand_i[j + 1] = ti
                    for q in range(nc):
                        chosen[q] = 0
                    for q in range(L):
                        chosen[cand_i[q]] = 1
                # release parents with no surviving child
                for p in range(P):
                    if not chosen[2 * p] and not chosen[2 * p + 1]:
                        pool.release(act[p])
                        free_slots[nfree] = act[p]
                        nfree += 1
                nsel = 0
                for p in range(P):
                    slot = act[p]
                    b0 = chosen[2 * p]
                    b1 = chosen[2 * p + 1]
                    if b0 and b1:
                        nfree -= 1
                        dst = free_slots[nfree]
                        pool.share(dst, slot)
                        memcpy(&u[dst, 0], &u[slot, 0], N)
                        failed[dst] = failed[slot]
                        metric[dst] = cand_m[2 * p + 1]
                        u[dst, i] = 1
                        metric[slot] = cand_m[2 * p]
                        u[slot, i] = 0
                        new_act[nsel] = slot
                        new_bits[nsel] = 0
                        new_act[nsel + 1] = dst
                        new_bits[nsel + 1] = 1
                        nsel += 2
                    elif b0 or b1:
                        bit = 1 if b1 else 0
                        metric[slot] = cand_m[2 * p + bit]
                        u[slot, i] = bit
                        new_act[nsel] = slot
                        new_bits[nsel] = bit
                        nsel += 1
                P = nsel
                for p in range(P):
                    act[p] = new_act[p]
                    bits[p] = new_bits[p]

                if k == CHECK:
                    allfail = True
                    for p in range(P):
                        slot = act[p]
                        par = chk_const[c]
                        for j in range(chk_ptr[c], chk_ptr[c + 1]):
                            par ^= u[slot, chk_deps[j]]
                        fail[p] = 1 if par != u[slot, i] else 0
                        if not fail[p]:
                            allfail = False
                    if chk_mode[c] == KEEP:
                        # terminate once no path in the list is still clean
                        allfail = True
                        for p in range(P):
                            if fail[p]:
                                failed[act[p]] = 1
                            if not failed[act[p]]:
                                allfail = False
                        if early_term and allfail:
                            terminated = i
                    elif allfail:
                        for p in range(P):
                            failed[act[p]] = 1
                        terminated = i
                    else:
                        nk = 0
                        for p in range(P):
                            if fail[p]:
                                pool.release(act[p])
                                free_slots[nfree] = act[p]
                                nfree += 1
                            else:
                                act[nk] = act[p]
                                bits[nk] = bits[p]
                                nk += 1
                        P = nk
            counts[i] = P
            if terminated >= 0:
                break

            # partial sums
            for p in range(P):
                slot = act[p]
                cb[0] = bits[p]
                kk = 0
                while kk < n and (i >> kk) & 1:
                    h = 1 << kk
                    blp = pool.b_ptr(slot, kk)
                    for j in range(h):
                        cb[N + j] = blp[j] ^ cb[j]
                        cb[N + h + j] = cb[j]
                    memcpy(cb, cb + N, 2 * h)
                    kk += 1
                if kk < n:
                    memcpy(pool.b_write(slot, kk), cb, 1 << kk)

    rows = [act[p] for p in range(P)]
    u_out = np.asarray(u)[rows].copy()
    return (u_out, np.asarray(metric)[rows].copy(), np.asarray(failed)[rows].copy(),
            terminated, int(explored), np.asarray(counts).copy())
