"""Pure-numpy reference kernels.

Same contract as the compiled ``_core`` extension and used when it is not
built.  Both implementations perform the same floating point operations in
the same order, so their outputs are bit-identical.

Tree layout: the LLRs (``alpha``) and partial sums (``bl``) of the node at
depth level ``s`` (node size ``2**s``) live at ``[2**s - 1, 2**(s+1) - 1)``
of a length-N buffer; level ``n`` is the channel vector itself.
"""
import numpy as np

IMPLEMENTATION = "python"

FROZEN, INFO, CHECK = 0, 1, 2
DYNAMIC_FROZEN, KILL, KEEP = 0, 1, 2


def polar_transform(u):
    """Stage-parallel butterfly over the last axis (1-D or 2-D uint8)."""
    x = np.array(u, dtype=np.uint8, copy=True)
    N = x.shape[-1]
    lead = x.shape[:-1]
    h = 1
    while h < N:
        v = x.reshape(lead + (N // (2 * h), 2, h))
        v[..., 0, :] ^= v[..., 1, :]
        h *= 2
    return x


def _ctz(i):
    return (i & -i).bit_length() - 1


def _f(a, b):
    m = np.minimum(np.abs(a), np.abs(b))
    return np.where((a < 0) ^ (b < 0), -m, m)


def _g(a, b, beta):
    return np.where(beta == 1, b - a, b + a)


def sc_decode_llr(llr, frozen_mask):
    """Successive cancellation with min-sum updates; returns u-hat."""
    llr = np.ascontiguousarray(llr, dtype=np.float64)
    frozen_mask = np.asarray(frozen_mask, dtype=np.uint8)
    N = len(llr)
    n = N.bit_length() - 1
    alpha = np.zeros(N, dtype=np.float64)
    bl = np.zeros(N, dtype=np.uint8)
    u = np.zeros(N, dtype=np.uint8)

    def level(s):
        return llr if s == n else alpha[(1 << s) - 1:(1 << (s + 1)) - 1]

    for i in range(N):
        top = n - 1 if i == 0 else _ctz(i)
        for s in range(top, -1, -1):
            src = level(s + 1)
            h = 1 << s
            if s == top and i != 0:
                alpha[h - 1:2 * h - 1] = _g(src[:h], src[h:], bl[h - 1:2 * h - 1])
            else:
                alpha[h - 1:2 * h - 1] = _f(src[:h], src[h:])
        lam = alpha[0] if n > 0 else llr[0]
        bit = 0 if (frozen_mask[i] or lam >= 0) else 1
        u[i] = bit
        c = np.array([bit], dtype=np.uint8)
        k = 0
        while k < n and (i >> k) & 1:
            left = bl[(1 << k) - 1:(1 << (k + 1)) - 1]
            c = np.concatenate([left ^ c, c])
            k += 1
        if k < n:
            bl[(1 << k) - 1:(1 << (k + 1)) - 1] = c
    return u


def scl_core(llr, kind, check_of, chk_ptr, chk_deps, chk_const, chk_mode,
             list_size, early_term):
    """List decoder core.

    Returns ``(u, metric, failed, terminated_at, paths_explored, counts)``
    with one row of ``u`` per surviving path, in list order.
    """
    llr = np.ascontiguousarray(llr, dtype=np.float64)
    kind = np.asarray(kind, dtype=np.int8)
    check_of = np.asarray(check_of, dtype=np.int32)
    chk_ptr = np.asarray(chk_ptr, dtype=np.int32)
    chk_deps = np.asarray(chk_deps, dtype=np.int32)
    chk_const = np.asarray(chk_const, dtype=np.uint8)
    chk_mode = np.asarray(chk_mode, dtype=np.int8)
    N = len(llr)
    n = N.bit_length() - 1
    Lmax = int(list_size)

    alpha = np.zeros((1, N), dtype=np.float64)
    bl = np.zeros((1, N), dtype=np.uint8)
    u = np.zeros((1, N), dtype=np.uint8)
    metric = np.zeros(1, dtype=np.float64)
    failed = np.zeros(1, dtype=np.uint8)
    counts = np.zeros(N, dtype=np.int32)
    explored = 0
    terminated = -1

    def parity(rows, c):
        deps = chk_deps[chk_ptr[c]:chk_ptr[c + 1]]
        par = np.full(rows.shape[0], chk_const[c], dtype=np.uint8)
        if len(deps):
            par ^= (np.bitwise_xor.reduce(rows[:, deps], axis=1)).astype(np.uint8)
        return par

    for i in range(N):
        P = u.shape[0]
        top = n - 1 if i == 0 else _ctz(i)
        for s in range(top, -1, -1):
            h = 1 << s
            if s + 1 == n:
                src = np.broadcast_to(llr, (P, N))
            else:
                src = alpha[:, 2 * h - 1:4 * h - 1]
            if s == top and i != 0:
                alpha[:, h - 1:2 * h - 1] = _g(src[:, :h], src[:, h:], bl[:, h - 1:2 * h - 1])
            else:
                alpha[:, h - 1:2 * h - 1] = _f(src[:, :h], src[:, h:])
        lam = alpha[:, 0] if n > 0 else np.full(P, llr[0])
        penalty = np.abs(lam)
        hard = (lam < 0).astype(np.uint8)

        k = kind[i]
        c = check_of[i]
        fork = k == INFO or (k == CHECK and chk_mode[c] != DYNAMIC_FROZEN)
        if not fork:
            bits = np.zeros(P, dtype=np.uint8) if k == FROZEN else parity(u, c)
            metric = metric + np.where(bits != hard, penalty, 0.0)
        else:
            explored += 2 * P
            cand_metric = np.empty(2 * P, dtype=np.float64)
            cand_metric[0::2] = metric + np.where(hard != 0, penalty, 0.0)
            cand_metric[1::2] = metric + np.where(hard != 1, penalty, 0.0)
            order = np.arange(2 * P)
            if 2 * P > Lmax:
                order = np.sort(np.lexsort((order, cand_metric))[:Lmax])
            parents = order // 2
            bits = (order % 2).astype(np.uint8)
            alpha, bl, u = alpha[parents], bl[parents], u[parents]
            metric, failed = cand_metric[order], failed[parents]
        u[:, i] = bits

        if k == CHECK and fork:
            fail = (bits != parity(u, c)).astype(np.uint8)
            if chk_mode[c] == KEEP:
                failed = failed | fail
                # terminate once no path in the list is still clean
                if early_term and failed.all():
                    terminated = i
            else:
                keep = fail == 0
                if not keep.any():
                    failed = np.ones_like(failed)
                    terminated = i
                else:
                    alpha, bl, u = alpha[keep], bl[keep], u[keep]
                    metric, failed = metric[keep], failed[keep]
                    bits = bits[keep]
        counts[i] = u.shape[0]
        if terminated >= 0:
            counts[i + 1:] = 0
            break

        cbits = bits[:, None].copy()
        kk = 0
        while kk < n and (i >> kk) & 1:
            left = bl[:, (1 << kk) - 1:(1 << (kk + 1)) - 1]
            cbits = np.concatenate([left ^ cbits, cbits], axis=1)
            kk += 1
        if kk < n:
            bl[:, (1 << kk) - 1:(1 << (kk + 1)) - 1] = cbits
    return u, metric, failed, terminated, explored, counts
