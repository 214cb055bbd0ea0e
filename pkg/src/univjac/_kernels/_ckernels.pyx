# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; same signatures, same results."""

from libc.stdlib cimport malloc, free

cdef long long INF_C = 1LL << 62
INF = INF_C


cdef inline bint _connected(unsigned long long* adj, unsigned long long mask) nogil:
    cdef unsigned long long reach, frontier, nxt, f, low
    cdef int v
    if mask == 0:
        return False
    reach = mask & (~mask + 1)
    frontier = reach
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & (~f + 1)
            v = __builtin_ctzll(low)
            nxt |= adj[v]
            f ^= low
        nxt &= mask & ~reach
        reach |= nxt
        frontier = nxt
    return reach == mask


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


def connected_mask(adj, mask):
    cdef int n = len(adj)
    cdef unsigned long long buf[64]
    cdef int i
    if n > 64:
        raise ValueError("at most 64 vertices")
    for i in range(n):
        buf[i] = adj[i]
    return bool(_connected(buf, mask))


def biconnected_masks(int nverts, adj):
    cdef unsigned long long buf[64]
    cdef unsigned long long full, w, c, rest, top
    cdef int i
    cdef list out = []
    if nverts > 40:
        raise ValueError("too many vertices for an exhaustive sweep")
    if nverts < 2:
        return out
    for i in range(nverts):
        buf[i] = adj[i]
    full = (1ULL << nverts) - 1
    top = 1ULL << (nverts - 1)
    rest = 0
    while rest < top:
        w = (rest << 1) | 1
        rest += 1
        if w == full:
            continue
        c = full ^ w
        if _connected(buf, w) and _connected(buf, c):
            out.append(w)
            out.append(c)
    out.sort()
    return out


def mask_edge_stats(edges_u, edges_v, masks):
    cdef int m = len(edges_u)
    cdef int i, val, inner, a, b
    cdef unsigned long long w
    cdef int* us = <int*>malloc(max(m, 1) * sizeof(int))
    cdef int* vs = <int*>malloc(max(m, 1) * sizeof(int))
    cdef list out = []
    try:
        for i in range(m):
            us[i] = edges_u[i]
            vs[i] = edges_v[i]
        for pw in masks:
            w = pw
            val = 0
            inner = 0
            for i in range(m):
                a = (w >> us[i]) & 1
                b = (w >> vs[i]) & 1
                if a and b:
                    inner += 1
                elif a or b:
                    val += 1
            out.append((val, inner))
    finally:
        free(us)
        free(vs)
    return out


cdef inline long long _floordiv(long long a, long long b) nogil:
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline long long _ceildiv(long long a, long long b) nogil:
    return -_floordiv(-a, b)


def propagate(long long[::1] lo, long long[::1] hi,
              long long[::1] offsets, long long[::1] cvars, long long[::1] ccoefs,
              long long[::1] cconst, long long[::1] clo, long long[::1] chi,
              long long[::1] var_offsets, long long[::1] var_cons,
              queue_all=True, changed=None):
    cdef Py_ssize_t m = offsets.shape[0] - 1
    cdef Py_ssize_t qcap, head, tail, k, k2, s, t, i, p, x
    cdef long long a, mn, mx, lower, upper, own_mn, own_mx, b, new_lo, new_hi
    cdef int mn_inf, mx_inf, rest_mn_inf, rest_mx_inf
    cdef bint own_mn_inf, own_mx_inf
    cdef char* inq
    cdef Py_ssize_t* queue
    cdef bint ok = True
    if m <= 0:
        return True
    # ring buffer: each constraint is queued at most once at a time
    qcap = m + 1
    inq = <char*>malloc(m)
    queue = <Py_ssize_t*>malloc(qcap * sizeof(Py_ssize_t))
    try:
        for k in range(m):
            inq[k] = 0
        head = 0
        tail = 0
        if queue_all or changed is None:
            for k in range(m):
                queue[tail] = k
                tail += 1
                inq[k] = 1
        else:
            for j in changed:
                for p in range(var_offsets[j], var_offsets[j + 1]):
                    k = var_cons[p]
                    if not inq[k]:
                        inq[k] = 1
                        queue[tail] = k
                        tail = (tail + 1) % qcap
        while head != tail:
            k = queue[head]
            head = (head + 1) % qcap
            inq[k] = 0
            s = offsets[k]
            t = offsets[k + 1]
            mn = 0
            mx = 0
            mn_inf = 0
            mx_inf = 0
            for i in range(s, t):
                a = ccoefs[i]
                x = cvars[i]
                if a > 0:
                    if lo[x] <= -INF_C:
                        mn_inf += 1
                    else:
                        mn += a * lo[x]
                    if hi[x] >= INF_C:
                        mx_inf += 1
                    else:
                        mx += a * hi[x]
                else:
                    if hi[x] >= INF_C:
                        mn_inf += 1
                    else:
                        mn += a * hi[x]
                    if lo[x] <= -INF_C:
                        mx_inf += 1
                    else:
                        mx += a * lo[x]
            lower = clo[k] - cconst[k]
            upper = chi[k] - cconst[k]
            if mn_inf == 0 and mn > upper:
                ok = False
                break
            if mx_inf == 0 and mx < lower:
                ok = False
                break
            for i in range(s, t):
                a = ccoefs[i]
                x = cvars[i]
                if a > 0:
                    own_mn_inf = lo[x] <= -INF_C
                    own_mx_inf = hi[x] >= INF_C
                    own_mn = 0 if own_mn_inf else a * lo[x]
                    own_mx = 0 if own_mx_inf else a * hi[x]
                else:
                    own_mn_inf = hi[x] >= INF_C
                    own_mx_inf = lo[x] <= -INF_C
                    own_mn = 0 if own_mn_inf else a * hi[x]
                    own_mx = 0 if own_mx_inf else a * lo[x]
                rest_mn_inf = mn_inf - (1 if own_mn_inf else 0)
                rest_mx_inf = mx_inf - (1 if own_mx_inf else 0)
                new_lo = lo[x]
                new_hi = hi[x]
                if a > 0:
                    if rest_mx_inf == 0:
                        b = _ceildiv(lower - (mx - own_mx), a)
                        if b > new_lo:
                            new_lo = b
                    if rest_mn_inf == 0:
                        b = _floordiv(upper - (mn - own_mn), a)
                        if b < new_hi:
                            new_hi = b
                else:
                    if rest_mx_inf == 0:
                        b = _floordiv(lower - (mx - own_mx), a)
                        if b < new_hi:
                            new_hi = b
                    if rest_mn_inf == 0:
                        b = _ceildiv(upper - (mn - own_mn), a)
                        if b > new_lo:
                            new_lo = b
                if new_lo > new_hi:
                    ok = False
                    break
                if new_lo != lo[x] or new_hi != hi[x]:
                    if a > 0:
                        if new_lo != lo[x]:
                            if own_mn_inf:
                                mn_inf -= 1
                                mn += a * new_lo
                            else:
                                mn += a * (new_lo - lo[x])
                        if new_hi != hi[x]:
                            if own_mx_inf:
                                mx_inf -= 1
                                mx += a * new_hi
                            else:
                                mx += a * (new_hi - hi[x])
                    else:
                        if new_hi != hi[x]:
                            if own_mn_inf:
                                mn_inf -= 1
                                mn += a * new_hi
                            else:
                                mn += a * (new_hi - hi[x])
                        if new_lo != lo[x]:
                            if own_mx_inf:
                                mx_inf -= 1
                                mx += a * new_lo
                            else:
                                mx += a * (new_lo - lo[x])
                    lo[x] = new_lo
                    hi[x] = new_hi
                    for p in range(var_offsets[x], var_offsets[x + 1]):
                        k2 = var_cons[p]
                        if not inq[k2]:
                            inq[k2] = 1
                            queue[tail] = k2
                            tail = (tail + 1) % qcap
            if not ok:
                break
    finally:
        free(inq)
        free(queue)
    return ok
