"""Pure-Python reference versions of the hot kernels.

Every function here has an identically named counterpart in ``_ckernels.pyx``
and both must return identical results.
"""

INF = 1 << 62


def _connected(adj, mask):
    if mask == 0:
        return False
    reach = mask & -mask
    frontier = reach
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj[low.bit_length() - 1]
            f ^= low
        nxt &= mask & ~reach
        reach |= nxt
        frontier = nxt
    return reach == mask


def connected_mask(adj, mask):
    """True iff the vertices in ``mask`` induce a connected subgraph."""
    return _connected(adj, mask)


def biconnected_masks(nverts, adj):
    """All masks W, 0 < W < full, with W and its complement both connected.

    ``adj[v]`` is the neighbour bitmask of vertex ``v`` (loops excluded).
    The result is sorted increasingly.
    """
    full = (1 << nverts) - 1
    out = []
    if nverts < 2:
        return out
    # W ranges over subsets containing vertex 0; its complement is added alongside
    top = 1 << (nverts - 1)
    for rest in range(top):
        w = (rest << 1) | 1
        if w == full:
            continue
        c = full ^ w
        if _connected(adj, w) and _connected(adj, c):
            out.append(w)
            out.append(c)
    out.sort()
    return out


def mask_edge_stats(edges_u, edges_v, masks):
    """For each mask return (crossing edge count, internal edge count)."""
    out = []
    for w in masks:
        val = 0
        inner = 0
        for u, v in zip(edges_u, edges_v):
            a = (w >> u) & 1
            b = (w >> v) & 1
            if a and b:
                inner += 1
            elif a or b:
                val += 1
        out.append((val, inner))
    return out


def _floordiv(a, b):
    return a // b


def _ceildiv(a, b):
    return -((-a) // b)


def propagate(lo, hi, offsets, cvars, ccoefs, cconst, clo, chi, var_offsets, var_cons, queue_all=True, changed=None):
    """Bounds propagation to a fixpoint over integer linear constraints.

    Constraint ``k`` reads ``clo[k] <= sum_i ccoefs[i] * x[cvars[i]] + cconst[k] <= chi[k]``
    for ``i`` in ``offsets[k]:offsets[k+1]``.  ``lo``/``hi`` are mutated in place,
    with ``INF`` / ``-INF`` meaning unbounded.  Returns False on a wipeout.
    """
    m = len(offsets) - 1
    inq = [False] * m
    queue = []
    if queue_all or changed is None:
        for k in range(m):
            queue.append(k)
            inq[k] = True
    else:
        for j in changed:
            for p in range(var_offsets[j], var_offsets[j + 1]):
                k = var_cons[p]
                if not inq[k]:
                    inq[k] = True
                    queue.append(k)
    head = 0
    while head < len(queue):
        k = queue[head]
        head += 1
        inq[k] = False
        s, t = offsets[k], offsets[k + 1]
        mn = 0
        mx = 0
        mn_inf = 0
        mx_inf = 0
        for i in range(s, t):
            a = ccoefs[i]
            x = cvars[i]
            if a > 0:
                if lo[x] <= -INF:
                    mn_inf += 1
                else:
                    mn += a * lo[x]
                if hi[x] >= INF:
                    mx_inf += 1
                else:
                    mx += a * hi[x]
            else:
                if hi[x] >= INF:
                    mn_inf += 1
                else:
                    mn += a * hi[x]
                if lo[x] <= -INF:
                    mx_inf += 1
                else:
                    mx += a * lo[x]
        lower = clo[k] - cconst[k]
        upper = chi[k] - cconst[k]
        if mn_inf == 0 and mn > upper:
            return False
        if mx_inf == 0 and mx < lower:
            return False
        for i in range(s, t):
            a = ccoefs[i]
            x = cvars[i]
            # contribution of x to mn / mx
            if a > 0:
                own_mn_inf = lo[x] <= -INF
                own_mx_inf = hi[x] >= INF
                own_mn = 0 if own_mn_inf else a * lo[x]
                own_mx = 0 if own_mx_inf else a * hi[x]
            else:
                own_mn_inf = hi[x] >= INF
                own_mx_inf = lo[x] <= -INF
                own_mn = 0 if own_mn_inf else a * hi[x]
                own_mx = 0 if own_mx_inf else a * lo[x]
            rest_mn_inf = mn_inf - (1 if own_mn_inf else 0)
            rest_mx_inf = mx_inf - (1 if own_mx_inf else 0)
            # a*x in [lower - rest_max, upper - rest_min]
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
                return False
            if new_lo != lo[x] or new_hi != hi[x]:
                # keep the running sums consistent with the tightened bounds
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
                        inq[k2] = True
                        queue.append(k2)
    return True
