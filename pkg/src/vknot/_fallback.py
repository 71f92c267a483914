"""Pure-Python implementations of the hot kernels.

Same contracts as the compiled ``_speedups`` module; used when the
extension is not built or ``VKNOT_PURE_PYTHON`` is set.
"""

import numpy as np


def string_matrix(tails, heads, length):
    """Based matrix of a one-circle string, row/column 0 being ``s``.

    ``tails[e]`` and ``heads[e]`` are the word positions of arrow ``e``.
    """
    tails = np.asarray(tails, dtype=np.int64)
    heads = np.asarray(heads, dtype=np.int64)
    n = len(tails)
    b = np.zeros((n + 1, n + 1), dtype=np.int64)
    if n == 0:
        return b
    pos = np.arange(length)
    off = (pos[None, :] - tails[:, None]) % length
    span = (heads - tails) % length
    inside = (off > 0) & (off < span[:, None])
    # t[e, g]: tail of g strictly inside the arc tail(e) -> head(e); h likewise for heads
    t = inside[:, tails].astype(np.int64)
    h = inside[:, heads].astype(np.int64)
    b[1:, 1:] = t @ h.T - h @ t.T + (t - h)
    col = (t - h).sum(axis=1)
    b[1:, 0] = col
    b[0, 1:] = -col
    return b


def canonical_perm(b, nfixed):
    """Permutation giving the lexicographically least lower-triangle encoding.

    Indices ``0..nfixed-1`` stay in place.  The encoding lists, for each
    position ``i``, the entries ``b[p_i, p_j]`` for ``j < i``.
    """
    M = np.asarray(b).tolist()
    m = len(M)
    perm = list(range(nfixed)) + [0] * (m - nfixed)
    if m == nfixed:
        return np.array(perm, dtype=np.int64)
    used = [False] * m
    twin = {}
    cls = [0] * m
    for v in range(nfixed, m):
        cls[v] = twin.setdefault(tuple(M[v]), v)
    best = [None] * m
    state = {"len": nfixed, "perm": None}

    def rec(i):
        if i == m:
            state["perm"] = list(perm)
            return
        blocks = {}
        for v in range(nfixed, m):
            if used[v] or cls[v] in blocks:
                continue
            row = M[v]
            blocks[cls[v]] = (tuple(row[perm[j]] for j in range(i)), v)
        low = min(blk for blk, _ in blocks.values())
        if i < state["len"]:
            if low > best[i]:
                return
            if low < best[i]:
                best[i] = low
                state["len"] = i + 1
        else:
            best[i] = low
            state["len"] = i + 1
        for blk, v in sorted(blocks.values(), key=lambda bv: bv[1]):
            if blk != low:
                continue
            perm[i] = v
            used[v] = True
            rec(i + 1)
            used[v] = False

    rec(nfixed)
    return np.array(state["perm"], dtype=np.int64)
