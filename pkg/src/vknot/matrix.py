"""Based matrices of virtual strings and singular based matrices (SBMs).

A based matrix is a skew-symmetric integer matrix over a labeled set whose
first element is the distinguished ``s``.  An SBM additionally
distinguishes its last element ``d``, the preferred arrow of a singular
string.  Homology classes are compared through primitive reductions and a
canonical form under label permutations fixing ``s`` (and ``d``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .diagram import SingularVirtualString, id_key, read_lines

S_LABEL = "s"


class MatrixError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BasedMatrix:
    """Labels ``G`` (``labels[0]`` is ``s``) and the skew-symmetric map ``b``."""

    labels: tuple
    b: np.ndarray

    def __post_init__(self):
        b = np.array(self.b, dtype=np.int64, copy=True)
        labels = tuple(self.labels)
        if b.ndim != 2 or b.shape[0] != b.shape[1] or b.shape[0] != len(labels):
            raise MatrixError("matrix must be square and match the label count")
        if len(set(labels)) != len(labels):
            raise MatrixError("labels must be distinct")
        if not np.array_equal(b, -b.T):
            raise MatrixError("matrix is not skew-symmetric")
        if self.min_size > len(labels):
            raise MatrixError(f"need at least {self.min_size} elements")
        b.setflags(write=False)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "labels", labels)

    min_size = 1

    @property
    def size(self):
        return len(self.labels)

    def index(self, g):
        try:
            return self.labels.index(g)
        except ValueError:
            raise MatrixError(f"unknown element {g!r}") from None

    def entry(self, g, h):
        return int(self.b[self.index(g), self.index(h)])

    def row(self, g):
        return self.b[self.index(g)]

    @property
    def fixed(self):
        """Indices of the distinguished elements."""
        return (0,)

    @property
    def free(self):
        return [i for i in range(self.size) if i not in self.fixed]

    def _make(self, labels, b):
        return type(self)(tuple(labels), b)

    def take(self, idx):
        """Sub-matrix on the given indices (in that order)."""
        idx = list(idx)
        return self._make([self.labels[i] for i in idx], self.b[np.ix_(idx, idx)])

    def to_text(self):
        return "\n".join(" ".join(str(int(x)) for x in row) for row in self.b)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.b, other.b)

    def __hash__(self):
        return hash((self.labels, self.b.tobytes()))

    def __str__(self):
        return self.to_text()


class SBM(BasedMatrix):
    """Singular based matrix; ``labels[-1]`` is the distinguished ``d``."""

    min_size = 2

    @property
    def d(self):
        return self.labels[-1]

    @property
    def fixed(self):
        return (0, self.size - 1)


def parse_matrix(text, singular=False):
    """Read rows of integers; first row ``s``, last row ``d`` for an SBM."""
    try:
        rows = [[int(x) for x in line.split()] for _, line in read_lines(text)]
    except ValueError as exc:
        raise MatrixError(f"bad matrix entry: {exc}") from None
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise MatrixError("matrix text is not square")
    if singular:
        labels = (S_LABEL,) + tuple(range(1, n - 1)) + ("d",)
        return SBM(labels, np.array(rows, dtype=np.int64).reshape(n, n))
    labels = (S_LABEL,) + tuple(range(1, n))
    return BasedMatrix(labels, np.array(rows, dtype=np.int64).reshape(n, n))


# --- construction from strings ----------------------------------------------


def _matrix_for(word, order):
    pos = {}
    for p, (aid, head) in enumerate(word):
        pos[(aid, head)] = p
    tails = [pos[(a, False)] for a in order]
    heads = [pos[(a, True)] for a in order]
    return kernels.string_matrix(tails, heads, len(word))


def from_string(s):
    """Based matrix of a virtual string; arrows ordered by id."""
    if isinstance(s, SingularVirtualString):
        s = s.base
    order = list(s.arrows)
    return BasedMatrix((S_LABEL, *order), _matrix_for(s.word, order))


def from_singular_string(ss):
    order = [a for a in ss.arrows if a != ss.preferred] + [ss.preferred]
    return SBM((S_LABEL, *order), _matrix_for(ss.word, order))


def arc_product(s, e, f):
    """``ab . cd`` for arrows ``e=(a,b)``, ``f=(c,d)``: signed count of arrows
    running between the open arcs ``(ab)`` and ``(cd)``."""
    pos = s.positions()
    n = len(s.word)

    def inside(p, a, b):
        return 0 < (p - a) % n < (b - a) % n

    (a, b), (c, d) = pos[e], pos[f]
    total = 0
    for g, (t, h) in pos.items():
        total += inside(t, a, b) and inside(h, c, d)
        total -= inside(t, c, d) and inside(h, a, b)
    return int(total)


def linking_sign(s, e, f):
    """+1 when the endpoints read ``a, c, b, d`` around the circle, -1 for
    ``a, d, b, c``, 0 when the arrows are unlinked."""
    pos = s.positions()
    n = len(s.word)
    (a, b), (c, d) = pos[e], pos[f]
    c_in = 0 < (c - a) % n < (b - a) % n
    d_in = 0 < (d - a) % n < (b - a) % n
    return int(c_in) - int(d_in)


# --- special elements ---------------------------------------------------------


def _is_zero(row):
    return not row.any()


def classify_element(m, g):
    i = m.index(g)
    row = m.b[i]
    if i in m.fixed:
        if isinstance(m, SBM):
            if _is_zero(row):
                return "annihilating-like"
            if i == m.size - 1 and np.array_equal(row, m.b[0]):
                return "core-like"
        return "none"
    if _is_zero(row):
        return "annihilating"
    if np.array_equal(row, m.b[0]):
        return "core"
    return "none"


def _pair_lookup(b, candidates):
    """Lowest-index pair of candidate rows summing to the s-row, or None."""
    srow = b[0]
    seen = {}
    found = None
    for j in candidates:
        want = (srow - b[j]).tobytes()
        if want in seen:
            i = seen[want][0]
            if found is None or (i, j) < found:
                found = (i, j)
        seen.setdefault(b[j].tobytes(), []).append(j)
    return found


def complementary_pairs(m):
    """All unordered complementary pairs among the non-distinguished elements."""
    b = m.b
    srow = b[0]
    free = m.free
    out = []
    for x, i in enumerate(free):
        for j in free[x + 1:]:
            if np.array_equal(b[i] + b[j], srow):
                out.append((m.labels[i], m.labels[j]))
    return out


def d_partners(m):
    """Elements complementary to ``d`` (the admissible singularity switches)."""
    b = m.b
    di = m.size - 1
    target = b[0] - b[di]
    return [m.labels[i] for i in m.free if np.array_equal(b[i], target)]


def is_skew(m):
    return np.array_equal(m.b, -m.b.T)


# --- elementary extensions ----------------------------------------------------


def _fresh_label(m):
    return max([x for x in m.labels if isinstance(x, int)], default=0) + 1


def _insert_before_d(m, rows, labels):
    """Append new elements (before ``d`` for an SBM) with the given full rows.

    ``rows`` are indexed by the final ordering.
    """
    n = m.size
    k = len(labels)
    if isinstance(m, SBM):
        order = list(range(n - 1)) + list(range(n, n + k)) + [n - 1]
    else:
        order = list(range(n + k))
    big = np.zeros((n + k, n + k), dtype=np.int64)
    big[:n, :n] = m.b
    for x, r in enumerate(rows):
        big[n + x, :] = r
        big[:, n + x] = -np.asarray(r)
    all_labels = list(m.labels) + list(labels)
    return m._make([all_labels[i] for i in order], big[np.ix_(order, order)])


def extend(m, kind, rows=None, labels=None):
    """Elementary extension M1, M2 or M3.

    ``rows`` give the new elements' values on the old elements (in ``m``'s
    label order).  M1 and M2 rows are implied and optional; M3 needs the
    pair ``(r1, r2)`` with ``r1 + r2`` equal to the s-row.
    """
    n = m.size
    srow = m.b[0]
    if kind == "M1":
        r = np.zeros(n, dtype=np.int64) if rows is None else np.asarray(rows, dtype=np.int64)
        if r.shape != (n,) or r.any():
            raise MatrixError("M1 row must be zero")
        new = labels or [_fresh_label(m)]
        return _insert_before_d(m, [np.append(r, 0)], new)
    if kind == "M2":
        r = srow.copy() if rows is None else np.asarray(rows, dtype=np.int64)
        if r.shape != (n,) or not np.array_equal(r, srow):
            raise MatrixError("M2 row must copy the s-row")
        new = labels or [_fresh_label(m)]
        return _insert_before_d(m, [np.append(r, 0)], new)
    if kind == "M3":
        if rows is None:
            raise MatrixError("M3 needs two rows")
        r1, r2 = (np.asarray(r, dtype=np.int64) for r in rows)
        if r1.shape != (n,) or r2.shape != (n,) or not np.array_equal(r1 + r2, srow):
            raise MatrixError("M3 rows must sum to the s-row")
        # b(g1, g2) = b(s, g2) = -b(g2, s) = r1[s]
        x = int(r1[0])
        if labels is None:
            f = _fresh_label(m)
            labels = [f, f + 1]
        return _insert_before_d(m, [np.append(r1, [0, x]), np.append(r2, [-x, 0])], labels)
    raise MatrixError(f"unknown extension {kind!r}")


def _drop(m, idx):
    keep = [i for i in range(m.size) if i not in set(idx)]
    return m.take(keep)


def _find_elimination(m):
    """Next inverse extension on non-distinguished elements, lowest index first."""
    b = m.b
    free = m.free
    for i in free:
        if not b[i].any():
            return ("M1", (i,))
    for i in free:
        if np.array_equal(b[i], b[0]):
            return ("M2", (i,))
    pair = _pair_lookup(b, free)
    if pair is not None:
        return ("M3", pair)
    return None


def reduce_primitive(m):
    """Delete annihilating, core and complementary elements until none remain."""
    while True:
        step = _find_elimination(m)
        if step is None:
            return m
        m = _drop(m, step[1])


def is_primitive(m):
    if isinstance(m, SBM):
        if _find_elimination(m) is not None:
            return False
        return all(_find_elimination(switch_N(m, g)) is None for g in d_partners(m))
    return _find_elimination(m) is None


# --- singularity switch and D moves -----------------------------------------


def switch_N(m, g):
    """Exchange the roles of ``d`` and a complementary element ``g``."""
    gi = m.index(g)
    di = m.size - 1
    if gi in m.fixed:
        raise MatrixError("N needs a non-distinguished element")
    if not np.array_equal(m.b[gi] + m.b[di], m.b[0]):
        raise MatrixError(f"{g!r} is not complementary to d")
    order = list(range(m.size))
    order[gi], order[di] = di, gi
    return m.take(order)


def move_D(m, direction):
    """D12 (annihilating-like d -> core-like) or D21 (core-like -> annihilating-like)."""
    d = m.d
    kind = classify_element(m, d)
    direction = str(direction)
    if direction == "12":
        if kind != "annihilating-like":
            raise MatrixError("D12 needs an annihilating-like d")
        grown = extend(m, "M2")
        helper = "M1"
    elif direction == "21":
        if kind != "core-like" and not (
            kind == "annihilating-like" and not m.b[0].any()
        ):
            raise MatrixError("D21 needs a core-like d")
        grown = extend(m, "M1")
        helper = "M2"
    else:
        raise MatrixError(f"unknown D move {direction!r}")
    new = grown.labels[-2]
    switched = switch_N(grown, new)
    old = switched.index(d)
    row = switched.b[old]
    assert not row.any() if helper == "M1" else np.array_equal(row, switched.b[0])
    out = _drop(switched, [old])
    # keep the original name for the distinguished element
    return SBM(out.labels[:-1] + (d,), out.b)


def reduce_primitive_sbm(m):
    """Greedy reduction; when stuck, try every singularity switch of ``d``."""
    while True:
        step = _find_elimination(m)
        if step is not None:
            m = _drop(m, step[1])
            continue
        for g in d_partners(m):
            cand = switch_N(m, g)
            if _find_elimination(cand) is not None:
                m = cand
                break
        else:
            return m


def sbm_partners(p):
    """Primitives one D12/D21/N move away from the primitive ``p``."""
    out = []
    kind = classify_element(p, p.d)
    if kind == "annihilating-like":
        out.append(move_D(p, "12"))
    elif kind == "core-like":
        out.append(move_D(p, "21"))
    out.extend(switch_N(p, g) for g in d_partners(p))
    return out


# --- isomorphism and canonical form -----------------------------------------


def _encoding_order(m):
    fixed = list(m.fixed)
    return fixed + m.free


def canonical(m):
    """Canonical representative: same class, labels replaced by positions."""
    order = _encoding_order(m)
    b = m.b[np.ix_(order, order)]
    perm = kernels.canonical_perm(b, len(m.fixed))
    idx = [order[i] for i in perm]
    if isinstance(m, SBM):
        idx = [idx[0]] + idx[2:] + [idx[1]]
        labels = (S_LABEL,) + tuple(range(1, m.size - 1)) + ("d",)
    else:
        labels = (S_LABEL,) + tuple(range(1, m.size))
    return type(m)(labels, m.b[np.ix_(idx, idx)])


def canonical_bytes(m):
    c = canonical(m)
    tag = "SBM" if isinstance(m, SBM) else "BM"
    return f"{tag}{c.size}:{','.join(str(int(x)) for x in c.b.ravel())}".encode()


def _signature(m, i):
    row = m.b[i]
    return tuple(int(row[j]) for j in m.fixed) + tuple(sorted(int(x) for x in row))


def is_isomorphic(a, b):
    """Backtracking search for a label bijection fixing the distinguished elements."""
    if type(a) is not type(b) or a.size != b.size:
        return False
    A, B = a.b, b.b
    fa, fb = list(a.fixed), list(b.fixed)
    if not np.array_equal(A[np.ix_(fa, fa)], B[np.ix_(fb, fb)]):
        return False
    sig_b = {}
    for j in b.free:
        sig_b.setdefault(_signature(b, j), []).append(j)
    free_a = a.free
    cands = {}
    for i in free_a:
        options = sig_b.get(_signature(a, i), [])
        if not options:
            return False
        cands[i] = options
    order = sorted(free_a, key=lambda i: len(cands[i]))
    mapping = dict(zip(fa, fb))
    taken = set()

    def consistent(i, j):
        for x, y in mapping.items():
            if A[i, x] != B[j, y]:
                return False
        return True

    def rec(k):
        if k == len(order):
            return True
        i = order[k]
        for j in cands[i]:
            if j in taken or not consistent(i, j):
                continue
            mapping[i] = j
            taken.add(j)
            if rec(k + 1):
                return True
            del mapping[i]
            taken.discard(j)
        return False

    return rec(0)


def homologous(a, b):
    return is_isomorphic(reduce_primitive(a), reduce_primitive(b))


def homologous_sbm(a, b):
    p, q = reduce_primitive_sbm(a), reduce_primitive_sbm(b)
    if is_isomorphic(p, q):
        return True
    return any(is_isomorphic(x, q) for x in sbm_partners(p))


# --- fingerprints -------------------------------------------------------------


def _flat_pt_mod2(m):
    """p_t mod 2 of any knot with this shadow, read off the s-column."""
    counts = {}
    for e in range(1, m.size):
        k = abs(int(m.b[e, 0]))
        if k:
            counts[k] = counts.get(k, 0) ^ 1
    return tuple(sorted(k for k, v in counts.items() if v))


def fingerprint_flat(s):
    """Homotopy-invariant bytes of a virtual string."""
    m = from_string(s)
    p = reduce_primitive(m)
    odd = ",".join(str(k) for k in _flat_pt_mod2(m))
    return b"flat|" + canonical_bytes(p) + b"|pt2:" + odd.encode()


def sbm_class_forms(m):
    """Sorted canonical bytes of the (one or two) primitives of ``m``'s class."""
    p = reduce_primitive_sbm(m)
    forms = {canonical_bytes(p)}
    forms.update(canonical_bytes(x) for x in sbm_partners(p))
    return sorted(forms)


def fingerprint_singular(ss):
    """Homotopy-invariant bytes of a singular virtual string."""
    return b"sing|" + b"&".join(sbm_class_forms(from_singular_string(ss)))


def arrow_order(s):
    return sorted(s.arrows, key=id_key)
