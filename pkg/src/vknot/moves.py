"""Reidemeister moves on Gauss diagrams and homotopy moves on strings.

Knot moves: ``R1+``/``R1-`` (kink), ``R2+``/``R2-`` (bigon), ``R3`` and the
crossing change ``CC``.  String and link moves: ``i+``/``i-``, ``ii+``/``ii-``,
``iii`` and, for singular strings, ``s-ii`` (move the preferred marker).

A move is a :class:`MoveInstance`; :func:`enumerate_moves` lists every
applicable instance and :func:`apply_move` rewrites the diagram.  Insertion
sites are *gaps* ``(circle, index)``: a new token placed at gap ``i`` lands
just before the token now at position ``i`` (an empty circle has one gap).

R3 and (iii) use a table of local patterns read off arrangements of three
straight oriented lines, so every instance corresponds to an actual move.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass

import numpy as np

from .diagram import (
    DiagramError,
    FlatLink,
    SignedGaussDiagram,
    SingularVirtualString,
    VirtualString,
    _next_id,
    circles_of,
    from_circles,
    id_key,
)

KNOT_KINDS = ("R1+", "R1-", "R2+", "R2-", "R3", "CC")
STRING_KINDS = ("i+", "i-", "ii+", "ii-", "iii", "s-ii")
GROUPS = {
    "R1": ("R1+", "R1-"),
    "R2": ("R2+", "R2-"),
    "i": ("i+", "i-"),
    "ii": ("ii+", "ii-"),
    "reidemeister": ("R1+", "R1-", "R2+", "R2-", "R3"),
    "homotopy": ("i+", "i-", "ii+", "ii-", "iii"),
}


class MoveError(DiagramError):
    """The move instance does not apply to this diagram."""


@dataclass(frozen=True)
class MoveInstance:
    kind: str
    site: tuple

    def __str__(self):
        return f"{self.kind}{self.site}"


def expand_kinds(kinds, d=None):
    """Expand group names; ``None`` means every kind valid for ``d``."""
    if kinds is None:
        if isinstance(d, SignedGaussDiagram):
            return set(KNOT_KINDS)
        out = set(STRING_KINDS)
        if not isinstance(d, SingularVirtualString):
            out.discard("s-ii")
        return out
    out = set()
    for k in kinds:
        if k in GROUPS:
            out.update(GROUPS[k])
        elif k in KNOT_KINDS or k in STRING_KINDS:
            out.add(k)
        else:
            raise ValueError(f"unknown move kind {k!r}")
    return out


# --- R3 / (iii) pattern table ---------------------------------------------


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _canonical_pattern(lines):
    """``lines[i]`` = two tokens ``(other_line, *data)`` in travel order."""
    best = None
    for perm in itertools.permutations(range(3)):
        inv = [0, 0, 0]
        for i, p in enumerate(perm):
            inv[p] = i
        enc = tuple(
            tuple((perm[tok[0]],) + tuple(tok[1:]) for tok in lines[inv[new]])
            for new in range(3)
        )
        if best is None or enc < best:
            best = enc
    return best


@functools.lru_cache(maxsize=None)
def r3_patterns(samples=4000, seed=20240917):
    """Local patterns of three straight lines: ``(flat, signed)`` sets.

    Flat tokens are ``(other, is_head)``, signed tokens ``(other, is_head,
    sign)``.  Heights come from a total order on the lines, so every signed
    pattern is a genuine R3 configuration.
    """
    rng = np.random.default_rng(seed)
    flat, signed = set(), set()
    for _ in range(samples):
        ang = rng.uniform(0, 2 * np.pi, 3)
        v = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        p = rng.normal(size=(3, 2))
        height = rng.permutation(3)
        if min(abs(_cross(v[i], v[j])) for i, j in ((0, 1), (1, 2), (0, 2))) < 1e-6:
            continue
        flat_lines, signed_lines = [], []
        for i in range(3):
            toks = []
            for j in range(3):
                if j == i:
                    continue
                t = _cross(p[j] - p[i], v[j]) / _cross(v[i], v[j])
                flat_head = bool(_cross(v[i], v[j]) < 0)
                over, under = (i, j) if height[i] > height[j] else (j, i)
                sign = 1 if _cross(v[over], v[under]) > 0 else -1
                toks.append((float(t), j, flat_head, bool(i == under), sign))
            toks.sort()
            flat_lines.append(tuple((j, fh) for _, j, fh, _, _ in toks))
            signed_lines.append(tuple((j, gh, s) for _, j, _, gh, s in toks))
        flat.add(_canonical_pattern(flat_lines))
        signed.add(_canonical_pattern(signed_lines))
    return frozenset(flat), frozenset(signed)


# --- low-level helpers -------------------------------------------------------


def _state(d):
    """Circles as lists plus sign/singular/preferred metadata."""
    if isinstance(d, SignedGaussDiagram):
        return [list(d.word)], dict(d.signs), set(d.singular), None
    pref = d.preferred if isinstance(d, SingularVirtualString) else None
    return [list(w) for w in circles_of(d)], None, set(), pref


def _rebuild(d, circles, signs=None, singular=None, preferred=None):
    if isinstance(d, SignedGaussDiagram):
        (word,) = circles
        return SignedGaussDiagram(tuple(word), signs, frozenset(singular))
    return from_circles(d, [tuple(w) for w in circles], preferred)


def _gaps(circles):
    return [(c, g) for c, w in enumerate(circles) for g in range(max(len(w), 1))]


def _insert(circles, placements):
    """Insert token blocks at gaps; blocks at one gap keep their given order."""
    at = {}
    for gap, toks in placements:
        at.setdefault(gap, []).extend(toks)
    out = []
    for c, w in enumerate(circles):
        new = []
        for i in range(max(len(w), 1)):
            new.extend(at.get((c, i), ()))
            if i < len(w):
                new.append(w[i])
        out.append(new)
    return out


def _delete(circles, ids):
    ids = set(ids)
    return [[t for t in w if t[0] not in ids] for w in circles]


def _where(circles):
    """(arrow, is_head) -> (circle, position)."""
    return {tok: (c, i) for c, w in enumerate(circles) for i, tok in enumerate(w)}


def _adjacent(circles, p, q):
    if p[0] != q[0]:
        return False
    n = len(circles[p[0]])
    return (q[1] - p[1]) % n in (1, n - 1)


def _all_ids(circles):
    return [t[0] for w in circles for t in w]


def _movable(circles, singular, pref):
    """Arrows that inverse (i)/(ii) or R1/R2 may delete."""
    ids = sorted(set(_all_ids(circles)), key=id_key)
    return [a for a in ids if a not in singular and a != pref]


# --- counting and decoding insertions ---------------------------------------


def _count_insert(kind, circles):
    g = len(_gaps(circles))
    if kind == "R1+":
        return 4 * g
    if kind == "i+":
        return 2 * g
    if kind == "R2+":
        return 4 * (g * g + g)
    if kind == "ii+":
        return 4 * (g * (g + 1) // 2)
    raise AssertionError(kind)


def _decode_insert(kind, circles, idx):
    gaps = _gaps(circles)
    g = len(gaps)
    if kind == "R1+":
        gap, rest = divmod(idx, 4)
        return (gaps[gap], bool(rest // 2), 1 if rest % 2 == 0 else -1)
    if kind == "i+":
        gap, rest = divmod(idx, 2)
        return (gaps[gap], bool(rest))
    if kind == "R2+":
        pair, rest = divmod(idx, 4)
        swap, sign = bool(rest // 2), 1 if rest % 2 == 0 else -1
        if pair < g * g:
            gt, gh = divmod(pair, g)
            return (gaps[gt], gaps[gh], swap, sign, False)
        k = pair - g * g
        return (gaps[k], gaps[k], swap, sign, True)
    if kind == "ii+":
        pair, rest = divmod(idx, 4)
        # unordered pairs g1 <= g2 in row-major order
        g1 = 0
        while pair >= g - g1:
            pair -= g - g1
            g1 += 1
        g2 = g1 + pair
        return (gaps[g1], gaps[g2], bool(rest // 2), bool(rest % 2))
    raise AssertionError(kind)


# --- enumeration ----------------------------------------------------------------


def _r3_sites(circles, signs, singular, flat):
    """Triples of arcs forming a valid R3/(iii) pattern."""
    arcs = []
    for c, w in enumerate(circles):
        n = len(w)
        if n < 2:
            continue
        for i in range(n):
            j = (i + 1) % n
            if w[i][0] != w[j][0] and w[i][0] not in singular and w[j][0] not in singular:
                arcs.append(((c, i), (c, j)))
    by_pair = {}
    for arc in arcs:
        u, v = (circles[p[0]][p[1]][0] for p in arc)
        by_pair.setdefault(frozenset((u, v)), []).append(arc)
    by_chord = {}
    for arc in arcs:
        for p in arc:
            by_chord.setdefault(circles[p[0]][p[1]][0], []).append(arc)

    def tok(p):
        return circles[p[0]][p[1]]

    found = set()
    for a1 in arcs:
        u, v = tok(a1[0])[0], tok(a1[1])[0]
        used1 = {a1[0], a1[1]}
        for a2 in by_chord.get(v, ()):
            if used1 & set(a2):
                continue
            ws = [tok(p)[0] for p in a2 if tok(p)[0] != v]
            if len(ws) != 1 or ws[0] == u:
                continue
            w = ws[0]
            for a3 in by_pair.get(frozenset((w, u)), ()):
                if (used1 | set(a2)) & set(a3):
                    continue
                key = tuple(sorted((a1, a2, a3)))
                if key not in found and _r3_valid(circles, key, signs, flat):
                    found.add(key)
    return sorted(found)


def _r3_descriptor(circles, arcs, signs):
    owner = {}
    for k, arc in enumerate(arcs):
        for p in arc:
            owner[circles[p[0]][p[1]]] = k
    lines = []
    for k, arc in enumerate(arcs):
        toks = []
        for p in arc:
            aid, head = circles[p[0]][p[1]]
            other = owner.get((aid, not head))
            if other is None or other == k:
                return None
            toks.append((other, head) if signs is None else (other, head, signs[aid]))
        lines.append(tuple(toks))
    return _canonical_pattern(lines)


def _r3_valid(circles, arcs, signs, flat):
    desc = _r3_descriptor(circles, arcs, signs)
    if desc is None:
        return False
    table = r3_patterns()[0 if flat else 1]
    return desc in table


def _deletions(kind, d, circles, signs, singular, pref):
    where = _where(circles)
    ids = _movable(circles, singular, pref)
    out = []
    if kind in ("R1-", "i-"):
        for a in ids:
            if _adjacent(circles, where[(a, False)], where[(a, True)]):
                out.append(MoveInstance(kind, (a,)))
    elif kind == "R2-":
        for x, y in itertools.combinations(ids, 2):
            if signs[x] == signs[y]:
                continue
            if _adjacent(circles, where[(x, False)], where[(y, False)]) and _adjacent(
                circles, where[(x, True)], where[(y, True)]
            ):
                out.append(MoveInstance(kind, (x, y)))
    elif kind == "ii-":
        for x, y in itertools.combinations(ids, 2):
            if _adjacent(circles, where[(x, False)], where[(y, True)]) and _adjacent(
                circles, where[(x, True)], where[(y, False)]
            ):
                out.append(MoveInstance(kind, (x, y)))
    return out


def _explicit(kind, d, circles, signs, singular, pref):
    if kind in ("R1-", "i-", "R2-", "ii-"):
        return _deletions(kind, d, circles, signs, singular, pref)
    if kind in ("R3", "iii"):
        return [
            MoveInstance(kind, arcs)
            for arcs in _r3_sites(circles, signs, singular, flat=signs is None)
        ]
    if kind == "CC":
        return [MoveInstance("CC", (a,)) for a in sorted(signs, key=id_key)]
    if kind == "s-ii":
        where = _where(circles)
        out = []
        for g in sorted(set(_all_ids(circles)), key=id_key):
            if g == pref:
                continue
            if _adjacent(circles, where[(pref, False)], where[(g, True)]) and _adjacent(
                circles, where[(g, False)], where[(pref, True)]
            ):
                out.append(MoveInstance("s-ii", (g,)))
        return out
    raise AssertionError(kind)


def _valid_kinds(d, kinds):
    ks = expand_kinds(kinds, d)
    allowed = set(KNOT_KINDS) if isinstance(d, SignedGaussDiagram) else set(STRING_KINDS)
    if not isinstance(d, SingularVirtualString):
        allowed.discard("s-ii")
    order = KNOT_KINDS + STRING_KINDS
    return [k for k in order if k in ks and k in allowed]


def enumerate_moves(d, kinds=None):
    """Every applicable instance of the requested kinds."""
    circles, signs, singular, pref = _state(d)
    out = []
    for kind in _valid_kinds(d, kinds):
        if kind.endswith("+"):
            n = _count_insert(kind, circles)
            out.extend(MoveInstance(kind, _decode_insert(kind, circles, i)) for i in range(n))
        else:
            out.extend(_explicit(kind, d, circles, signs, singular, pref))
    return out


# --- application ----------------------------------------------------------------


def _check_gap(circles, gap):
    c, g = gap
    if not (0 <= c < len(circles)) or not (0 <= g < max(len(circles[c]), 1)):
        raise MoveError(f"no gap {gap!r}")


def apply_move(d, m):
    """Apply ``m`` to ``d``; raises :class:`MoveError` if it does not apply."""
    circles, signs, singular, pref = _state(d)
    kind, site = m.kind, m.site
    if kind not in _valid_kinds(d, [kind]):
        raise MoveError(f"move {kind} does not act on {type(d).__name__}")
    ids = _all_ids(circles)
    try:
        if kind in ("R1+", "i+"):
            gap, head_first = site[0], site[1]
            _check_gap(circles, gap)
            new = _next_id(ids)
            toks = [(new, False), (new, True)]
            if head_first:
                toks.reverse()
            circles = _insert(circles, [(gap, toks)])
            if kind == "R1+":
                if site[2] not in (1, -1):
                    raise MoveError("bad sign")
                signs[new] = site[2]
        elif kind == "R2+":
            gt, gh, swap, sign, heads_first = site
            _check_gap(circles, gt)
            _check_gap(circles, gh)
            if sign not in (1, -1) or (heads_first and gt != gh):
                raise MoveError("bad R2 site")
            x = _next_id(ids)
            y = x + 1
            tails = [(x, False), (y, False)]
            heads = [(y, True), (x, True)] if swap else [(x, True), (y, True)]
            blocks = [(gt, tails), (gh, heads)]
            if heads_first:
                blocks.reverse()
            circles = _insert(circles, blocks)
            signs[x], signs[y] = sign, -sign
        elif kind == "ii+":
            g1, g2, swap1, swap2 = site
            _check_gap(circles, g1)
            _check_gap(circles, g2)
            x = _next_id(ids)
            y = x + 1
            arc1 = [(x, False), (y, True)]
            arc2 = [(x, True), (y, False)]
            if swap1:
                arc1.reverse()
            if swap2:
                arc2.reverse()
            circles = _insert(circles, [(g1, arc1), (g2, arc2)])
        elif kind in ("R1-", "i-", "R2-", "ii-", "CC", "s-ii"):
            if m not in _explicit(kind, d, circles, signs, singular, pref):
                raise MoveError(f"stale move {m}")
            if kind == "CC":
                (c,) = site
                circles = [[(a, (not h) if a == c else h) for a, h in w] for w in circles]
                signs[c] = -signs[c]
            elif kind == "s-ii":
                pref = site[0]
            else:
                circles = _delete(circles, site)
                for a in site:
                    if signs is not None:
                        signs.pop(a)
        elif kind in ("R3", "iii"):
            arcs = site
            if len(arcs) != 3 or not _r3_valid_site(circles, arcs, signs, singular):
                raise MoveError(f"stale move {m}")
            for (c1, i1), (c2, i2) in arcs:
                circles[c1][i1], circles[c2][i2] = circles[c2][i2], circles[c1][i1]
        else:
            raise MoveError(f"unknown move kind {kind!r}")
    except (TypeError, ValueError, IndexError, KeyError) as exc:
        if isinstance(exc, MoveError):
            raise
        raise MoveError(f"malformed move {m}: {exc}") from None
    return _rebuild(d, circles, signs, singular, pref)


def _r3_valid_site(circles, arcs, signs, singular):
    seen = set()
    for arc in arcs:
        (c1, i1), (c2, i2) = arc
        if c1 != c2 or not (0 <= c1 < len(circles)):
            return False
        n = len(circles[c1])
        if n < 2 or (i2 - i1) % n != 1 or not (0 <= i1 < n and 0 <= i2 < n):
            return False
        for p in arc:
            if p in seen or circles[p[0]][p[1]][0] in singular:
                return False
            seen.add(p)
    return _r3_valid(circles, tuple(arcs), signs, flat=signs is None)


# --- random walks -----------------------------------------------------------------


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_move(d, rng, kinds=None):
    """A uniformly chosen applicable instance, or ``None`` if there is none."""
    circles, signs, singular, pref = _state(d)
    pools = []
    for kind in _valid_kinds(d, kinds):
        if kind.endswith("+"):
            pools.append((kind, _count_insert(kind, circles), None))
        else:
            lst = _explicit(kind, d, circles, signs, singular, pref)
            pools.append((kind, len(lst), lst))
    total = sum(n for _, n, _ in pools)
    if total == 0:
        return None
    r = rng.randrange(total)
    for kind, n, lst in pools:
        if r < n:
            if lst is None:
                return MoveInstance(kind, _decode_insert(kind, circles, r))
            return lst[r]
        r -= n
    raise AssertionError("unreachable")


def iter_walk(d, steps, seed, kinds=None):
    """Yield ``(move, diagram)`` after each step; ``move`` is None when stuck."""
    rng = _rng(seed)
    for _ in range(steps):
        m = random_move(d, rng, kinds)
        if m is not None:
            d = apply_move(d, m)
        yield m, d


def random_walk(d, steps, seed, kinds=None):
    """Deterministic walk of ``steps`` uniformly chosen moves."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    for _, d in iter_walk(d, steps, seed, kinds):
        pass
    return d


# --- normalization --------------------------------------------------------------


def normalize(d):
    """Greedily delete isolated arrows and cancelling (ii) pairs.

    The removable arrow or pair with the lowest endpoint position goes
    first.  The preferred arrow of a singular string is never removed.
    """
    if isinstance(d, SignedGaussDiagram):
        raise TypeError("normalize acts on strings and flat links")
    while True:
        circles, signs, singular, pref = _state(d)
        where = _where(circles)
        cands = _explicit("i-", d, circles, signs, singular, pref)
        cands += _explicit("ii-", d, circles, signs, singular, pref)
        if not cands:
            return _rebuild(d, circles, signs, singular, pref)

        def first(m):
            return min(where[(a, h)] for a in m.site for h in (False, True))

        d = apply_move(d, min(cands, key=first))
