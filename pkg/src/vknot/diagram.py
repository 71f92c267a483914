"""Gauss diagrams, virtual strings and flat links.

Every diagram is built from cyclic *words*: tuples of endpoint tokens
``(arrow_id, is_head)`` read once around a circle from a basepoint.  A chord
of a Gauss diagram points from the over-strand pass (tail) to the
under-strand pass (head).  Arrow ids are small ints, or short alphanumeric
names when a transcription uses letters (``d`` for a double-point).

All values are immutable.  ``==`` is structural equality up to rotation of
the words and renaming of the arrow ids.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

TAIL = False
HEAD = True

ArrowId = Hashable
Token = tuple  # (arrow_id, is_head)


class DiagramError(ValueError):
    """Invalid diagram or invalid operation on a diagram."""


class ParseError(DiagramError):
    def __init__(self, message, token=None, line=None):
        self.token = token
        self.line = line
        where = f"line {line}: " if line is not None else ""
        what = f" (token {token!r})" if token is not None else ""
        super().__init__(f"{where}{message}{what}")


def id_key(aid):
    """Sort key putting integer ids first, then named ids."""
    return (0, aid, "") if isinstance(aid, int) else (1, 0, str(aid))


def _next_id(ids):
    ints = [i for i in ids if isinstance(i, int)]
    return max(ints, default=0) + 1


def _check_word(word, what="word"):
    seen = {}
    for aid, head in word:
        if (aid, head) in seen:
            role = "head" if head else "tail"
            raise DiagramError(f"duplicate {role} for arrow {aid!r} in {what}")
        seen[(aid, head)] = True
    for aid, head in word:
        if (aid, not head) not in seen:
            raise DiagramError(f"arrow {aid!r} has no partner endpoint in {what}")


def _positions(circles):
    """Map arrow id -> ((circle, pos) of tail, (circle, pos) of head)."""
    tails, heads = {}, {}
    for c, word in enumerate(circles):
        for p, (aid, head) in enumerate(word):
            (heads if head else tails)[aid] = (c, p)
    return {aid: (tails[aid], heads[aid]) for aid in tails}


def _circles_key(circles, decorate, ordered=True):
    """Canonical encoding of a tuple of cyclic words up to rotation/renaming."""

    def encode(seq, names):
        out = []
        for aid, head in seq:
            if aid not in names:
                names[aid] = len(names)
            out.append((names[aid], head, decorate(aid)))
        return tuple(out)

    def best(index, order, names):
        if index == len(order):
            return ()
        word = circles[order[index]]
        n = len(word)
        cands = []
        for r in range(max(n, 1)):
            nm = dict(names)
            cands.append((encode(word[r:] + word[:r], nm), nm))
        low = min(c[0] for c in cands)
        tails = []
        seen = set()
        for enc, nm in cands:
            if enc != low:
                continue
            sig = tuple(sorted(nm.items(), key=lambda kv: (kv[1],)))
            if sig in seen:
                continue
            seen.add(sig)
            tails.append(best(index + 1, order, nm))
        return (low,) + min(tails)

    orders = [tuple(range(len(circles)))]
    if not ordered:
        orders = list(itertools.permutations(range(len(circles))))
    return min(best(0, o, {}) for o in orders)


@dataclass(frozen=True, eq=False)
class VirtualString:
    """Flat virtual knot: one core circle with unsigned arrows."""

    word: tuple

    def __post_init__(self):
        word = tuple((aid, bool(h)) for aid, h in self.word)
        _check_word(word, "string")
        object.__setattr__(self, "word", word)

    @property
    def arrows(self):
        return tuple(sorted({aid for aid, _ in self.word}, key=id_key))

    @property
    def rank(self):
        return len(self.word) // 2

    def positions(self):
        """Arrow id -> (tail position, head position)."""
        return {aid: (t[1], h[1]) for aid, (t, h) in _positions((self.word,)).items()}

    def key(self):
        return _circles_key((self.word,), lambda aid: 0)

    def relabel(self):
        """Rename arrows 1..m in order of first appearance."""
        names = {}
        for aid, _ in self.word:
            names.setdefault(aid, len(names) + 1)
        return VirtualString(tuple((names[a], h) for a, h in self.word))

    def __eq__(self, other):
        if type(other) is not VirtualString:
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(("S", self.key()))

    def __str__(self):
        return serialize_string(self)

    def __repr__(self):
        return f"VirtualString({serialize_string(self)!r})"


@dataclass(frozen=True, eq=False)
class SingularVirtualString:
    """Virtual string with one preferred arrow (the double-point)."""

    base: VirtualString
    preferred: ArrowId

    def __post_init__(self):
        if self.preferred not in {aid for aid, _ in self.base.word}:
            raise DiagramError(f"preferred arrow {self.preferred!r} is not an arrow of the string")

    @property
    def word(self):
        return self.base.word

    @property
    def arrows(self):
        return self.base.arrows

    @property
    def rank(self):
        return self.base.rank

    def positions(self):
        return self.base.positions()

    def key(self):
        return _circles_key((self.base.word,), lambda aid: aid == self.preferred)

    def __eq__(self, other):
        if type(other) is not SingularVirtualString:
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(("SS", self.key()))

    def __str__(self):
        return serialize_string(self)

    def __repr__(self):
        return f"SingularVirtualString({serialize_string(self)!r})"


@dataclass(frozen=True, eq=False)
class FlatLink:
    """Several core circles sharing a set of directed unsigned arrows.

    With ``ordered=True`` the circles are components 1..k in the given order.
    """

    circles: tuple
    ordered: bool = True

    def __post_init__(self):
        circles = tuple(tuple((aid, bool(h)) for aid, h in w) for w in self.circles)
        _check_word([t for w in circles for t in w], "link")
        object.__setattr__(self, "circles", circles)

    @property
    def arrows(self):
        return tuple(sorted({aid for w in self.circles for aid, _ in w}, key=id_key))

    def positions(self):
        return _positions(self.circles)

    def key(self):
        return _circles_key(self.circles, lambda aid: 0, self.ordered)

    def reordered(self, order):
        return FlatLink(tuple(self.circles[i] for i in order), self.ordered)

    def __eq__(self, other):
        if type(other) is not FlatLink:
            return NotImplemented
        return self.ordered == other.ordered and self.key() == other.key()

    def __hash__(self):
        return hash(("L", self.ordered, self.key()))

    def __str__(self):
        return serialize_link(self)

    def __repr__(self):
        return f"FlatLink({serialize_link(self)!r}, ordered={self.ordered})"


@dataclass(frozen=True, eq=False)
class SignedGaussDiagram:
    """Virtual knot diagram: signed directed chords, some possibly singular.

    Singular chords keep a direction, namely the arrow of their positive
    resolution; they carry no sign.
    """

    word: tuple
    signs: Mapping
    singular: frozenset = frozenset()

    def __post_init__(self):
        word = tuple((aid, bool(h)) for aid, h in self.word)
        _check_word(word, "diagram")
        signs = {aid: int(s) for aid, s in dict(self.signs).items()}
        singular = frozenset(self.singular)
        ids = {aid for aid, _ in word}
        if singular & signs.keys():
            raise DiagramError("singular chords carry no sign")
        if set(signs) | singular != ids:
            missing = ids - set(signs) - singular
            raise DiagramError(f"chords without sign: {sorted(missing, key=id_key)}")
        if any(s not in (1, -1) for s in signs.values()):
            raise DiagramError("signs must be +1 or -1")
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "singular", singular)

    @property
    def chords(self):
        return tuple(sorted({aid for aid, _ in self.word}, key=id_key))

    @property
    def n(self):
        return len(self.word) // 2

    def positions(self):
        return {aid: (t[1], h[1]) for aid, (t, h) in _positions((self.word,)).items()}

    def _decorate(self, aid):
        return self.signs.get(aid, 0)

    def key(self):
        return _circles_key((self.word,), self._decorate)

    def relabel(self):
        names = {}
        for aid, _ in self.word:
            names.setdefault(aid, len(names) + 1)
        return SignedGaussDiagram(
            tuple((names[a], h) for a, h in self.word),
            {names[a]: s for a, s in self.signs.items()},
            frozenset(names[a] for a in self.singular),
        )

    def __eq__(self, other):
        if type(other) is not SignedGaussDiagram:
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(("K", self.key()))

    def __str__(self):
        return serialize_knot(self)

    def __repr__(self):
        return f"SignedGaussDiagram({serialize_knot(self)!r})"


# --- parsing and serialization ---------------------------------------------

_SPLIT = re.compile(r"[\s,]+")
_KNOT_TOKEN = re.compile(r"^([OU])(\w+?)([+-])$")
_SING_TOKEN = re.compile(r"^D(\w+?)([th])$")
_SING_SIGNED = re.compile(r"^D(\w+?)([+-])$")
_STRING_TOKEN = re.compile(r"^(\*?)(\w+?)([th])$")


def _strip_comment(text):
    return text.split("#", 1)[0]


def _tokens(text):
    toks = [t for t in _SPLIT.split(_strip_comment(text).strip()) if t]
    # a lone "." spells the empty word, so blank diagrams fit on a line
    return [] if toks == ["."] else toks


def _aid(raw):
    return int(raw) if raw.isdigit() else raw


def parse_knot(text, line=None):
    """Parse a Gauss code such as ``"O1+ U2+ O3+ U1+ O2+ U3+"``."""
    word, signs, singular = [], {}, set()
    seen = set()
    for tok in _tokens(text):
        m = _KNOT_TOKEN.match(tok)
        if m:
            role, raw, sign = m.groups()
            aid, head = _aid(raw), role == "U"
            s = 1 if sign == "+" else -1
            if aid in singular:
                raise ParseError("chord used both as singular and as a crossing", tok, line)
            if signs.get(aid, s) != s:
                raise ParseError("sign differs between the two passes of a chord", tok, line)
            signs[aid] = s
        else:
            m = _SING_TOKEN.match(tok)
            if not m:
                if _SING_SIGNED.match(tok):
                    raise ParseError("sign on a singular D-token", tok, line)
                raise ParseError("malformed token", tok, line)
            raw, role = m.groups()
            aid, head = _aid(raw), role == "h"
            if aid in signs:
                raise ParseError("chord used both as singular and as a crossing", tok, line)
            singular.add(aid)
        if (aid, head) in seen:
            raise ParseError(f"duplicate {'head' if head else 'tail'} for chord {aid!r}", tok, line)
        seen.add((aid, head))
        word.append((aid, head))
    for aid, head in word:
        if (aid, not head) not in seen:
            raise ParseError(f"missing partner endpoint for chord {aid!r}", None, line)
    return SignedGaussDiagram(tuple(word), signs, frozenset(singular))


def serialize_knot(k):
    out = []
    for aid, head in k.word:
        if aid in k.singular:
            out.append(f"D{aid}{'h' if head else 't'}")
        else:
            out.append(f"{'U' if head else 'O'}{aid}{'+' if k.signs[aid] > 0 else '-'}")
    return " ".join(out)


def _parse_string_word(tokens, line):
    word, marked, seen = [], set(), set()
    for tok in tokens:
        m = _STRING_TOKEN.match(tok)
        if not m:
            raise ParseError("malformed token", tok, line)
        star, raw, role = m.groups()
        aid, head = _aid(raw), role == "h"
        if (aid, head) in seen:
            raise ParseError(f"duplicate {'head' if head else 'tail'} for arrow {aid!r}", tok, line)
        seen.add((aid, head))
        if star:
            marked.add(aid)
        word.append((aid, head))
    return word, marked, seen


def parse_string(text, line=None):
    """Parse ``"1t 2h 1h 2t"``; a ``*`` prefix marks the preferred arrow."""
    word, marked, seen = _parse_string_word(_tokens(text), line)
    for aid, head in word:
        if (aid, not head) not in seen:
            raise ParseError(f"missing partner endpoint for arrow {aid!r}", None, line)
    if len(marked) > 1:
        raise ParseError("preferred marker on more than one arrow", None, line)
    base = VirtualString(tuple(word))
    if marked:
        return SingularVirtualString(base, next(iter(marked)))
    return base


def serialize_string(s):
    pref = s.preferred if isinstance(s, SingularVirtualString) else None
    return " ".join(
        f"{'*' if aid == pref else ''}{aid}{'h' if head else 't'}" for aid, head in s.word
    )


def parse_link(text, line=None, ordered=True):
    """Parse circles separated by ``/``; shared ids join circles."""
    parts = _strip_comment(text).split("/")
    circles, seen = [], set()
    for part in parts:
        word, marked, s = _parse_string_word(_tokens(part), line)
        if marked:
            raise ParseError("preferred marker is not allowed in a link", None, line)
        if seen & s:
            dup = next(iter(seen & s))
            raise ParseError(f"duplicate endpoint for arrow {dup[0]!r}", None, line)
        seen |= s
        circles.append(tuple(word))
    for aid, head in seen:
        if (aid, not head) not in seen:
            raise ParseError(f"missing partner endpoint for arrow {aid!r}", None, line)
    return FlatLink(tuple(circles), ordered)


def serialize_link(link):
    return " / ".join(
        " ".join(f"{aid}{'h' if head else 't'}" for aid, head in w) for w in link.circles
    ).strip()


def read_lines(text):
    """Yield ``(line_number, content)`` for non-blank, non-comment lines."""
    for i, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).strip()
        if body:
            yield i, body


# --- structural operations --------------------------------------------------


def _require_nonsingular(k, what):
    if k.singular:
        raise DiagramError(f"{what} needs a diagram without double-points")


def shadow(k):
    """Virtual string of a knot: negative arrows reversed, signs dropped."""
    _require_nonsingular(k, "shadow")
    return VirtualString(
        tuple((aid, head if k.signs[aid] > 0 else not head) for aid, head in k.word)
    )


def writhe(k):
    _require_nonsingular(k, "writhe")
    return sum(k.signs.values())


def _arc(word, start, stop):
    """Tokens strictly between positions ``start`` and ``stop`` going forward."""
    n = len(word)
    out = []
    i = (start + 1) % n
    while i != stop:
        out.append(word[i])
        i = (i + 1) % n
    return tuple(out)


def smooth(s, e):
    """Smooth a string at arrow ``e`` into an ordered two-component link.

    Component 1 is the arc running from the tail of ``e`` to its head,
    component 2 the arc from the head back to the tail.
    """
    pos = s.positions()
    if e not in pos:
        raise DiagramError(f"unknown arrow {e!r}")
    t, h = pos[e]
    return FlatLink((_arc(s.word, t, h), _arc(s.word, h, t)), ordered=True)


def smooth_crossing(link, x):
    """Smooth a two-component link at an arrow joining the components."""
    pos = link.positions()
    if x not in pos:
        raise DiagramError(f"unknown arrow {x!r}")
    (ct, pt), (ch, ph) = pos[x]
    if ct == ch:
        raise DiagramError(f"arrow {x!r} does not join two components")
    a, b = link.circles[ct], link.circles[ch]
    merged = a[pt + 1:] + a[:pt] + b[ph + 1:] + b[:ph]
    return VirtualString(merged)


def _check_chord(k, c):
    if c not in k.signs and c not in k.singular:
        raise DiagramError(f"unknown chord {c!r}")


def glue(k, c):
    """Replace crossing ``c`` by a double-point and flatten."""
    _check_chord(k, c)
    if c in k.singular:
        raise DiagramError(f"chord {c!r} is already singular")
    return SingularVirtualString(shadow(k), c)


def kink_glued(k):
    """Flatten ``k`` after gluing a fresh kink inserted at the basepoint."""
    base = shadow(k)
    new = _next_id(aid for aid, _ in base.word)
    return SingularVirtualString(VirtualString(((new, TAIL), (new, HEAD)) + base.word), new)


def unknot_union(s):
    return FlatLink((s.word, ()), ordered=False)


def cc_move(k, c):
    """Crossing change: reverse chord ``c`` and negate its sign."""
    _check_chord(k, c)
    if c in k.singular:
        raise DiagramError(f"crossing change on singular chord {c!r}")
    word = tuple((aid, (not head) if aid == c else head) for aid, head in k.word)
    signs = dict(k.signs)
    signs[c] = -signs[c]
    return SignedGaussDiagram(word, signs, k.singular)


def make_singular(k, c):
    """Turn crossing ``c`` into a double-point whose stored direction is its shadow arrow."""
    _check_chord(k, c)
    if c in k.singular:
        raise DiagramError(f"chord {c!r} is already singular")
    flip = k.signs[c] < 0
    word = tuple((aid, (not head) if (aid == c and flip) else head) for aid, head in k.word)
    signs = {a: s for a, s in k.signs.items() if a != c}
    return SignedGaussDiagram(word, signs, k.singular | {c})


def resolve(k, c, sign):
    """Resolve double-point ``c`` into a crossing of the given sign.

    Both resolutions have the same shadow arrow: the positive one keeps the
    stored direction, the negative one reverses it.
    """
    if c not in k.singular:
        raise DiagramError(f"chord {c!r} is not singular")
    if sign not in (1, -1):
        raise DiagramError("sign must be +1 or -1")
    flip = sign < 0
    word = tuple((aid, (not head) if (aid == c and flip) else head) for aid, head in k.word)
    signs = dict(k.signs)
    signs[c] = sign
    return SignedGaussDiagram(word, signs, k.singular - {c})


def from_circles(template, circles, meta=None):
    """Rebuild a value of the same kind as ``template`` from new circles."""
    if isinstance(template, FlatLink):
        return FlatLink(tuple(tuple(w) for w in circles), template.ordered)
    (word,) = circles
    word = tuple(word)
    if isinstance(template, VirtualString):
        return VirtualString(word)
    if isinstance(template, SingularVirtualString):
        pref = template.preferred if meta is None else meta
        return SingularVirtualString(VirtualString(word), pref)
    raise TypeError(type(template))


def circles_of(d):
    if isinstance(d, FlatLink):
        return d.circles
    return (d.word,)


def empty_knot():
    return SignedGaussDiagram((), {}, frozenset())


def arrows_of(d) -> Iterable:
    if isinstance(d, SignedGaussDiagram):
        return d.chords
    return d.arrows
