"""Intersection index, p_t, the formal-sum invariants S and G, and derivatives.

S and G take values in free abelian groups on flat (singular) homotopy
classes.  Classes are represented here by fingerprints: byte strings that
are equal for homotopic inputs.  Different fingerprint sums therefore prove
different invariant values; equal sums prove nothing beyond themselves.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

from .diagram import (
    DiagramError,
    FlatLink,
    VirtualString,
    glue,
    id_key,
    kink_glued,
    resolve,
    shadow,
    smooth,
    smooth_crossing,
    unknot_union,
)
from .matrix import fingerprint_flat, fingerprint_singular
from .moves import normalize


@dataclass(frozen=True)
class Polynomial:
    """Sparse integer polynomial in ``t``; ``modulus=2`` for mod-2 values."""

    coeffs: tuple = ()
    modulus: int | None = None

    def __init__(self, coeffs=None, modulus=None):
        items = dict(coeffs or {})
        clean = {}
        for e, c in items.items():
            c = int(c) % modulus if modulus else int(c)
            if c:
                clean[int(e)] = c
        object.__setattr__(self, "coeffs", tuple(sorted(clean.items())))
        object.__setattr__(self, "modulus", modulus)

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls({exponent: coeff})

    def as_dict(self):
        return dict(self.coeffs)

    def _combine(self, other, sign):
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.modulus != other.modulus:
            raise ValueError("cannot mix polynomials with different moduli")
        out = self.as_dict()
        for e, c in other.coeffs:
            out[e] = out.get(e, 0) + sign * c
        return Polynomial(out, self.modulus)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Polynomial({e: -c for e, c in self.coeffs}, self.modulus)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return Polynomial({e: k * c for e, c in self.coeffs}, self.modulus)

    __rmul__ = __mul__

    def mod2(self):
        return Polynomial(self.as_dict(), 2)

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.coeffs:
            if e == 0:
                body = str(abs(c))
            elif e == 1:
                body = "t" if abs(c) == 1 else f"{abs(c)}*t"
            else:
                body = f"t^{e}" if abs(c) == 1 else f"{abs(c)}*t^{e}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def to_json(self):
        return {
            "text": str(self),
            "coefficients": {str(e): c for e, c in self.coeffs},
            "modulus": self.modulus,
        }


def fingerprint_hex(fp):
    """Short stable digest used when printing fingerprints."""
    return hashlib.blake2b(fp, digest_size=8).hexdigest()


@dataclass(frozen=True)
class FormalSum:
    """Integer combination of fingerprints with no zero coefficients."""

    terms: tuple = field(default=())

    def __init__(self, terms=None):
        acc = {}
        for fp, c in dict(terms or {}).items():
            if c:
                acc[bytes(fp)] = int(c)
        object.__setattr__(self, "terms", tuple(sorted(acc.items())))

    @classmethod
    def single(cls, fp, coeff=1):
        return cls({fp: coeff})

    def as_dict(self):
        return dict(self.terms)

    def _combine(self, other, sign):
        if not isinstance(other, FormalSum):
            return NotImplemented
        out = self.as_dict()
        for fp, c in other.terms:
            out[fp] = out.get(fp, 0) + sign * c
        return FormalSum(out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return FormalSum({fp: -c for fp, c in self.terms})

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return FormalSum({fp: k * c for fp, c in self.terms})

    __rmul__ = __mul__

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def all_even(self):
        return all(c % 2 == 0 for _, c in self.terms)

    def encode(self):
        """Canonical bytes of the whole sum."""
        return b";".join(b"%d:%s" % (c, fp.hex().encode()) for fp, c in self.terms)

    def lines(self):
        return [f"{c} {fingerprint_hex(fp)}" for fp, c in self.terms]

    def __str__(self):
        return "\n".join(self.lines()) if self.terms else "0"

    def to_json(self):
        return [{"coeff": c, "fingerprint": fingerprint_hex(fp)} for fp, c in self.terms]


class ComparisonVerdict(enum.Enum):
    DISTINCT = "Distinct"
    EQUAL_AT_FINGERPRINT = "EqualAtFingerprint"

    def __str__(self):
        return self.value


def compare_sums(a, b):
    """``DISTINCT`` is a proof of inequality; the other verdict is not."""
    return ComparisonVerdict.DISTINCT if a != b else ComparisonVerdict.EQUAL_AT_FINGERPRINT


# --- intersection index and p_t ------------------------------------------------


def _require_two(link):
    if len(link.circles) != 2:
        raise DiagramError(f"expected a two-component link, got {len(link.circles)} components")


def _inter_arrows(link):
    """Arrow -> +1 (tail on component 1) or -1 (tail on component 2)."""
    out = {}
    for aid, ((ct, _), (ch, _)) in link.positions().items():
        if ct != ch:
            out[aid] = 1 if ct == 0 else -1
    return out


def intersection_index(link):
    _require_two(link)
    return sum(_inter_arrows(link).values())


def _require_nonsingular(k):
    if k.singular:
        raise DiagramError("invariant needs a diagram without double-points")


def crossing_indices(k):
    """Crossing -> (sign, intersection index of the shadow smoothed there)."""
    _require_nonsingular(k)
    s = shadow(k)
    return {c: (k.signs[c], intersection_index(smooth(s, c))) for c in k.chords}


def pt(k):
    total = {}
    for sign, i in crossing_indices(k).values():
        e = abs(i)
        total[e] = total.get(e, 0) + sign
        total[0] = total.get(0, 0) - sign
    return Polynomial(total)


def pt_mod2(k):
    return pt(k).mod2()


# --- Vassiliev derivative ------------------------------------------------------


def derivative(V, k, order=None):
    """Alternating sum of ``V`` over all resolutions of the double-points.

    ``order`` fixes which double-point is resolved first; the value does not
    depend on it.
    """
    chords = list(order) if order is not None else sorted(k.singular, key=id_key)
    if set(chords) != set(k.singular):
        raise DiagramError("order must list every double-point exactly once")
    if not chords:
        return V(k)
    c, rest = chords[0], chords[1:]
    return derivative(V, resolve(k, c, 1), rest) - derivative(V, resolve(k, c, -1), rest)


def is_zero_value(v):
    if isinstance(v, (Polynomial, FormalSum)):
        return v.is_zero()
    return v == 0


def degree_one_check(V, k):
    """True when the derivative of ``V`` vanishes on the 2-singular ``k``."""
    if len(k.singular) < 2:
        raise DiagramError("degree-one check needs at least two double-points")
    return is_zero_value(derivative(V, k))


# --- bracket, S and G -------------------------------------------------------------


def bracket_B(link):
    """Sum of sgn(x) times the flat class of the link smoothed at ``x``."""
    _require_two(link)
    acc = {}
    for x, sgn in sorted(_inter_arrows(link).items(), key=lambda kv: id_key(kv[0])):
        fp = fingerprint_flat(smooth_crossing(link, x))
        acc[fp] = acc.get(fp, 0) + sgn
    return FormalSum(acc)


def _component_string(link, c):
    """Circle ``c`` with only its own arrows (those joining components dropped)."""
    other = {aid for i, w in enumerate(link.circles) if i != c for aid, _ in w}
    return VirtualString(tuple(t for t in link.circles[c] if t[0] not in other))


def link_fingerprint(link):
    """Fingerprint of an unordered two-component flat link."""
    _require_two(link)
    link = normalize(FlatLink(link.circles, ordered=True))
    i = abs(intersection_index(link))
    b = bracket_B(link)
    bracket = min(b.encode(), (-b).encode())
    comps = sorted(fingerprint_flat(_component_string(link, c)) for c in (0, 1))
    return b"link|i:%d|B:%s|C:%s" % (i, bracket, b"&".join(comps))


def invariant_S(k):
    _require_nonsingular(k)
    s = shadow(k)
    base = link_fingerprint(unknot_union(s))
    acc = FormalSum()
    for c in k.chords:
        sign = k.signs[c]
        acc = acc + FormalSum({link_fingerprint(smooth(s, c)): sign}) - FormalSum({base: sign})
    return acc


def invariant_G(k):
    _require_nonsingular(k)
    base = fingerprint_singular(kink_glued(k))
    acc = FormalSum()
    for c in k.chords:
        sign = k.signs[c]
        acc = acc + FormalSum({fingerprint_singular(glue(k, c)): sign}) - FormalSum({base: sign})
    return acc


def G_terms(k):
    """Per-crossing ``(crossing, sign, fingerprint)`` terms of G, kink terms omitted."""
    _require_nonsingular(k)
    return [(c, k.signs[c], fingerprint_singular(glue(k, c))) for c in k.chords]


def S_terms(k):
    _require_nonsingular(k)
    s = shadow(k)
    return [(c, k.signs[c], link_fingerprint(smooth(s, c))) for c in k.chords]


def value_of(level, k):
    """Invariant by name: ``pt``, ``mod2``, ``S`` or ``G``."""
    if level == "pt":
        return pt(k)
    if level == "mod2":
        return pt_mod2(k)
    if level == "S":
        return invariant_S(k)
    if level == "G":
        return invariant_G(k)
    raise ValueError(f"unknown invariant {level!r}")


__all__ = [
    "ComparisonVerdict",
    "FormalSum",
    "G_terms",
    "Polynomial",
    "S_terms",
    "bracket_B",
    "compare_sums",
    "crossing_indices",
    "degree_one_check",
    "derivative",
    "fingerprint_hex",
    "intersection_index",
    "invariant_G",
    "invariant_S",
    "is_zero_value",
    "link_fingerprint",
    "pt",
    "pt_mod2",
    "value_of",
]
