import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import strings
from vknot import corpus
from vknot.diagram import SingularVirtualString, parse_string, shadow, smooth
from vknot.fuzz import random_gauss, random_singular_string, random_string
from vknot.invariants import intersection_index
from vknot.matrix import (
    SBM,
    BasedMatrix,
    MatrixError,
    arc_product,
    canonical,
    canonical_bytes,
    classify_element,
    complementary_pairs,
    d_partners,
    extend,
    fingerprint_flat,
    fingerprint_singular,
    from_singular_string,
    from_string,
    homologous,
    homologous_sbm,
    is_isomorphic,
    is_primitive,
    linking_sign,
    move_D,
    parse_matrix,
    reduce_primitive,
    reduce_primitive_sbm,
    sbm_partners,
    switch_N,
)


def brute_isomorphic(a, b):
    """Try every bijection of the free elements."""
    if type(a) is not type(b) or a.size != b.size:
        return False
    fa, fb = list(a.fixed), list(b.fixed)
    for p in itertools.permutations(b.free):
        ia = fa + a.free
        ib = fb + list(p)
        if np.array_equal(a.b[np.ix_(ia, ia)], b.b[np.ix_(ib, ib)]):
            return True
    return False


def shuffled(m, rng):
    free = m.free
    rng.shuffle(free)
    if isinstance(m, SBM):
        order = [0] + free + [m.size - 1]
    else:
        order = [0] + free
    return m.take(order)


def small_string(rng, n=5):
    return shadow(random_gauss(rng, rng.randint(0, n)))


def small_singular(rng, n=4):
    s = small_string(rng, n)
    while not s.arrows:
        s = small_string(rng, n)
    return SingularVirtualString(s, rng.choice(list(s.arrows)))


def direct_matrix(s):
    """Entry-by-entry count from the arc definitions."""
    pos = s.positions()
    n = len(s.word)
    arrows = list(s.arrows)

    def inside(p, a, b):
        return 0 < (p - a) % n < (b - a) % n

    size = len(arrows) + 1
    b = np.zeros((size, size), dtype=np.int64)
    for x, e in enumerate(arrows, 1):
        a, h = pos[e]
        v = 0
        for g, (gt, gh) in pos.items():
            v += inside(gt, a, h) and not inside(gh, a, h) and g != e
            v -= inside(gh, a, h) and not inside(gt, a, h) and g != e
        b[x, 0], b[0, x] = v, -v
        for y, f in enumerate(arrows, 1):
            if e != f:
                b[x, y] = arc_product(s, e, f) + linking_sign(s, e, f)
    return b


class TestConstruction:
    def test_parse(self):
        m = parse_matrix("0 1\n-1 0")
        assert m.labels == ("s", 1) and m.entry(1, "s") == -1

    @pytest.mark.parametrize(
        "text", ["0 1\n1 0", "0 1 2\n-1 0 0", "0 x\n0 0", ""]
    )
    def test_parse_rejects(self, text):
        with pytest.raises(MatrixError):
            parse_matrix(text)

    def test_sbm_needs_d(self):
        with pytest.raises(MatrixError):
            parse_matrix("0", singular=True)

    def test_read_only(self):
        m = parse_matrix("0 1\n-1 0")
        with pytest.raises(ValueError):
            m.b[0, 1] = 3

    def test_rank_one(self):
        m = from_string(parse_string("1t 1h"))
        assert m.b.tolist() == [[0, 0], [0, 0]]

    def test_single_preferred(self):
        m = from_singular_string(parse_string("*1t *1h"))
        assert isinstance(m, SBM) and m.d == 1 and not m.b.any()

    def test_preferred_goes_last(self):
        ss = parse_string("*1t 2h 1h 2t")
        assert from_singular_string(ss).labels == ("s", 2, 1)

    def test_printed_matrices(self, left, right):
        for s, name in ((left, "b3"), (right, "b4")):
            assert np.array_equal(from_singular_string(s).b, corpus.matrix(name).b)

    def test_b3_entry_decomposition(self, left):
        # arrows 1 and 3 of the left string: arc term and linking term
        base = left.base
        assert arc_product(base, 1, 3) + linking_sign(base, 1, 3) == corpus.matrix("b3").entry(1, 3)
        assert linking_sign(base, 1, 3) in (-1, 0, 1)

    @given(strings(max_n=6))
    @settings(max_examples=80)
    def test_matches_direct_count(self, s):
        assert np.array_equal(from_string(s).b, direct_matrix(s))

    @given(strings(max_n=6, min_n=1))
    @settings(max_examples=80)
    def test_s_column_is_smoothing_index(self, s):
        m = from_string(s)
        for e in s.arrows:
            assert m.entry(e, "s") == intersection_index(smooth(s, e))

    @given(strings(max_n=5))
    @settings(max_examples=40)
    def test_rotation_invariant(self, s):
        w = s.word
        for r in range(len(w)):
            rot = type(s)(w[r:] + w[:r])
            assert from_string(rot) == from_string(s)


class TestElements:
    def test_classify(self):
        m = BasedMatrix(("s", 1, 2, 3), [[0, 1, 0, 1], [-1, 0, 0, 0], [0, 0, 0, 0], [-1, 0, 0, 0]])
        assert classify_element(m, 2) == "annihilating"
        assert classify_element(m, "s") == "none"
        assert classify_element(m, 1) == "none"
        # row of 1 is (-1, 0, 0, 0), s row is (0, 1, 0, 1): not core
        n = extend(m, "M2")
        assert classify_element(n, n.labels[-1]) == "core"

    def test_complementary_pairs(self):
        m = extend(parse_matrix("0 2\n-2 0"), "M3", ([0, 1], [0, 1]))
        assert complementary_pairs(m) == [(2, 3)]

    def test_sbm_like(self):
        m = from_singular_string(parse_string("*1t *1h"))
        assert classify_element(m, 1) == "annihilating-like"
        assert d_partners(m) == []

    def test_extensions_validate(self):
        m = parse_matrix("0 2\n-2 0")
        with pytest.raises(MatrixError):
            extend(m, "M1", [1, 0])
        with pytest.raises(MatrixError):
            extend(m, "M2", [0, 0])
        with pytest.raises(MatrixError):
            extend(m, "M3", ([0, 1], [0, 0]))
        with pytest.raises(MatrixError):
            extend(m, "M4")

    def test_m3_entry(self):
        m = parse_matrix("0 2\n-2 0")
        out = extend(m, "M3", ([3, 1], [-3, 1]))
        assert out.entry(2, 3) == 3 and is_primitive(m)
        assert reduce_primitive(out) == m


class TestReduction:
    def test_kishino_is_primitive(self):
        s = corpus.string("kishino_string")
        m = from_string(s)
        assert is_primitive(m) and reduce_primitive(m).size == 5
        assert all(classify_element(m, g) == "none" for g in m.labels)
        assert complementary_pairs(m) == []

    def test_trivial_strings(self):
        for text in ("1t 1h", "1t 2h 1h 2t", "1t 2t 1h 2h"):
            assert reduce_primitive(from_string(parse_string(text))).size == 1

    def test_printed_are_primitive_and_distinct(self):
        b3, b4 = corpus.matrix("b3"), corpus.matrix("b4")
        assert is_primitive(b3) and is_primitive(b4)
        assert not is_isomorphic(b3, b4)
        assert not homologous_sbm(b3, b4)
        assert d_partners(b3) == [] and d_partners(b4) == []

    def test_result_has_no_special_elements(self):
        rng = random.Random(4)
        for _ in range(40):
            p = reduce_primitive(from_string(random_string(rng)))
            assert is_primitive(p)
            assert all(classify_element(p, g) == "none" for g in p.labels)
            assert complementary_pairs(p) == []

    def test_extension_tower_reduces_back(self):
        rng = random.Random(8)
        for _ in range(30):
            p = reduce_primitive(from_string(random_string(rng)))
            m = p
            for _ in range(4):
                kind = rng.choice(("M1", "M2", "M3"))
                if kind == "M3":
                    r1 = np.array([rng.randint(-2, 2) for _ in range(m.size)])
                    m = extend(m, "M3", (r1, m.b[0] - r1))
                else:
                    m = extend(m, kind)
            m = shuffled(m, rng)
            assert is_isomorphic(reduce_primitive(m), p)
            assert homologous(m, p)


class TestSingularMoves:
    def test_switch_twice(self):
        rng = random.Random(1)
        hits = 0
        for _ in range(60):
            m = from_singular_string(random_singular_string(rng))
            for g in d_partners(m):
                once = switch_N(m, g)
                assert once.d == g
                assert switch_N(once, m.d) == m
                hits += 1
        assert hits > 10

    def test_switch_needs_partner(self):
        m = corpus.matrix("b3")
        with pytest.raises(MatrixError):
            switch_N(m, 1)
        with pytest.raises(MatrixError):
            switch_N(m, "s")

    def test_d_on_zero_matrix(self):
        # s-row zero: d is both annihilating-like and core-like
        m = from_singular_string(parse_string("*1t *1h"))
        up = move_D(m, "12")
        assert up.size == 2 and not up.b.any()
        assert move_D(m, "21").size == 2

    def test_d_round_trip(self):
        m = SBM(("s", 1, "d"), [[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
        up = move_D(m, "12")
        assert classify_element(up, up.d) == "core-like"
        assert np.array_equal(up.row(up.d), up.b[0])
        assert is_isomorphic(move_D(up, "21"), m)
        with pytest.raises(MatrixError):
            move_D(m, "21")
        with pytest.raises(MatrixError):
            move_D(m, "33")

    def test_reduce_sbm_keeps_d(self):
        rng = random.Random(6)
        for _ in range(40):
            m = from_singular_string(random_singular_string(rng))
            p = reduce_primitive_sbm(m)
            assert isinstance(p, SBM) and is_primitive(p)
            assert homologous_sbm(m, p)


class TestIsomorphism:
    def test_matches_brute_force(self):
        rng = random.Random(10)
        for _ in range(150):
            a = from_string(small_string(rng))
            b = shuffled(a, rng) if rng.random() < 0.5 else from_string(small_string(rng))
            assert is_isomorphic(a, b) == brute_isomorphic(a, b)
            assert (canonical_bytes(a) == canonical_bytes(b)) == brute_isomorphic(a, b)

    def test_sbm_matches_brute_force(self):
        rng = random.Random(11)
        for _ in range(100):
            a = from_singular_string(small_singular(rng))
            b = shuffled(a, rng) if rng.random() < 0.5 else from_singular_string(small_singular(rng))
            assert is_isomorphic(a, b) == brute_isomorphic(a, b)
            assert (canonical_bytes(a) == canonical_bytes(b)) == brute_isomorphic(a, b)

    def test_canonical_is_isomorphic(self):
        m = corpus.matrix("b3")
        c = canonical(m)
        assert is_isomorphic(m, c) and c.d == "d"
        assert canonical(c) == c

    def test_types_do_not_mix(self):
        m = corpus.matrix("b3")
        flat = BasedMatrix(m.labels, m.b)
        assert not is_isomorphic(m, flat)
        assert canonical_bytes(m) != canonical_bytes(flat)


class TestFingerprints:
    @given(strings(max_n=6))
    @settings(max_examples=60)
    def test_flat_ignores_labels(self, s):
        relabel = {a: 10 + i for i, a in enumerate(reversed(list(s.arrows)))}
        t = type(s)(tuple((relabel[a], h) for a, h in s.word))
        assert fingerprint_flat(s) == fingerprint_flat(t)

    def test_singular_sees_partners(self, left, right):
        a, b = fingerprint_singular(left), fingerprint_singular(right)
        assert a != b and a.startswith(b"sing|")
        ss = SingularVirtualString(left.base, left.preferred)
        assert fingerprint_singular(ss) == a

    def test_partners_share_fingerprint(self):
        rng = random.Random(12)
        seen = 0
        for _ in range(80):
            m = from_singular_string(random_singular_string(rng))
            p = reduce_primitive_sbm(m)
            for q in sbm_partners(p):
                assert homologous_sbm(p, q)
                seen += 1
        assert seen > 0
