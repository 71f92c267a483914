import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gauss_diagrams, strings
from vknot.diagram import (
    SingularVirtualString,
    VirtualString,
    empty_knot,
    parse_knot,
    parse_link,
    parse_string,
    shadow,
    smooth,
)
from vknot.fuzz import braid_closure, random_singular_string
from vknot.moves import (
    KNOT_KINDS,
    MoveError,
    MoveInstance,
    apply_move,
    enumerate_moves,
    normalize,
    r3_patterns,
    random_move,
    random_walk,
)


def _kinds(moves):
    return {m.kind for m in moves}


class TestEnumerate:
    def test_r1_on_empty_knot(self):
        ms = enumerate_moves(empty_knot(), ["R1+"])
        assert len(ms) == 4
        outs = {apply_move(empty_knot(), m) for m in ms}
        assert outs == {parse_knot(t) for t in ("O1+ U1+", "O1- U1-", "U1+ O1+", "U1- O1-")}

    def test_inverse_i_on_rank_one(self):
        assert enumerate_moves(parse_string("1t 1h"), ["i-"]) == [MoveInstance("i-", (1,))]

    def test_preferred_arrow_protected(self):
        assert enumerate_moves(parse_string("*1t *1h"), ["i-", "ii-"]) == []
        s = parse_string("*1t 2h 1h 2t")
        assert enumerate_moves(s, ["ii-"]) == []
        assert enumerate_moves(s, ["s-ii"]) == [MoveInstance("s-ii", (2,))]

    def test_insert_counts(self):
        s = parse_string("1t 2t 1h 2h")
        g = 4
        assert len(enumerate_moves(s, ["i+"])) == 2 * g
        assert len(enumerate_moves(s, ["ii+"])) == 4 * g * (g + 1) // 2
        k = parse_knot("O1+ U1+")
        assert len(enumerate_moves(k, ["R2+"])) == 4 * (2 * 2 + 2)

    def test_cc_lists_every_crossing(self):
        k = parse_knot("O1+ U2- D3t O2- U1+ D3h")
        assert [m.site for m in enumerate_moves(k, ["CC"])] == [(1,), (2,)]

    def test_s_ii_only_for_singular(self):
        assert "s-ii" not in _kinds(enumerate_moves(parse_string("1t 2h 1h 2t")))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            enumerate_moves(empty_knot(), ["R7"])


class TestR3:
    def test_table_is_stable(self):
        flat, signed = r3_patterns()
        assert (len(flat), len(signed)) == (4, 16)
        assert r3_patterns(20000, 99) == (flat, signed)

    def test_iii_replaces_arrows(self):
        # arcs aa', bb', cc' with arrows (a',b), (b',c), (c',a)
        s = parse_string("3h 1t 1h 2t 2h 3t")
        (m,) = enumerate_moves(s, ["iii"])
        out = apply_move(s, m)
        # now (a,b'), (b,c'), (c,a')
        assert out == parse_string("1t 3h 2t 1h 3t 2h")
        assert out.word == ((1, False), (3, True), (2, False), (1, True), (3, False), (2, True))

    def test_braid_relation(self):
        # s1 s2 s1 -> s2 s1 s2 is an R3 move; check the closures are related by one
        a = braid_closure([(0, 1), (1, 1), (0, 1), (1, 1)], 3)
        ms = enumerate_moves(a, ["R3"])
        b = braid_closure([(1, 1), (0, 1), (1, 1), (1, 1)], 3)
        assert any(apply_move(a, m) == b for m in ms)

    def test_alternating_triangle_is_not_r3(self):
        assert enumerate_moves(parse_knot("O1+ U2+ O3+ U1+ O2+ U3+"), ["R3"]) == []

    def test_r3_involution(self):
        a = braid_closure([(0, 1), (1, 1), (0, 1), (1, -1)], 3)
        ms = enumerate_moves(a, ["R3"])
        assert ms
        for m in ms:
            b = apply_move(a, m)
            assert any(apply_move(b, m2) == a for m2 in enumerate_moves(b, ["R3"]))


class TestApply:
    def test_i_round_trip(self):
        s = parse_string("1t 2t 1h 2h")
        for m in enumerate_moves(s, ["i+"]):
            t = apply_move(s, m)
            assert any(apply_move(t, r) == s for r in enumerate_moves(t, ["i-"]))

    def test_s_ii_twice(self):
        s = parse_string("*1t 2h 1h 2t")
        t = apply_move(s, MoveInstance("s-ii", (2,)))
        assert t.preferred == 2 and t.base == s.base
        assert apply_move(t, MoveInstance("s-ii", (1,))) == s

    def test_stale_instance(self):
        s = parse_string("1t 1h 2t 2h")
        m = MoveInstance("i-", (1,))
        t = apply_move(s, m)
        with pytest.raises(MoveError):
            apply_move(t, m)
        with pytest.raises(MoveError):
            apply_move(s, MoveInstance("iii", (((0, 0), (0, 1)),)))
        with pytest.raises(MoveError):
            apply_move(s, MoveInstance("R1+", ((0, 0), False, 1)))

    @given(gauss_diagrams(max_n=4), st.randoms(use_true_random=False))
    @settings(max_examples=40, deadline=None)
    def test_every_instance_applies(self, k, r):
        ms = enumerate_moves(k)
        for m in r.sample(ms, min(len(ms), 60)):
            apply_move(k, m)

    @given(strings(max_n=4))
    @settings(max_examples=40, deadline=None)
    def test_r2_style_round_trip(self, s):
        for m in enumerate_moves(s, ["ii+"])[:30]:
            t = apply_move(s, m)
            assert any(apply_move(t, r) == s for r in enumerate_moves(t, ["ii-"]))

    @given(gauss_diagrams(max_n=4))
    @settings(max_examples=30, deadline=None)
    def test_knot_round_trips(self, k):
        for kind, inverse in (("R1+", "R1-"), ("R2+", "R2-")):
            for m in enumerate_moves(k, [kind])[:20]:
                t = apply_move(k, m)
                assert any(apply_move(t, r) == k for r in enumerate_moves(t, [inverse]))

    def test_iii_and_s_ii_keep_rank(self):
        rng = random.Random(3)
        for _ in range(20):
            s = random_singular_string(rng)
            for m in enumerate_moves(s, ["iii", "s-ii"]):
                t = apply_move(s, m)
                assert t.rank == s.rank
                if m.kind == "s-ii":
                    assert t.base == s.base


class TestWalk:
    def test_zero_steps(self):
        k = parse_knot("O1+ U2+ O3+ U1+ O2+ U3+")
        assert random_walk(k, 0, 1) is k

    def test_deterministic(self):
        k = parse_knot("O1+ U2+ O3+ U1+ O2+ U3+")
        a = random_walk(k, 25, 9, ["R1", "R2", "R3"])
        b = random_walk(k, 25, 9, ["R1", "R2", "R3"])
        assert a == b and a.word == b.word

    def test_no_moves_is_identity(self):
        s = parse_string("1t 2t 1h 2h")
        assert random_move(s, random.Random(0), ["i-"]) is None
        assert random_walk(s, 5, 0, ["i-"]) == s

    def test_uniform_over_instances(self):
        k = parse_knot("O1+ U1+")
        pool = enumerate_moves(k, ["R1+", "R1-"])
        rng = random.Random(5)
        hits = {}
        for _ in range(4000):
            m = random_move(k, rng, ["R1+", "R1-"])
            hits[m] = hits.get(m, 0) + 1
        assert set(hits) == set(pool)
        expected = 4000 / len(pool)
        assert all(abs(v - expected) < 0.35 * expected for v in hits.values())

    def test_kinds_are_respected(self):
        k = parse_knot("O1+ U2+ O3+ U1+ O2+ U3+")
        rng = random.Random(2)
        for _ in range(30):
            m = random_move(k, rng, ["CC"])
            assert m.kind == "CC"
        assert set(KNOT_KINDS) >= _kinds(enumerate_moves(k))


class TestNormalize:
    def test_rank_one(self):
        assert normalize(parse_string("1t 1h")) == VirtualString(())

    def test_fixed_point(self):
        s = parse_string("3t 1h 2h 1t 2t 4h 3h 4t")
        assert normalize(s) == s

    def test_k1_smoothings(self, k1):
        s = shadow(k1)
        a, b = normalize(smooth(s, 1)), normalize(smooth(s, 2))
        assert a == b
        assert a == parse_link("4h 3h / 3t 4t")

    def test_preferred_survives(self):
        s = parse_string("*1t *1h 2t 2h")
        assert normalize(s) == parse_string("*1t *1h")

    @given(strings(max_n=6))
    @settings(max_examples=60)
    def test_idempotent_and_shrinking(self, s):
        n = normalize(s)
        assert normalize(n) == n and n.rank <= s.rank

    def test_rejects_knots(self):
        with pytest.raises(TypeError):
            normalize(parse_knot("O1+ U1+"))

    def test_singular_type_kept(self):
        assert isinstance(normalize(parse_string("*1t 2t 2h *1h")), SingularVirtualString)
