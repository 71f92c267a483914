"""Random diagrams and the invariance / degree-one fuzz suites."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .diagram import (
    SignedGaussDiagram,
    SingularVirtualString,
    VirtualString,
    make_singular,
    serialize_knot,
    serialize_string,
    shadow,
)
from .invariants import derivative, invariant_G, invariant_S, is_zero_value, pt, pt_mod2
from .matrix import fingerprint_flat, fingerprint_singular
from .moves import apply_move, random_move

SUITES = ("pt", "mod2", "flat", "singular", "degree1")


def trial_rng(seed, suite, trial):
    """Independent generator for one trial, derived from the master seed."""
    return random.Random(f"{seed}:{suite}:{trial}")


# --- generators ---------------------------------------------------------------


def braid_closure(word, strands):
    """Gauss diagram of a closed (virtual) braid, or None if it is a link.

    ``word`` holds ``(i, e)`` letters: ``e = +1/-1`` is a classical crossing
    of the strands at positions ``i`` and ``i+1`` (the strand moving right
    passes over when ``e = +1``), ``e = 0`` a virtual one.
    """
    # passes[(position_at_bottom_of_layer, layer)] -> token for that strand
    at = list(range(strands))  # strand currently at each position
    visits = {s: [] for s in range(strands)}
    signs = {}
    cid = 0
    for i, e in word:
        left, right = at[i], at[i + 1]
        if e:
            cid += 1
            signs[cid] = e
            visits[left].append((cid, e < 0))
            visits[right].append((cid, e > 0))
        at[i], at[i + 1] = right, left
    top = {strand: pos for pos, strand in enumerate(at)}
    # strand starting at position p ends at top position top[p]; continue there
    order, p = [], 0
    for _ in range(strands):
        order.append(p)
        p = top[p]
        if p == 0:
            break
    if len(order) != strands or p != 0:
        return None
    tokens = [tok for s in order for tok in visits[s]]
    return SignedGaussDiagram(tuple(tokens), signs)


def random_braid_knot(rng, length=8, strands=3, virtual=0.15):
    # a single-cycle permutation of the strands has the parity of strands - 1
    length += (length - strands + 1) % 2
    while True:
        word = []
        for _ in range(length):
            i = rng.randrange(strands - 1)
            e = 0 if rng.random() < virtual else rng.choice((1, -1))
            word.append((i, e))
        k = braid_closure(word, strands)
        if k is not None and k.n > 0:
            return k


def random_gauss(rng, n):
    """Uniform random Gauss diagram with ``n`` signed chords."""
    toks = [(c, h) for c in range(1, n + 1) for h in (False, True)]
    rng.shuffle(toks)
    return SignedGaussDiagram(tuple(toks), {c: rng.choice((1, -1)) for c in range(1, n + 1)})


def random_knot(rng, max_n=6):
    if rng.random() < 0.5:
        return random_braid_knot(rng, length=rng.randint(3, 9), strands=rng.choice((3, 4)))
    return random_gauss(rng, rng.randint(0, max_n))


def random_string(rng, max_n=6):
    return shadow(random_knot(rng, max_n))


def random_singular_string(rng, max_n=5):
    """Random string plus a fresh (ii) pair, one arrow of which is preferred.

    The pair makes (s-ii) applicable at the start of a walk.
    """
    base = random_string(rng, max_n)
    word = list(base.word)
    x = max([a for a, _ in word if isinstance(a, int)], default=0) + 1
    y = x + 1
    i = rng.randint(0, len(word))
    word[i:i] = [(x, False), (y, True)]
    j = rng.randint(0, len(word))
    word[j:j] = [(x, True), (y, False)] if rng.random() < 0.5 else [(y, False), (x, True)]
    return SingularVirtualString(VirtualString(tuple(word)), rng.choice((x, y)))


def random_two_singular(rng, max_n=6):
    while True:
        k = random_knot(rng, max_n)
        if k.n >= 2:
            a, b = rng.sample(list(k.chords), 2)
            return make_singular(make_singular(k, a), b)


# --- walks ----------------------------------------------------------------------

SHRINK = {
    "knot": ("R1-", "R2-", "R3"),
    "string": ("i-", "ii-", "iii"),
}


def _size(d):
    return d.n if isinstance(d, SignedGaussDiagram) else d.rank


def fuzz_walk(d, moves, rng, kinds, max_size=10, stats=None):
    """Random walk that only draws deletions and R3/(iii) once ``d`` is large.

    Every step is a uniformly chosen instance from the active kind set, so
    the walk only ever applies legitimate moves.  Yields each new diagram.
    """
    kind_of = "knot" if isinstance(d, SignedGaussDiagram) else "string"
    shrink = [k for k in SHRINK[kind_of]] + [k for k in kinds if k in ("CC", "s-ii")]
    for _ in range(moves):
        active = shrink if _size(d) > max_size else kinds
        m = random_move(d, rng, active)
        if m is None and active is not kinds:
            m = random_move(d, rng, kinds)
        if m is not None:
            d = apply_move(d, m)
            if stats is not None:
                stats[m.kind] += 1
        yield d


# --- suites ---------------------------------------------------------------------


@dataclass
class FuzzReport:
    suite: str
    trials: int
    moves: int
    seed: int
    applications: int = 0
    checks: int = 0
    by_kind: Counter = field(default_factory=Counter)
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.counterexamples

    def to_json(self):
        return {
            "suite": self.suite,
            "trials": self.trials,
            "moves": self.moves,
            "seed": self.seed,
            "applications": self.applications,
            "checks": self.checks,
            "by_kind": dict(sorted(self.by_kind.items())),
            "counterexamples": self.counterexamples,
            "ok": self.ok,
        }


def _dump(d):
    if isinstance(d, SignedGaussDiagram):
        return serialize_knot(d)
    return serialize_string(d)


_WALKS = {
    "pt": (random_knot, ("R1+", "R1-", "R2+", "R2-", "R3"), pt),
    "mod2": (random_knot, ("R1+", "R1-", "R2+", "R2-", "R3", "CC"), pt_mod2),
    "flat": (random_string, ("i+", "i-", "ii+", "ii-", "iii"), fingerprint_flat),
    "singular": (
        random_singular_string,
        ("i+", "i-", "ii+", "ii-", "iii", "s-ii"),
        fingerprint_singular,
    ),
}


def run_suite(suite, trials, moves, seed, check_every=5, max_size=10):
    """Run one suite; each trial gets its own generator derived from ``seed``."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if trials < 0 or moves < 0:
        raise ValueError("trials and moves must be non-negative")
    report = FuzzReport(suite, trials, moves, seed)
    for t in range(trials):
        rng = trial_rng(seed, suite, t)
        if suite == "degree1":
            _degree_one_trial(rng, report, t)
            continue
        gen, kinds, inv = _WALKS[suite]
        d0 = gen(rng)
        want = inv(d0)
        before = sum(report.by_kind.values())
        for step, d in enumerate(fuzz_walk(d0, moves, rng, kinds, max_size, report.by_kind), 1):
            if step % check_every == 0 or step == moves:
                report.checks += 1
                if inv(d) != want:
                    report.counterexamples.append(
                        {"trial": t, "step": step, "start": _dump(d0), "end": _dump(d)}
                    )
                    break
        report.applications += sum(report.by_kind.values()) - before
    return report


DEGREE_ONE = (("pt", pt), ("S", invariant_S), ("G", invariant_G))


def _degree_one_trial(rng, report, t):
    k = random_two_singular(rng)
    for name, V in DEGREE_ONE:
        report.checks += 1
        if not is_zero_value(derivative(V, k)):
            report.counterexamples.append({"trial": t, "invariant": name, "diagram": _dump(k)})
