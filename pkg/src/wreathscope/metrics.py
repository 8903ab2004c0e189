"""Word metrics for the generating-set families on wreath products.

Closed forms are implementer-derived and certified against the exhaustive
BFS oracle on truncated state spaces; each closed form also produces a
WalkPlan witness that replays to the target element through the group law.

A base letter applied while the cursor sits at position p writes its pattern
translated by p, so all travel constraints below are phrased on the absolute
lamp configuration of the target (config shifted by the target's own shift).
"""

from __future__ import annotations

import itertools
import os
import random
from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .groups import (
    Coeff,
    Config,
    Element,
    Group,
    GroupMismatchError,
    Subgroup,
)

DEFAULT_STATE_LIMIT = 4_000_000
STATE_LIMIT_ENV = "WREATHSCOPE_STATE_LIMIT"


class StateLimitError(RuntimeError):
    """BFS state space larger than the configured limit."""


class WindowError(ValueError):
    """Target element does not fit the BFS window."""


class Variant(str, Enum):
    STANDARD = "standard"
    LINEAL = "lineal"
    QP_PLUS = "qp+"
    QP_MINUS = "qp-"
    TRIVIAL = "trivial"


@dataclass(frozen=True)
class GenSet:
    """Symmetrized generating-set descriptor for one hyperbolic structure."""

    variant: Variant
    group: Group
    subgroup: Subgroup | None = None

    def __post_init__(self) -> None:
        if self.variant in (Variant.QP_PLUS, Variant.QP_MINUS):
            if self.subgroup is None or self.subgroup.group != self.group:
                raise GroupMismatchError("qp generating sets need a subgroup of the same group")
        elif self.subgroup is not None:
            raise ValueError(f"{self.variant.value} takes no subgroup")

    @staticmethod
    def standard(group: Group) -> "GenSet":
        return GenSet(Variant.STANDARD, group)

    @staticmethod
    def lineal(group: Group) -> "GenSet":
        return GenSet(Variant.LINEAL, group)

    @staticmethod
    def trivial(group: Group) -> "GenSet":
        return GenSet(Variant.TRIVIAL, group)

    @staticmethod
    def qp_plus(subgroup: Subgroup) -> "GenSet":
        return GenSet(Variant.QP_PLUS, subgroup.group, subgroup)

    @staticmethod
    def qp_minus(subgroup: Subgroup) -> "GenSet":
        return GenSet(Variant.QP_MINUS, subgroup.group, subgroup)

    def mirror(self) -> "GenSet":
        if self.variant == Variant.QP_PLUS:
            return GenSet.qp_minus(self.subgroup)
        if self.variant == Variant.QP_MINUS:
            return GenSet.qp_plus(self.subgroup)
        return self

    def label(self) -> str:
        if self.subgroup is not None:
            return f"{self.variant.value}:{self.subgroup.label()}"
        return self.variant.value


@dataclass(frozen=True)
class WalkPlan:
    """Witness for a word-length value.

    ``visits`` is the full cursor path (starting at 0, consecutive entries
    differ by 1); ``bursts`` holds (visit index, base letter config) pairs,
    the letter being written in cursor-local coordinates.  Replaying bursts
    on arrival and cursor steps in between realizes the target element, and
    ``cost = len(visits) - 1 + len(bursts)``.
    """

    visits: tuple[int, ...]
    bursts: tuple[tuple[int, Config], ...]
    cost: int

    def burst_positions(self) -> tuple[int, ...]:
        return tuple(self.visits[i] for i, _ in self.bursts)

    def replay(self, group: Group) -> Element:
        e = Element.identity(group)
        for i, pos in enumerate(self.visits):
            for idx, letter in self.bursts:
                if idx == i:
                    e = e * Element.from_config(letter)
            if i + 1 < len(self.visits):
                e = e * Element.shift_only(group, self.visits[i + 1] - pos)
        return e

    def mirror(self) -> "WalkPlan":
        return WalkPlan(
            tuple(-p for p in self.visits),
            tuple((i, cfg.mirror()) for i, cfg in self.bursts),
            self.cost,
        )


def _path(points: list[int]) -> tuple[int, ...]:
    """Unit-step cursor path through the given waypoints."""
    out = [points[0]]
    for target in points[1:]:
        cur = out[-1]
        step = 1 if target >= cur else -1
        while cur != target:
            cur += step
            out.append(cur)
    return tuple(out)


# shortest decompositions of each coefficient into unit-generator steps
_UNIT_WORDS: dict[tuple[int, ...], dict[Coeff, tuple[Coeff, ...]]] = {}


def _unit_words(group: Group) -> dict[Coeff, tuple[Coeff, ...]]:
    cached = _UNIT_WORDS.get(group.orders)
    if cached is not None:
        return cached
    letters: list[Coeff] = []
    for u in group.units():
        for cand in (u, group.neg(u)):
            if cand not in letters:
                letters.append(cand)
    words: dict[Coeff, tuple[Coeff, ...]] = {group.zero: ()}
    queue = deque([group.zero])
    while queue:
        a = queue.popleft()
        for u in letters:
            b = group.add(a, u)
            if b not in words:
                words[b] = words[a] + (u,)
                queue.append(b)
    _UNIT_WORDS[group.orders] = words
    return words


def _qp_plus_length(g: Element, subgroup: Subgroup) -> tuple[int, WalkPlan]:
    absolute = g.absolute_config()
    k = g.shift
    if absolute.is_zero:
        return abs(k), WalkPlan(_path([0, k]), (), abs(k))
    outside = [p for p, c in absolute.entries if c not in subgroup.elements]
    if not outside or min(outside) >= min(0, k):
        apply_at = min(0, k)
        cost = abs(k) + 1
        visits = _path([0, k])
    else:
        apply_at = min(outside)
        cost = 1 + abs(apply_at) + abs(k - apply_at)
        visits = _path([0, apply_at, k])
    letter = absolute.shift(-apply_at)
    burst_index = visits.index(apply_at)
    return cost, WalkPlan(visits, ((burst_index, letter),), cost)


def _standard_length(g: Element) -> tuple[int, WalkPlan]:
    group = g.group
    absolute = g.absolute_config()
    k = g.shift
    words = _unit_words(group)
    lamp_cost = sum(len(words[c]) for _, c in absolute.entries)
    pts = list(absolute.support()) + [0, k]
    lo, hi = min(pts), max(pts)
    left_first = (hi - lo) + (0 - lo) + (hi - k)
    right_first = (hi - lo) + (hi - 0) + (k - lo)
    if left_first <= right_first:
        visits = _path([0, lo, hi, k])
        walk = left_first
    else:
        visits = _path([0, hi, lo, k])
        walk = right_first
    bursts = []
    for pos, coeff in absolute.entries:
        idx = visits.index(pos)
        for unit in words[coeff]:
            bursts.append((idx, Config.lamp(group, 0, unit)))
    return lamp_cost + walk, WalkPlan(visits, tuple(bursts), lamp_cost + walk)


def _lineal_length(g: Element) -> tuple[int, WalkPlan]:
    k = g.shift
    visits = _path([0, k])
    if g.config.is_zero:
        return abs(k), WalkPlan(visits, (), abs(k))
    cost = abs(k) + 1
    return cost, WalkPlan(visits, ((len(visits) - 1, g.config),), cost)


def word_length_with_plan(g: Element, genset: GenSet) -> tuple[int, WalkPlan | None]:
    """Exact word length plus a replayable witness (None for the trivial set)."""
    if g.group != genset.group:
        raise GroupMismatchError("element and generating set live over different groups")
    v = genset.variant
    if v == Variant.TRIVIAL:
        return (0 if g.is_identity else 1), None
    if v == Variant.STANDARD:
        return _standard_length(g)
    if v == Variant.LINEAL:
        return _lineal_length(g)
    if v == Variant.QP_PLUS:
        return _qp_plus_length(g, genset.subgroup)
    # minus side is the mirror image under t -> t^-1
    cost, plan = _qp_plus_length(g.mirror(), genset.subgroup)
    return cost, plan.mirror()


def word_length(g: Element, genset: GenSet) -> int:
    return word_length_with_plan(g, genset)[0]


def wordlen_qp(g: Element, subgroup: Subgroup, side: str = "plus") -> int:
    gs = GenSet.qp_plus(subgroup) if side == "plus" else GenSet.qp_minus(subgroup)
    return word_length(g, gs)


def wordlen_standard(g: Element) -> int:
    return word_length(g, GenSet.standard(g.group))


def wordlen_lineal(g: Element) -> int:
    return word_length(g, GenSet.lineal(g.group))


def busemann(g: Element) -> int:
    """Cursor drift: the homomorphism onto the shift factor."""
    return g.shift


def induced_distance(x: Element, y: Element, genset: GenSet) -> int:
    return word_length(x.inverse() * y, genset)


# ---------------------------------------------------------------------------
# Exhaustive BFS oracle
#
# States are (absolute config supported in [-W, W], cursor in [-Wc, Wc]).
# Cursor letters step the cursor; one base letter rewrites, at cursor c, any
# set of window positions subject to the variant's constraint relative to c,
# so a base step connects a state to its whole constraint-coset.  Cosets are
# swept once each, which keeps the total base-move work linear in the state
# space instead of quadratic.
# ---------------------------------------------------------------------------


def _resolve_state_limit(state_limit: int | None) -> int:
    if state_limit is not None:
        return state_limit
    env = os.environ.get(STATE_LIMIT_ENV)
    if env:
        return int(env)
    return DEFAULT_STATE_LIMIT


@dataclass
class DistanceTable:
    """Distances from the identity in the truncated Cayley graph."""

    genset: GenSet
    window: int
    cursor_bound: int
    _dist: list[int]
    _coeff_index: dict[Coeff, int]

    def encode(self, g: Element) -> int | None:
        absolute = g.absolute_config()
        w, wc = self.window, self.cursor_bound
        if not -wc <= g.shift <= wc:
            return None
        q = self.genset.group.size
        code = 0
        for pos, coeff in absolute.entries:
            if not -w <= pos <= w:
                return None
            code += self._coeff_index[coeff] * q ** (pos + w)
        return code * (2 * wc + 1) + (g.shift + wc)

    def distance(self, g: Element) -> int | None:
        idx = self.encode(g)
        if idx is None:
            raise WindowError(f"element {g} does not fit window W={self.window}, W'={self.cursor_bound}")
        d = self._dist[idx]
        return None if d < 0 else d


def bfs_distances(
    genset: GenSet,
    window: int,
    cursor_bound: int,
    state_limit: int | None = None,
) -> DistanceTable:
    group = genset.group
    q = group.size
    npos = 2 * window + 1
    ncur = 2 * cursor_bound + 1
    nconf = q**npos
    total = nconf * ncur
    limit = _resolve_state_limit(state_limit)
    if total > limit:
        raise StateLimitError(f"state space {total} exceeds limit {limit}")

    coeffs = sorted(group.elements())
    coeff_index = {c: i for i, c in enumerate(coeffs)}
    pow_ = [q**i for i in range(npos)]
    dist = [-1] * total
    start = 0 * ncur + cursor_bound
    dist[start] = 0

    if genset.variant == Variant.TRIVIAL:
        # every group element is a letter, so the graph has diameter 1
        for idx in range(total):
            if idx != start:
                dist[idx] = 1
        return DistanceTable(genset, window, cursor_bound, dist, coeff_index)

    unit_tables: list[list[int]] = []
    if genset.variant == Variant.STANDARD:
        letters: list[Coeff] = []
        for u in group.units():
            for cand in (u, group.neg(u)):
                if cand not in letters:
                    letters.append(cand)
        for u in letters:
            unit_tables.append([coeff_index[group.add(c, u)] for c in coeffs])

    coset_lists: list[list[int]] = []
    rep_index: list[int] = []
    if genset.variant in (Variant.QP_PLUS, Variant.QP_MINUS):
        h_elems = genset.subgroup.elements
        for c in coeffs:
            members = sorted(coeff_index[group.add(c, h)] for h in h_elems)
            coset_lists.append(members)
            rep_index.append(members[0])

    all_values = list(range(q))
    lineal_done = [False] * ncur
    coset_done: list[set[int]] = [set() for _ in range(ncur)]

    queue = deque([start])
    while queue:
        state = queue.popleft()
        d = dist[state]
        code, cu = divmod(state, ncur)
        nd = d + 1

        if cu + 1 < ncur and dist[state + 1] < 0:
            dist[state + 1] = nd
            queue.append(state + 1)
        if cu - 1 >= 0 and dist[state - 1] < 0:
            dist[state - 1] = nd
            queue.append(state - 1)

        if genset.variant == Variant.STANDARD:
            c = cu - cursor_bound
            if -window <= c <= window:
                i = c + window
                v = (code // pow_[i]) % q
                for table in unit_tables:
                    nv = table[v]
                    s2 = (code + (nv - v) * pow_[i]) * ncur + cu
                    if dist[s2] < 0:
                        dist[s2] = nd
                        queue.append(s2)
            continue

        if genset.variant == Variant.LINEAL:
            if lineal_done[cu]:
                continue
            lineal_done[cu] = True
            for code2 in range(nconf):
                s2 = code2 * ncur + cu
                if dist[s2] < 0:
                    dist[s2] = nd
                    queue.append(s2)
            continue

        # qp+ constrains window positions strictly below the cursor to move
        # inside their subgroup coset; qp- constrains those strictly above.
        c = cu - cursor_bound
        digits = []
        rem = code
        for _ in range(npos):
            rem, dv = divmod(rem, q)
            digits.append(dv)
        key = 0
        parts: list[list[int]] = []
        for i in range(npos):
            pos = i - window
            constrained = pos < c if genset.variant == Variant.QP_PLUS else pos > c
            v = digits[i]
            if constrained:
                key += rep_index[v] * pow_[i]
                parts.append([idx * pow_[i] for idx in coset_lists[v]])
            else:
                parts.append([idx * pow_[i] for idx in all_values])
        bucket = coset_done[cu]
        if key in bucket:
            continue
        bucket.add(key)
        for combo in itertools.product(*parts):
            s2 = sum(combo) * ncur + cu
            if dist[s2] < 0:
                dist[s2] = nd
                queue.append(s2)

    return DistanceTable(genset, window, cursor_bound, dist, coeff_index)


def bfs_word_length(
    g: Element,
    genset: GenSet,
    window: int,
    cursor_bound: int,
    state_limit: int | None = None,
) -> int | None:
    """Exact in-window distance from the identity, or None if unreachable."""
    table = bfs_distances(genset, window, cursor_bound, state_limit)
    return table.distance(g)


# ---------------------------------------------------------------------------
# Four-point hyperbolicity estimator (evidence, not a certificate)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DeltaEstimate:
    radius: int
    samples: int
    seed: int
    max_defect: int

    @property
    def delta(self) -> Fraction:
        return Fraction(self.max_defect, 2)


def sample_ball_element(genset: GenSet, radius: int, window: int, rng: random.Random) -> Element:
    """Random element within distance `radius` of the identity.

    Rejection-samples sparse (absolute config, shift) pairs against the exact
    metric, which reaches ball shapes (lamps spread across both sides of the
    origin) that short random walks almost never produce.
    """
    group = genset.group
    nonzero = [c for c in sorted(group.elements()) if c != group.zero]
    for _ in range(200):
        entries: dict[int, Coeff] = {}
        for _ in range(rng.randint(0, 3)):
            entries[rng.randint(-window, window)] = nonzero[rng.randrange(len(nonzero))]
        shift = rng.randint(-window, window)
        absolute = Config.make(group, entries)
        g = Element(group, absolute.shift(-shift), shift)
        if word_length(g, genset) <= radius:
            return g
    return Element.identity(group)


def delta_four_point(
    genset: GenSet,
    radius: int,
    samples: int,
    seed: int = 0,
    sample_window: int | None = None,
) -> DeltaEstimate:
    """Max four-point defect over seeded random quadruples in the R-ball."""
    if radius < 0 or samples < 1:
        raise ValueError("sampling domain empty")
    rng = random.Random(seed)
    window = sample_window if sample_window is not None else max(radius, 1)
    max_defect = 0
    for _ in range(samples):
        w, x, y, z = (sample_ball_element(genset, radius, window, rng) for _ in range(4))
        s1 = induced_distance(w, x, genset) + induced_distance(y, z, genset)
        s2 = induced_distance(w, y, genset) + induced_distance(x, z, genset)
        s3 = induced_distance(w, z, genset) + induced_distance(x, y, genset)
        hi, mid, _ = sorted((s1, s2, s3), reverse=True)
        if hi - mid > max_defect:
            max_defect = hi - mid
    return DeltaEstimate(radius, samples, seed, max_defect)
