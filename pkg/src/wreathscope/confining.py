"""Finitely described base subsets and the shift-confinement calculus.

A QSpec describes a subset Q of the base group with decidable membership on
a window.  The checker verifies the three confinement conditions for the
shift action (containment of the shifted set, absorption of every element
after finitely many shifts, and re-entry of shifted sums), always reporting
the window a verdict depends on.  The saturation engine rebuilds elements of
Q from seeds using only moves those conditions justify, which is what both
subgroup recovery and lamp certification run on.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
import random
from dataclasses import dataclass, field, replace

from . import linalg
from .groups import (
    Coeff,
    Config,
    Element,
    Group,
    PolyParseError,
    Subgroup,
    format_poly,
    parse_poly,
    subgroup_closure,
)
from .metrics import WindowError, wordlen_qp

EXACT_ENUM_LIMIT = 60_000
PAIR_BUDGET = 2_000
SAMPLE_BUDGET = 1_500
SATURATION_CAP = 1_500
SUM_POOL_CAP = 256


class QSpecError(ValueError):
    """Malformed QSpec description."""


@dataclass(frozen=True)
class QSpec:
    """Finitely described subset of the base group.

    kinds: ``qh`` (values below/above the origin restricted to a subgroup),
    ``bplus``/``bminus`` (one-sided supports), ``fullbase`` (everything),
    ``span_counterexample`` (the product-group family whose membership is
    span membership over the two-element field), ``custom`` (seed configs
    plus closure flags; membership through modular span solving).
    """

    kind: str
    group: Group
    side: str = "plus"
    subgroup: Subgroup | None = None
    window: int = 8
    seeds: tuple[Config, ...] = ()
    shift_closed: bool = False
    sum_closed: bool = False
    bplus_closed: bool = False
    mirrored: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("qh", "bplus", "bminus", "fullbase", "span_counterexample", "custom"):
            raise QSpecError(f"unknown QSpec kind {self.kind!r}")
        if self.kind == "qh":
            if self.subgroup is None or self.subgroup.group != self.group:
                raise QSpecError("qh kind needs a subgroup of the same group")
            if self.side not in ("plus", "minus"):
                raise QSpecError("qh side must be plus or minus")
        if self.kind == "span_counterexample" and self.group.orders != (2, 2):
            raise QSpecError("the span counterexample lives over Z2xZ2")

    # -- factories ----------------------------------------------------------

    @staticmethod
    def qh(subgroup: Subgroup, side: str = "plus") -> "QSpec":
        return QSpec("qh", subgroup.group, side=side, subgroup=subgroup)

    @staticmethod
    def bplus(group: Group) -> "QSpec":
        return QSpec("bplus", group)

    @staticmethod
    def bminus(group: Group) -> "QSpec":
        return QSpec("bminus", group)

    @staticmethod
    def fullbase(group: Group) -> "QSpec":
        return QSpec("fullbase", group)

    @staticmethod
    def counterexample(window: int = 8) -> "QSpec":
        return QSpec("span_counterexample", Group((2, 2)), window=window)

    @staticmethod
    def custom(
        group: Group,
        seeds: tuple[Config, ...],
        window: int = 8,
        shift_closed: bool = True,
        sum_closed: bool = True,
        bplus_closed: bool = True,
    ) -> "QSpec":
        return QSpec(
            "custom",
            group,
            window=window,
            seeds=tuple(seeds),
            shift_closed=shift_closed,
            sum_closed=sum_closed,
            bplus_closed=bplus_closed,
        )

    @staticmethod
    def z8_example_family(window: int = 8) -> "QSpec":
        """Seed family 4t^-i + 2t^-(i-1) + t^-1 over Z8, taken with all
        closure flags so that the saturation moves stay inside the set."""
        z8 = Group((8,))
        seeds = []
        for i in range(2, window + 1):
            seeds.append(
                Config.make(z8, [(-i, (4,)), (-i + 1, (2,)), (-1, (1,))])
            )
        return QSpec.custom(z8, tuple(seeds), window=window)

    def label(self) -> str:
        if self.kind == "qh":
            side = "" if self.side == "plus" else "-"
            return f"qh{side}:{self.group.name}:{self.subgroup.label()}"
        if self.kind in ("bplus", "bminus", "fullbase"):
            return f"{self.kind}:{self.group.name}"
        if self.kind == "span_counterexample":
            return "counterexample" + ("~mirrored" if self.mirrored else "")
        return f"custom:{self.group.name}" + ("~mirrored" if self.mirrored else "")


def mirror_qspec(q: QSpec) -> QSpec:
    """The image of Q under the line flip; swaps the two shift directions."""
    if q.kind == "qh":
        return replace(q, side="minus" if q.side == "plus" else "plus")
    if q.kind == "bplus":
        return replace(q, kind="bminus")
    if q.kind == "bminus":
        return replace(q, kind="bplus")
    if q.kind == "fullbase":
        return q
    return replace(q, mirrored=not q.mirrored)


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

_SPAN_CACHE: dict[QSpec, object] = {}


def _counterexample_bits(cfg: Config, window: int) -> int:
    vec = 0
    for pos, coeff in cfg.entries:
        if pos >= 0:
            continue
        idx = (-pos - 1) * 2
        if coeff[0]:
            vec |= 1 << idx
        if coeff[1]:
            vec |= 1 << (idx + 1)
    return vec


def _counterexample_basis(window: int) -> list[int]:
    group = Group((2, 2))
    rows = []
    for d in range(2, window + 1):
        pattern = Config.make(group, [(-d, (0, 1)), (-d + 1, (1, 0))])
        rows.append(_counterexample_bits(pattern, window))
    # shift boundary: pushing a generator up to depth 1 leaves only (0,1)t^-1
    rows.append(_counterexample_bits(Config.make(group, [(-1, (0, 1))]), window))
    return linalg.gf2_basis(rows)


def _custom_coords(q: QSpec) -> list[int]:
    if q.bplus_closed:
        return list(range(-q.window, 0))
    return list(range(-q.window, q.window + 1))


def _custom_vector(q: QSpec, cfg: Config) -> tuple[int, ...] | None:
    coords = _custom_coords(q)
    index = {p: i for i, p in enumerate(coords)}
    vec = [0] * (len(coords) * q.group.rank)
    for pos, coeff in cfg.entries:
        if q.bplus_closed and pos >= 0:
            continue
        if pos not in index:
            return None
        for j, v in enumerate(coeff):
            vec[index[pos] * q.group.rank + j] = v
    return tuple(vec)


def _custom_generators(q: QSpec) -> list[tuple[int, ...]]:
    vectors: list[tuple[int, ...]] = []
    seen = set()
    shifts = range(0, 2 * q.window + 2) if q.shift_closed else range(0, 1)
    for seed in q.seeds:
        for j in shifts:
            shifted = seed.shift(j)
            kept = shifted.negative_part() if q.bplus_closed else shifted
            vec = _custom_vector(q, kept)
            if vec is None:
                continue  # shifted generator escapes the window
            if vec not in seen:
                seen.add(vec)
                vectors.append(vec)
            if q.bplus_closed and kept.is_zero:
                break
    return vectors


def _custom_solver(q: QSpec):
    cached = _SPAN_CACHE.get(q)
    if cached is not None:
        return cached
    gens = _custom_generators(q)
    if q.sum_closed:
        moduli = tuple(
            q.group.orders[j]
            for _ in _custom_coords(q)
            for j in range(q.group.rank)
        )
        solver = ("span", linalg.scaled_span(gens, moduli), moduli)
    else:
        solver = ("exact", set(gens) | {tuple([0] * len(_custom_coords(q)) * q.group.rank)}, None)
    _SPAN_CACHE[q] = solver
    return solver


def q_membership(f: Config, q: QSpec) -> bool:
    """Exact membership of a window config in Q."""
    if f.group != q.group:
        raise QSpecError("config and QSpec live over different groups")
    if q.mirrored:
        return q_membership(f.mirror(), replace(q, mirrored=False))

    if q.kind == "qh":
        h = q.subgroup.elements
        if q.side == "plus":
            return all(c in h for p, c in f.entries if p < 0)
        return all(c in h for p, c in f.entries if p > 0)
    if q.kind == "bplus":
        return f.min_support() is None or f.min_support() >= 0
    if q.kind == "bminus":
        return f.max_support() is None or f.max_support() <= 0
    if q.kind == "fullbase":
        return True

    if q.kind == "span_counterexample":
        neg = f.negative_part()
        if not neg.is_zero and neg.min_support() < -q.window:
            raise WindowError(f"support of {f} exceeds configured window {q.window}")
        cache_key = replace(q, seeds=())
        basis = _SPAN_CACHE.get(cache_key)
        if basis is None:
            basis = _counterexample_basis(q.window)
            _SPAN_CACHE[cache_key] = basis
        return linalg.gf2_in_span(_counterexample_bits(neg, q.window), basis)

    # custom
    kept = f.negative_part() if q.bplus_closed else f
    if not kept.is_zero:
        lo = kept.min_support()
        hi = kept.max_support()
        if lo < -q.window or (not q.bplus_closed and hi > q.window):
            raise WindowError(f"support of {f} exceeds configured window {q.window}")
    vec = _custom_vector(q, kept)
    mode, solver, moduli = _custom_solver(q)
    if mode == "span":
        return linalg.scaled_contains(solver, vec, moduli)
    return vec in solver


# ---------------------------------------------------------------------------
# Enumeration and sampling of members
# ---------------------------------------------------------------------------


def window_configs(group: Group, window: int):
    coeffs = sorted(group.elements())
    positions = list(range(-window, window + 1))
    for values in itertools.product(coeffs, repeat=len(positions)):
        yield Config.make(group, dict(zip(positions, values)))


def _window_config_count(group: Group, window: int) -> int:
    return group.size ** (2 * window + 1)


def sample_config(group: Group, window: int, rng: random.Random) -> Config:
    entries = {}
    for _ in range(rng.randint(0, 4)):
        entries[rng.randint(-window, window)] = tuple(
            rng.randrange(n) for n in group.orders
        )
    return Config.make(group, entries)


def sample_member(q: QSpec, window: int, rng: random.Random) -> Config:
    """Random element of Q within the window, correct by construction."""
    if q.mirrored:
        return sample_member(replace(q, mirrored=False), window, rng).mirror()
    group = q.group
    if q.kind == "fullbase":
        return sample_config(group, window, rng)
    if q.kind in ("bplus", "bminus"):
        cfg = sample_config(group, window, rng)
        part = cfg.nonnegative_part() if q.kind == "bplus" else Config(
            group, tuple((p, c) for p, c in cfg.entries if p <= 0)
        )
        return part
    if q.kind == "qh":
        h = q.subgroup.sorted_elements()
        entries = {}
        for _ in range(rng.randint(0, 4)):
            pos = rng.randint(-window, window)
            restricted = pos < 0 if q.side == "plus" else pos > 0
            if restricted:
                entries[pos] = h[rng.randrange(len(h))]
            else:
                entries[pos] = tuple(rng.randrange(n) for n in group.orders)
        return Config.make(group, entries)
    if q.kind == "span_counterexample":
        cfg = Config.zero(group)
        for d in range(2, min(window, q.window) + 1):
            if rng.random() < 0.4:
                cfg = cfg + Config.make(group, [(-d, (0, 1)), (-d + 1, (1, 0))])
        if rng.random() < 0.3:
            cfg = cfg + Config.make(group, [(-1, (0, 1))])
        return cfg + sample_config(group, window, rng).nonnegative_part()
    # custom: random combination of seeds under the declared closure
    cfg = Config.zero(group)
    pool = list(q.seeds)
    if pool:
        picks = rng.randint(1, 2) if q.sum_closed else 1
        for _ in range(picks):
            s = pool[rng.randrange(len(pool))]
            if q.shift_closed:
                s = s.shift(rng.randint(0, max(window // 2, 1)))
            cfg = cfg + s if q.sum_closed else s
    if q.bplus_closed:
        cfg = cfg + sample_config(group, window, rng).nonnegative_part()
    return cfg


def iter_members(q: QSpec, window: int, limit: int = EXACT_ENUM_LIMIT):
    """All members with support in the window, or None if too many configs."""
    if _window_config_count(q.group, window) > limit:
        return None
    return [cfg for cfg in window_configs(q.group, window) if q_membership(cfg, q)]


# ---------------------------------------------------------------------------
# Confinement checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    passed: bool
    mode: str
    checked: int
    witness: Config | None = None
    violation: Config | None = None
    max_n: int | None = None
    n0: int | None = None

    def to_dict(self) -> dict:
        out = {"passed": self.passed, "mode": self.mode, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = format_poly(self.witness)
        if self.violation is not None:
            out["violation"] = format_poly(self.violation)
        if self.max_n is not None:
            out["max_n"] = self.max_n
        if self.n0 is not None:
            out["n0"] = self.n0
        return out


@dataclass(frozen=True)
class ConfiningReport:
    qspec: str
    direction: str
    window: int
    cond_a: ConditionReport
    cond_b: ConditionReport
    cond_c: ConditionReport
    verdict: str  # strictly-confining | confining-not-strict | not-confining | inconclusive

    @property
    def lineal(self) -> bool:
        return self.verdict == "confining-not-strict"

    def to_dict(self) -> dict:
        return {
            "qspec": self.qspec,
            "direction": self.direction,
            "window": self.window,
            "cond_a": self.cond_a.to_dict(),
            "cond_b": self.cond_b.to_dict(),
            "cond_c": self.cond_c.to_dict(),
            "verdict": self.verdict,
            "lineal": self.lineal,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _single_lamps(group: Group, lo: int, hi: int) -> list[Config]:
    out = []
    for pos in range(lo, hi + 1):
        for coeff in sorted(group.elements()):
            if coeff != group.zero:
                out.append(Config.lamp(group, pos, coeff))
    return out


def check_confining(
    q: QSpec,
    direction: str = "t",
    window: int = 4,
    n0_max: int = 4,
    sample_budget: int = SAMPLE_BUDGET,
    seed: int = 0,
) -> ConfiningReport:
    """Window-truncated verification of the three confinement conditions."""
    if direction not in ("t", "t^-1"):
        raise ValueError("direction must be 't' or 't^-1'")
    work = mirror_qspec(q) if direction == "t^-1" else q

    rng = random.Random(seed)
    members = iter_members(work, window)
    if members is not None:
        mode = "exact"
        pool = members
    else:
        mode = "sampled"
        pool = [sample_member(work, window, rng) for _ in range(sample_budget)]
        seen = set()
        deduped = []
        for cfg in pool:
            if cfg not in seen:
                seen.add(cfg)
                deduped.append(cfg)
        pool = deduped

    def member(cfg: Config) -> bool | None:
        # None: undecidable at this window (mirrored kinds deepen under shift)
        try:
            return q_membership(cfg, work)
        except WindowError:
            return None

    # condition (a): the shifted set stays inside Q, strictness witness search
    violation = None
    for cfg in pool:
        if cfg.max_support() is not None and cfg.max_support() >= window:
            continue
        if member(cfg.shift(1)) is False:
            violation = cfg
            break
    witness = None
    if violation is None:
        sweep = [Config.lamp(work.group, pos, c)
                 for pos in list(range(0, window + 1)) + list(range(-1, -window, -1))
                 for c in sorted(work.group.elements()) if c != work.group.zero]
        candidates = [c for c in sweep if member(c)]
        candidates += [c for c in pool if c.min_support() is None or c.min_support() > -window]
        for cfg in candidates:
            if member(cfg.shift(-1)) is False:
                witness = cfg
                break
    cond_a = ConditionReport(
        passed=violation is None,
        mode=mode,
        checked=len(pool),
        witness=witness,
        violation=violation,
    )

    # condition (b): every window config is absorbed after at most 2W shifts
    if _window_config_count(work.group, window) <= EXACT_ENUM_LIMIT:
        b_pool = list(window_configs(work.group, window))
        b_mode = "exact"
    else:
        b_pool = _single_lamps(work.group, -window, window)
        b_pool += [sample_config(work.group, window, rng) for _ in range(sample_budget)]
        b_mode = "sampled"
    max_n = 0
    b_violation = None
    b_undecided = 0
    for cfg in b_pool:
        absorbed = False
        hit_window = False
        for n in range(0, 2 * window + 1):
            got = member(cfg.shift(n))
            if got is None:
                hit_window = True
                break  # larger shifts only move further outside the window
            if got:
                absorbed = True
                max_n = max(max_n, n)
                break
        if absorbed:
            continue
        if hit_window:
            b_undecided += 1
        else:
            b_violation = cfg
            break
    cond_b = ConditionReport(
        passed=b_violation is None and b_undecided == 0,
        mode=b_mode,
        checked=len(b_pool),
        violation=b_violation,
        max_n=None if (b_violation is not None or b_undecided) else max_n,
    )

    # condition (c): one uniform shift returns pairwise sums to Q
    if members is not None and len(members) ** 2 <= PAIR_BUDGET * 100:
        pairs = list(itertools.product(members, repeat=2))
        c_mode = "exact"
    else:
        pairs = [
            (sample_member(work, window, rng), sample_member(work, window, rng))
            for _ in range(min(sample_budget, PAIR_BUDGET))
        ]
        c_mode = "sampled"
    n0_found = None
    for n0 in range(0, n0_max + 1):
        ok = True
        for f, g in pairs:
            if member((f + g).shift(n0)) is False:
                ok = False
                break
        if ok:
            n0_found = n0
            break
    cond_c = ConditionReport(
        passed=n0_found is not None,
        mode=c_mode,
        checked=len(pairs),
        n0=n0_found,
    )

    if not cond_a.passed:
        verdict = "not-confining"
    elif cond_b.passed and cond_c.passed:
        verdict = "strictly-confining" if witness is not None else "confining-not-strict"
    else:
        verdict = "inconclusive"

    def maybe_mirror(rep: ConditionReport) -> ConditionReport:
        if direction == "t":
            return rep
        return replace(
            rep,
            witness=rep.witness.mirror() if rep.witness is not None else None,
            violation=rep.violation.mirror() if rep.violation is not None else None,
        )

    return ConfiningReport(
        qspec=q.label(),
        direction=direction,
        window=window,
        cond_a=maybe_mirror(cond_a),
        cond_b=maybe_mirror(cond_b),
        cond_c=maybe_mirror(cond_c),
        verdict=verdict,
    )


# ---------------------------------------------------------------------------
# Saturation: rebuild Q's elements from seeds with condition-justified moves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    config: Config
    rule: str  # seed | shift | sum | truncate
    parents: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "config": format_poly(self.config),
            "rule": self.rule,
            "parents": list(self.parents),
        }


@dataclass
class SaturationState:
    qspec: QSpec
    window: int
    n0: int
    known: dict[Config, int] = field(default_factory=dict)
    trace: list[TraceEntry] = field(default_factory=list)
    partial: bool = False
    iterations: int = 0
    rejected: int = 0

    def certified_lamps(self) -> list[tuple[int, Coeff]]:
        out = []
        for cfg in self.known:
            if len(cfg.entries) == 1:
                out.append(cfg.entries[0])
        return sorted(out)

    def deep_coefficients(self, depth: int) -> set[Coeff]:
        coeffs = set()
        for cfg in self.known:
            for pos, c in cfg.entries:
                if pos <= -depth:
                    coeffs.add(c)
        return coeffs

    def to_dict(self) -> dict:
        return {
            "qspec": self.qspec.label(),
            "window": self.window,
            "n0": self.n0,
            "known": sorted(format_poly(cfg) for cfg in self.known),
            "trace": [t.to_dict() for t in self.trace],
            "certified_lamps": [
                [pos, self.qspec.group.format_coeff(c)] for pos, c in self.certified_lamps()
            ],
            "partial": self.partial,
            "iterations": self.iterations,
            "rejected": self.rejected,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def seed_configs(q: QSpec, window: int) -> list[Config]:
    """Finite membership-checked seed family for the saturation engine."""
    if q.mirrored:
        return [s.mirror() for s in seed_configs(replace(q, mirrored=False), window)]
    group = q.group
    seeds: list[Config] = [Config.zero(group)]
    if q.kind == "qh":
        h = [c for c in q.subgroup.sorted_elements() if c != group.zero]
        neg, pos = (h, None) if q.side == "plus" else (None, h)
        for i in range(1, window + 1):
            for c in neg if neg is not None else []:
                seeds.append(Config.lamp(group, -i, c))
            for c in pos if pos is not None else []:
                seeds.append(Config.lamp(group, i, c))
        free_lo, free_hi = (0, window) if q.side == "plus" else (-window, 0)
        seeds.extend(_single_lamps(group, free_lo, free_hi))
    elif q.kind == "bplus":
        seeds.extend(_single_lamps(group, 0, window))
    elif q.kind == "bminus":
        seeds.extend(_single_lamps(group, -window, 0))
    elif q.kind == "fullbase":
        seeds.extend(_single_lamps(group, -window, window))
    elif q.kind == "span_counterexample":
        for i in range(2, window + 1):
            seeds.append(Config.make(group, [(-i, (0, 1)), (-i + 1, (1, 0))]))
        seeds.append(Config.make(group, [(-1, (0, 1))]))
        seeds.extend(_single_lamps(group, 0, window))
    else:
        seeds.extend(q.seeds)
        if q.bplus_closed:
            seeds.extend(_single_lamps(group, 0, window))
    return [s for s in seeds if q_membership(s, q)]


def saturate(
    q: QSpec,
    window: int = 8,
    iteration_cap: int = SATURATION_CAP,
    n0: int = 0,
) -> SaturationState:
    """Bounded closure of the seed family under shift, truncate-to-negative,
    and shifted pairwise sums; every derived config is membership-checked
    before it is admitted, so the state stays sound even for ill-behaved subsets."""
    state = SaturationState(q, window, n0)
    counter = itertools.count()
    frontier: list[tuple[bool, int, int, int]] = []
    pool: list[tuple[Config, int, bool]] = []  # small configs used as sum partners

    # sums of two one-sided configs never touch the deep coefficients, so
    # pool partners without negative support only for the kinds whose whole
    # content is one-sided
    one_sided_sums = q.kind in ("bplus", "bminus", "fullbase")

    def admit(cfg: Config, rule: str, parents: tuple[int, ...]) -> None:
        if cfg in state.known:
            return
        if cfg.min_support() is not None and cfg.min_support() < -window:
            return
        if cfg.max_support() is not None and cfg.max_support() > window:
            return
        try:
            ok = q_membership(cfg, q)
        except WindowError:
            return
        if not ok:
            state.rejected += 1
            return
        idx = len(state.trace)
        state.trace.append(TraceEntry(cfg, rule, parents))
        state.known[cfg] = idx
        # configs carrying negative terms drive the recovery moves, so they
        # pop ahead of the one-sided tail that only pads out the closure
        one_sided = cfg.min_support() is None or cfg.min_support() >= 0
        heapq.heappush(frontier, (one_sided, len(cfg.entries), next(counter), idx))
        if len(cfg.entries) <= 3 and len(pool) < SUM_POOL_CAP:
            if one_sided_sums or not one_sided:
                pool.append((cfg, idx, one_sided))

    for s in seed_configs(q, window):
        admit(s, "seed", ())

    while frontier and state.iterations < iteration_cap:
        state.iterations += 1
        _, _, _, idx = heapq.heappop(frontier)
        cfg = state.trace[idx].config
        # shift move: condition (a)
        admit(cfg.shift(1), "shift", (idx,))
        # truncate move: add the inverse of the non-negative tail, then shift
        tail = cfg.nonnegative_part()
        if not tail.is_zero:
            admit((cfg - tail).shift(n0), "truncate", (idx,))
        # repeated self-sums eliminate coefficients by their orders
        if n0 == 0 and cfg.entries:
            top = max(q.group.order_of(c) for _, c in cfg.entries)
            for k in range(2, top + 1):
                admit(cfg.scale(k), "sum", (idx, idx))
        else:
            admit((cfg + cfg).shift(n0), "sum", (idx, idx))
        # pairwise sums: condition (c)
        for other, oidx, _ in pool:
            admit((cfg + other).shift(n0), "sum", (idx, oidx))

    state.partial = bool(frontier)
    return state


# ---------------------------------------------------------------------------
# Subgroup recovery and equivalence validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RecoveryResult:
    subgroup: Subgroup
    certified: bool
    depth: int
    window: int
    state: SaturationState

    def to_dict(self) -> dict:
        group = self.subgroup.group
        return {
            "subgroup": [group.format_coeff(c) for c in self.subgroup.sorted_elements()],
            "generators": [group.format_coeff(c) for c in self.subgroup.minimal_generators()],
            "certified": self.certified,
            "depth": self.depth,
            "window": self.window,
            "deep_coefficients": sorted(
                group.format_coeff(c) for c in self.state.deep_coefficients(self.depth)
            ),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def recover_subgroup(
    q: QSpec,
    window: int = 8,
    depth: int | None = None,
    iteration_cap: int = SATURATION_CAP,
    n0: int = 0,
) -> RecoveryResult:
    """Extract the subgroup carried by deep coefficients of Q's elements.

    Callers should have checked that the shift action is strictly confining;
    the certification flag reports whether the saturation engine rebuilt the
    full ladder of deep lamps for a maximal-order element of the answer.
    """
    if depth is None:
        depth = math.ceil(window / 2)
    if depth >= window or depth < 1:
        raise ValueError(f"depth threshold must be in [1, window), got {depth}")
    state = saturate(q, window, iteration_cap=iteration_cap, n0=n0)
    coeffs = state.deep_coefficients(depth)
    subgroup = subgroup_closure(q.group, sorted(coeffs))
    if subgroup.is_trivial:
        certified = True
    else:
        h = subgroup.max_order_element()
        targets = [Config.lamp(q.group, -i, h) for i in range(1, window + 1)]
        certified = all(t in state.known for t in targets)
    return RecoveryResult(subgroup, certified, depth, window, state)


@dataclass(frozen=True)
class EquivalenceReport:
    consistent: bool
    refuted_family: str | None
    family: tuple[str, ...]
    lengths: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "refuted_family": self.refuted_family,
            "family": list(self.family),
            "lengths": list(self.lengths),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def validate_equivalence(q: QSpec, subgroup: Subgroup, depth: int = 20) -> EquivalenceReport:
    """Probe whether Q's structure can match the subgroup structure.

    Families of Q-members have length 1 in {Q, t}; if their lengths in the
    subgroup structure grow past a linear threshold the equivalence is
    refuted with that family as the witness.
    """
    group = q.group
    side = "plus"
    if q.kind == "qh" and q.side == "minus":
        side = "minus"

    families: list[tuple[str, list[Config]]] = []
    if q.kind == "span_counterexample" and not q.mirrored:
        families.append(
            (
                "p_i",
                [
                    Config.make(group, [(-i, (0, 1)), (-i + 1, (1, 0))])
                    for i in range(2, depth + 2)
                ],
            )
        )
    for g0 in sorted(group.elements()):
        if g0 == group.zero:
            continue
        name = f"lamp {group.format_coeff(g0)}"
        if side == "plus":
            fam = [Config.lamp(group, -i, g0) for i in range(1, depth + 1)]
        else:
            fam = [Config.lamp(group, i, g0) for i in range(1, depth + 1)]
        families.append((name, fam))

    for name, fam in families:
        try:
            if not all(q_membership(cfg, q) for cfg in fam):
                continue
        except WindowError:
            continue
        lengths = [wordlen_qp(Element.from_config(cfg), subgroup, side) for cfg in fam]
        tail = lengths[len(lengths) // 2 :]
        growing = all(b > a for a, b in zip(tail, tail[1:])) and lengths[-1] >= depth
        if growing:
            return EquivalenceReport(
                False,
                name,
                tuple(format_poly(cfg) for cfg in fam),
                tuple(lengths),
            )
    return EquivalenceReport(True, None, (), ())
