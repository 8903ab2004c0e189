"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line.  Run with `pytest -s tests/test_acceptance.py` to see the
lines; every criterion is exact at its stated tolerance and time budget."""

import itertools
import random
import time

from wreathscope.groups import (
    Config,
    Element,
    Group,
    subgroup_closure,
    trivial_subgroup,
)
from wreathscope.metrics import (
    GenSet,
    bfs_distances,
    busemann,
    delta_four_point,
    word_length,
    wordlen_qp,
)
from wreathscope.structures import build_b_poset, qp_count
from wreathscope.confining import (
    QSpec,
    check_confining,
    q_membership,
    recover_subgroup,
    validate_equivalence,
)


def report(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    tail = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {num} [{name}]: {status}{tail}")
    assert ok, f"criterion {num} failed: {detail}"


def proper_cyclic_subgroups(n: int):
    group = Group((n,))
    subs = [trivial_subgroup(group)]
    for d in range(2, n):
        if n % d == 0:
            subs.append(subgroup_closure(group, [(n // d,)]))
    return group, subs


def test_criterion_1_poset_counts():
    start = time.perf_counter()
    expected = {2: 2, 3: 2, 4: 4, 6: 6, 12: 10}
    ok = True
    for n, qp in expected.items():
        poset = build_b_poset(Group((n,)))
        counts = poset.kind_counts()
        ok &= counts.get("quasi-parabolic", 0) == qp == qp_count(n)
        ok &= counts.get("lineal", 0) == 1 and counts.get("elliptic", 0) == 1
        # shape: two reversed divisor lattices over a common lineal node
        divisors = [d for d in range(1, n) if n % d == 0]
        node_of = {}
        for d in divisors:
            h = (
                trivial_subgroup(Group((n,)))
                if d == 1
                else subgroup_closure(Group((n,)), [(n // d,)])
            )
            node_of[d] = h.label()
        for side in ("qp+", "qp-"):
            for d1, d2 in itertools.product(divisors, repeat=2):
                a, b = f"{side}:{node_of[d1]}", f"{side}:{node_of[d2]}"
                related = (b, a) in poset.less
                ok &= related == (d1 != d2 and d2 % d1 == 0)
        ok &= ("elliptic", "lineal") in poset.hasse
        for node in poset.nodes:
            if node.kind.value == "quasi-parabolic":
                ok &= ("lineal", node.id) in poset.less
        for x, y in poset.less:
            ok &= not (x.startswith("qp+") and y.startswith("qp-"))
            ok &= not (x.startswith("qp-") and y.startswith("qp+"))
    elapsed = time.perf_counter() - start
    report(1, "poset counts", ok and elapsed < 1.0, f"{elapsed:.2f}s")


def test_criterion_2_metric_oracle_equivalence():
    start = time.perf_counter()
    window, rmax = 3, 2
    mismatches = 0
    total = 0
    for n in (2, 3):
        group = Group((n,))
        triv = trivial_subgroup(group)
        full = subgroup_closure(group, [(1,)])
        gensets = [
            GenSet.standard(group),
            GenSet.lineal(group),
            GenSet.trivial(group),
            GenSet.qp_plus(triv),
            GenSet.qp_minus(triv),
            GenSet.qp_plus(full),
            GenSet.qp_minus(full),
        ]
        coeffs = sorted(group.elements())
        positions = list(range(-window, window + 1))
        for gs in gensets:
            base = bfs_distances(gs, window, window + rmax)
            stab = bfs_distances(gs, window + 1, window + rmax + 1)
            for values in itertools.product(coeffs, repeat=len(positions)):
                absolute = Config.make(group, dict(zip(positions, values)))
                for k in range(-rmax, rmax + 1):
                    g = Element(group, absolute.shift(-k), k)
                    cf = word_length(g, gs)
                    d1 = base.distance(g)
                    d2 = stab.distance(g)
                    total += 1
                    if not (cf == d1 == d2):
                        mismatches += 1
    elapsed = time.perf_counter() - start
    report(
        2,
        "metric-oracle equivalence",
        mismatches == 0 and elapsed < 60.0,
        f"{total} elements, {mismatches} mismatches, {elapsed:.1f}s",
    )


def test_criterion_3_witness_growth():
    group = Group((2,))
    h = trivial_subgroup(group)
    full = subgroup_closure(group, [(1,)])
    ok = True
    for i in range(1, 51):
        f_i = Element.from_config(Config.lamp(group, -i, (1,)))
        ok &= wordlen_qp(f_i, h, "plus") == 2 * i + 1
        for k in (h, full):
            ok &= wordlen_qp(f_i, k, "minus") == 1
    for i in (1, 2, 3):
        f_i = Element.from_config(Config.lamp(group, -i, (1,)))
        gs = GenSet.qp_plus(h)
        oracle = bfs_distances(gs, 4, 6).distance(f_i)
        ok &= oracle == 2 * i + 1
    report(3, "witness growth", ok)


def test_criterion_4_confining_verdicts():
    start = time.perf_counter()
    ok = True
    for n in (2, 3, 4, 6, 8, 12):
        group, subs = proper_cyclic_subgroups(n)
        for sub in subs:
            rep = check_confining(QSpec.qh(sub), "t", window=4)
            ok &= rep.verdict == "strictly-confining" and rep.cond_c.n0 == 0
            rep = check_confining(QSpec.qh(sub, side="minus"), "t^-1", window=4)
            ok &= rep.verdict == "strictly-confining" and rep.cond_c.n0 == 0
    rep = check_confining(QSpec.fullbase(Group((3,))), "t", window=4)
    ok &= rep.verdict == "confining-not-strict" and rep.lineal
    for w in (4, 6):
        rep = check_confining(QSpec.counterexample(window=w), "t", window=w)
        ok &= rep.verdict == "strictly-confining" and rep.cond_a.witness is not None
    elapsed = time.perf_counter() - start
    report(4, "confining verdicts", ok and elapsed < 30.0, f"{elapsed:.1f}s")


def test_criterion_5_recovery():
    ok = True
    worst = 0.0
    z12 = Group((12,))
    cases = {
        1: trivial_subgroup(z12),
        2: subgroup_closure(z12, [(6,)]),
        3: subgroup_closure(z12, [(4,)]),
        4: subgroup_closure(z12, [(3,)]),
        6: subgroup_closure(z12, [(2,)]),
    }
    for d, h in cases.items():
        t0 = time.perf_counter()
        res = recover_subgroup(QSpec.qh(h), window=8)
        worst = max(worst, time.perf_counter() - t0)
        ok &= res.subgroup.elements == h.elements and res.certified
    t0 = time.perf_counter()
    res = recover_subgroup(QSpec.z8_example_family(8), window=8)
    worst = max(worst, time.perf_counter() - t0)
    ok &= res.subgroup.sorted_elements() == ((0,), (2,), (4,), (6,))
    report(5, "subgroup recovery", ok and worst < 10.0, f"worst case {worst:.1f}s")


def test_criterion_6_counterexample_refutation():
    group = Group((2, 2))
    q = QSpec.counterexample(window=25)
    ok = True
    for gens in ([], [(0, 1)], [(1, 0)], [(1, 1)]):
        h = subgroup_closure(group, gens)
        rep = validate_equivalence(q, h, depth=20)
        ok &= not rep.consistent
        ok &= rep.refuted_family == "p_i"
        for idx, length in enumerate(rep.lengths):
            i = idx + 2
            member = Config.make(group, [(-i, (0, 1)), (-i + 1, (1, 0))])
            ok &= q_membership(member, q)
            ok &= length >= 2 * i - 1
    report(6, "counterexample refutation", ok)


def test_criterion_7_busemann_additivity():
    ok = True
    for orders in ((2,), (3,), (8,), (2, 2)):
        group = Group(orders)
        rng = random.Random(1000 + group.size)
        for _ in range(10_000):
            def rand_elem():
                entries = {
                    rng.randint(-4, 4): tuple(rng.randrange(n) for n in orders)
                    for _ in range(rng.randint(0, 3))
                }
                return Element(group, Config.make(group, entries), rng.randint(-5, 5))

            g1, g2 = rand_elem(), rand_elem()
            if busemann(g1 * g2) != busemann(g1) + busemann(g2):
                ok = False
                break
    report(7, "busemann additivity", ok)


def test_criterion_8_delta_evidence():
    start = time.perf_counter()
    group = Group((2,))
    quasi_tree = GenSet.qp_plus(trivial_subgroup(group))
    standard = GenSet.standard(group)
    radii = (6, 10, 14)
    qp_deltas = [delta_four_point(quasi_tree, r, 2000, seed=0).delta for r in radii]
    std_deltas = [delta_four_point(standard, r, 2000, seed=0).delta for r in radii]
    spread = max(qp_deltas) - min(qp_deltas)
    increasing = std_deltas[0] < std_deltas[1] < std_deltas[2]
    elapsed = time.perf_counter() - start
    report(
        8,
        "delta four-point evidence",
        spread <= 2 and increasing and elapsed < 120.0,
        f"qp {list(map(str, qp_deltas))} spread {spread}; "
        f"standard {list(map(str, std_deltas))}; {elapsed:.1f}s",
    )
