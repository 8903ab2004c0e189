"""The poset of hyperbolic structures carried by a wreath product over Z.

For a finite abelian coefficient group G the poset contains one elliptic
node, one lineal node, and two incomparable copies of the proper-subgroup
poset of G (one per shift direction), ordered by domination with subgroup
inclusion reversed.  For cyclic G this is the complete classification; for
other G it is a guaranteed sub-poset only.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum

from .groups import Config, Element, Group, Subgroup, subgroup_closure
from .metrics import GenSet, Variant, word_length


class StructureKind(str, Enum):
    ELLIPTIC = "elliptic"
    LINEAL = "lineal"
    QUASI_PARABOLIC = "quasi-parabolic"
    GENERAL_TYPE = "general-type"  # reserved: never instantiated here


_KIND_BY_VARIANT = {
    Variant.TRIVIAL: StructureKind.ELLIPTIC,
    Variant.LINEAL: StructureKind.LINEAL,
    Variant.QP_PLUS: StructureKind.QUASI_PARABOLIC,
    Variant.QP_MINUS: StructureKind.QUASI_PARABOLIC,
}


@dataclass(frozen=True)
class StructureNode:
    id: str
    kind: StructureKind
    genset: GenSet

    @staticmethod
    def from_genset(genset: GenSet) -> "StructureNode":
        kind = _KIND_BY_VARIANT[genset.variant]
        ident = "elliptic" if genset.variant == Variant.TRIVIAL else genset.label()
        return StructureNode(ident, kind, genset)


class Relation(str, Enum):
    EQUIVALENT = "equivalent"
    LESS = "x<y"
    GREATER = "y<x"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class BPoset:
    group: Group
    nodes: tuple[StructureNode, ...]
    less: frozenset[tuple[str, str]]
    hasse: tuple[tuple[str, str], ...]

    @property
    def complete(self) -> bool:
        """Whether this poset is the full classification (cyclic G)."""
        return self.group.is_cyclic

    @property
    def scope_label(self) -> str:
        return "complete" if self.complete else "within-B(G)"

    def node(self, node_id: str) -> StructureNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(f"no node {node_id!r} in this poset")

    def kind_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for n in self.nodes:
            counts[n.kind.value] = counts.get(n.kind.value, 0) + 1
        return counts


def enumerate_subgroups(group: Group, proper_only: bool = False) -> list[Subgroup]:
    """All subgroups by closure search, sorted by (order, element list)."""
    found: dict[frozenset, Subgroup] = {}
    trivial = subgroup_closure(group, [])
    found[trivial.elements] = trivial
    frontier = [trivial]
    while frontier:
        sub = frontier.pop()
        for x in group.elements():
            if x in sub.elements:
                continue
            bigger = subgroup_closure(group, tuple(sub.sorted_elements()) + (x,))
            if bigger.elements not in found:
                found[bigger.elements] = bigger
                frontier.append(bigger)
    subs = sorted(found.values(), key=lambda s: s.sort_key())
    if proper_only:
        subs = [s for s in subs if s.is_proper]
    return subs


def qp_count(n: int) -> int:
    """Quasi-parabolic structure count for a cyclic coefficient group Z_n."""
    if n < 2:
        raise ValueError("cyclic order must be >= 2")
    return 2 * sum(1 for d in range(1, n) if n % d == 0)


def transitive_reduction(ids: list[str], less: frozenset[tuple[str, str]]) -> tuple[tuple[str, str], ...]:
    covers = []
    for x, y in sorted(less):
        if not any((x, z) in less and (z, y) in less for z in ids):
            covers.append((x, y))
    return tuple(covers)


def build_b_poset(group: Group) -> BPoset:
    subs = enumerate_subgroups(group, proper_only=True)
    nodes = [
        StructureNode.from_genset(GenSet.trivial(group)),
        StructureNode.from_genset(GenSet.lineal(group)),
    ]
    plus = {s: StructureNode.from_genset(GenSet.qp_plus(s)) for s in subs}
    minus = {s: StructureNode.from_genset(GenSet.qp_minus(s)) for s in subs}
    nodes.extend(plus.values())
    nodes.extend(minus.values())

    less: set[tuple[str, str]] = set()
    elliptic, lineal = nodes[0].id, nodes[1].id
    less.add((elliptic, lineal))
    for side in (plus, minus):
        for s, node in side.items():
            less.add((elliptic, node.id))
            less.add((lineal, node.id))
            for t, other in side.items():
                # subgroup inclusion reverses: the larger subgroup sits lower
                if s != t and t.elements < s.elements:
                    less.add((node.id, other.id))

    ids = [n.id for n in nodes]
    frozen = frozenset(less)
    return BPoset(group, tuple(nodes), frozen, transitive_reduction(ids, frozen))


def compare_exact(poset: BPoset, x_id: str, y_id: str) -> Relation:
    """Order relation between two nodes of the same poset."""
    x, y = poset.node(x_id), poset.node(y_id)  # raises on foreign nodes
    if x.id == y.id:
        return Relation.EQUIVALENT
    if (x.id, y.id) in poset.less:
        return Relation.LESS
    if (y.id, x.id) in poset.less:
        return Relation.GREATER
    return Relation.INCOMPARABLE


# ---------------------------------------------------------------------------
# Empirical comparison: measure letters of one set in the metric of another
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DominationEvidence:
    bounded: bool
    sup: int | None
    sequence: tuple[int, ...]

    def describe(self, depth: int) -> str:
        if self.bounded:
            return f"bounded up to depth {depth} (sup {self.sup})"
        return f"growing {list(self.sequence)}"


@dataclass(frozen=True)
class ComparisonEvidence:
    x: str
    y: str
    window: int
    depth: int
    sup_x_in_y: DominationEvidence
    sup_y_in_x: DominationEvidence


_GEN_ENUM_CAP = 2048
_WINDOW_LETTER_CACHE: dict[tuple[GenSet, int], list[Element]] = {}


def _window_letters(genset: GenSet, window: int) -> list[Element]:
    """Base letters of the set with support inside the window, capped."""
    cached = _WINDOW_LETTER_CACHE.get((genset, window))
    if cached is not None:
        return cached
    group = genset.group
    v = genset.variant
    out: list[Element] = []
    if v == Variant.STANDARD:
        for u in group.units():
            out.append(Element.from_config(Config.lamp(group, 0, u)))
            out.append(Element.from_config(Config.lamp(group, 0, group.neg(u))))
        return out
    positions = list(range(-window, window + 1))
    coeffs = sorted(group.elements())
    h = genset.subgroup.elements if genset.subgroup is not None else None
    total = 0
    for values in itertools.product(coeffs, repeat=len(positions)):
        cfg = Config.make(group, dict(zip(positions, values)))
        if cfg.is_zero:
            continue
        if v == Variant.QP_PLUS and any(p < 0 and c not in h for p, c in cfg.entries):
            continue
        if v == Variant.QP_MINUS and any(p > 0 and c not in h for p, c in cfg.entries):
            continue
        out.append(Element.from_config(cfg))
        total += 1
        if total >= _GEN_ENUM_CAP:
            break
    _WINDOW_LETTER_CACHE[(genset, window)] = out
    return out


def _family_letters(genset: GenSet, index: int) -> list[Element]:
    """Deep single-lamp (and shift) letters of the set at depth `index`."""
    group = genset.group
    v = genset.variant
    out: list[Element] = []
    nonzero = [c for c in sorted(group.elements()) if c != group.zero]
    if v == Variant.STANDARD:
        return out
    if v == Variant.TRIVIAL:
        out.append(Element.shift_only(group, index))
        out.append(Element.shift_only(group, -index))
    for c in nonzero:
        if v in (Variant.LINEAL, Variant.TRIVIAL):
            allowed_neg = allowed_pos = True
        elif v == Variant.QP_PLUS:
            allowed_neg = c in genset.subgroup.elements
            allowed_pos = True
        else:
            allowed_neg = True
            allowed_pos = c in genset.subgroup.elements
        if allowed_neg:
            out.append(Element.from_config(Config.lamp(group, -index, c)))
        if allowed_pos:
            out.append(Element.from_config(Config.lamp(group, index, c)))
    return out


def compare_empirical(x: GenSet, y: GenSet, window: int = 3, depth: int = 20) -> ComparisonEvidence:
    """Boundedness evidence for both domination directions, never a verdict."""

    def one_direction(a: GenSet, b: GenSet) -> DominationEvidence:
        base = 1  # t letters
        for letter in _window_letters(a, window):
            base = max(base, word_length(letter, b))
        seq = []
        for i in range(1, depth + 1):
            fam = _family_letters(a, i)
            seq.append(max((word_length(letter, b) for letter in fam), default=0))
        half = max(depth // 2, 1)
        tail = seq[half - 1 :]
        stable = all(v == tail[0] for v in tail)
        if stable:
            return DominationEvidence(True, max([base] + seq), tuple(seq))
        return DominationEvidence(False, None, tuple(seq))

    return ComparisonEvidence(
        x.label(),
        y.label(),
        window,
        depth,
        one_direction(x, y),
        one_direction(y, x),
    )


def empirical_relation(ev: ComparisonEvidence) -> Relation:
    """Map boundedness evidence to the order relation it suggests."""
    xy, yx = ev.sup_x_in_y.bounded, ev.sup_y_in_x.bounded
    if xy and yx:
        return Relation.EQUIVALENT
    if yx:  # y's letters short in x: x dominated by y
        return Relation.LESS
    if xy:
        return Relation.GREATER
    return Relation.INCOMPARABLE


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------


def poset_to_dict(poset: BPoset) -> dict:
    nodes = []
    for n in sorted(poset.nodes, key=lambda n: n.id):
        sub = n.genset.subgroup
        nodes.append(
            {
                "id": n.id,
                "kind": n.kind.value,
                "subgroup": None if sub is None else [sub.group.format_coeff(c) for c in sub.sorted_elements()],
            }
        )
    return {
        "group": poset.group.name,
        "nodes": nodes,
        "hasse": [list(edge) for edge in sorted(poset.hasse)],
    }


def poset_to_json(poset: BPoset) -> str:
    return json.dumps(poset_to_dict(poset), indent=2, sort_keys=True) + "\n"


def poset_to_dot(poset: BPoset) -> str:
    lines = ["digraph hyperbolic_structures {", "  rankdir=BT;"]
    for n in sorted(poset.nodes, key=lambda n: n.id):
        label = n.kind.value if n.genset.subgroup is None else f"{n.kind.value}\\n{n.id}"
        lines.append(f'  "{n.id}" [label="{label}"];')
    for a, b in sorted(poset.hasse):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
