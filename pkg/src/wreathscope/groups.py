"""Exact arithmetic for lamplighter-type wreath products.

The ambient group is ``(Z_{n1} x ... x Z_{nr}) wr Z``: finitely supported
lamp configurations on the integer line together with a cursor shift.
Configurations double as sparse Laurent polynomials whose coefficients live
in the finite abelian coefficient group, and elements are kept in the
normal form ``t^m * b`` (shift first, then base configuration).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

DEFAULT_ORDER_BOUND = 64

Coeff = tuple[int, ...]


class GroupMismatchError(ValueError):
    """Raised when operands belong to different coefficient groups."""


class OrderBoundError(ValueError):
    """Raised when a coefficient group exceeds the configured order bound."""


class PolyParseError(ValueError):
    """Syntax or range error in polynomial notation, with a position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


_GROUP_NAME_RE = re.compile(r"^Z(\d+)(?:xZ(\d+))*$", re.IGNORECASE)


@dataclass(frozen=True)
class Group:
    """Finite abelian coefficient group, a direct product of cyclic groups."""

    orders: tuple[int, ...]
    bound: int = field(default=DEFAULT_ORDER_BOUND, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        if not self.orders:
            raise ValueError("coefficient group needs at least one cyclic factor")
        if any(n < 2 for n in self.orders):
            raise ValueError(f"cyclic factor orders must be >= 2, got {self.orders}")
        if self.size > self.bound:
            raise OrderBoundError(
                f"group order {self.size} exceeds configured bound {self.bound}"
            )

    @classmethod
    def from_name(cls, name: str, bound: int = DEFAULT_ORDER_BOUND) -> "Group":
        """Parse names like ``Z12`` or ``Z2xZ2``."""
        if not _GROUP_NAME_RE.match(name):
            raise ValueError(f"cannot parse group name {name!r} (expected e.g. Z12, Z2xZ2)")
        orders = tuple(int(part[1:]) for part in name.lower().split("x"))
        return cls(orders, bound=bound)

    @property
    def name(self) -> str:
        return "x".join(f"Z{n}" for n in self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def is_cyclic(self) -> bool:
        return math.lcm(*self.orders) == self.size

    @property
    def zero(self) -> Coeff:
        return (0,) * self.rank

    def check_coeff(self, a: Coeff) -> Coeff:
        if len(a) != self.rank:
            raise GroupMismatchError(f"coefficient {a} has wrong rank for {self.name}")
        return tuple(v % n for v, n in zip(a, self.orders))

    def add(self, a: Coeff, b: Coeff) -> Coeff:
        if len(a) != self.rank or len(b) != self.rank:
            raise GroupMismatchError(f"coefficient rank mismatch for {self.name}")
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def neg(self, a: Coeff) -> Coeff:
        return tuple((-x) % n for x, n in zip(a, self.orders))

    def scale(self, k: int, a: Coeff) -> Coeff:
        return tuple((k * x) % n for x, n in zip(a, self.orders))

    def order_of(self, a: Coeff) -> int:
        """Least k >= 1 with k*a = 0, componentwise lcm."""
        return math.lcm(*(n // math.gcd(x, n) for x, n in zip(a, self.orders)))

    def elements(self) -> Iterator[Coeff]:
        return itertools.product(*(range(n) for n in self.orders))

    def units(self) -> tuple[Coeff, ...]:
        """One generator per cyclic factor."""
        out = []
        for j in range(self.rank):
            e = [0] * self.rank
            e[j] = 1
            out.append(tuple(e))
        return tuple(out)

    def format_coeff(self, a: Coeff) -> str:
        if self.rank == 1:
            return str(a[0])
        return "(" + ",".join(str(v) for v in a) + ")"


def coeff_add(a: Coeff, b: Coeff, group: Group) -> Coeff:
    return group.add(a, b)


def coeff_order(a: Coeff, group: Group) -> int:
    return group.order_of(group.check_coeff(a))


@dataclass(frozen=True)
class Config:
    """Finitely supported map from lamp positions to nonzero coefficients.

    Stored sparsely and canonically: entries are sorted by position and never
    map to the zero coefficient, so structural equality is group equality.
    """

    group: Group
    entries: tuple[tuple[int, Coeff], ...] = ()

    @staticmethod
    def make(group: Group, items: Mapping[int, Coeff] | Iterable[tuple[int, Coeff]]) -> "Config":
        pairs = items.items() if isinstance(items, Mapping) else items
        acc: dict[int, Coeff] = {}
        for pos, coeff in pairs:
            coeff = group.check_coeff(coeff)
            if pos in acc:
                coeff = group.add(acc[pos], coeff)
            acc[int(pos)] = coeff
        cleaned = tuple(sorted((p, c) for p, c in acc.items() if c != group.zero))
        return Config(group, cleaned)

    @staticmethod
    def zero(group: Group) -> "Config":
        return Config(group, ())

    @staticmethod
    def lamp(group: Group, pos: int, coeff: Coeff) -> "Config":
        return Config.make(group, [(pos, coeff)])

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    def min_support(self) -> int | None:
        return self.entries[0][0] if self.entries else None

    def max_support(self) -> int | None:
        return self.entries[-1][0] if self.entries else None

    def value(self, pos: int) -> Coeff:
        for p, c in self.entries:
            if p == pos:
                return c
        return self.group.zero

    def as_dict(self) -> dict[int, Coeff]:
        return dict(self.entries)

    def shift(self, k: int) -> "Config":
        """Translate the support by +k (k = 1 is the right shift)."""
        if k == 0:
            return self
        return Config(self.group, tuple((p + k, c) for p, c in self.entries))

    def __add__(self, other: "Config") -> "Config":
        if self.group != other.group:
            raise GroupMismatchError("cannot add configs over different groups")
        # two-pointer merge of the sorted entry lists; hot path for saturation
        a, b = self.entries, other.entries
        orders = self.group.orders
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            pa, ca = a[i]
            pb, cb = b[j]
            if pa < pb:
                out.append(a[i])
                i += 1
            elif pb < pa:
                out.append(b[j])
                j += 1
            else:
                merged = tuple((x + y) % n for x, y, n in zip(ca, cb, orders))
                if any(merged):
                    out.append((pa, merged))
                i += 1
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return Config(self.group, tuple(out))

    def __neg__(self) -> "Config":
        return Config(self.group, tuple((p, self.group.neg(c)) for p, c in self.entries))

    def scale(self, k: int) -> "Config":
        """k-fold pointwise sum with itself (k >= 0)."""
        scaled = ((p, self.group.scale(k, c)) for p, c in self.entries)
        return Config(self.group, tuple((p, c) for p, c in scaled if c != self.group.zero))

    def __sub__(self, other: "Config") -> "Config":
        return self + (-other)

    def mirror(self) -> "Config":
        """Image under the line flip p -> -p."""
        return Config(self.group, tuple(sorted((-p, c) for p, c in self.entries)))

    def negative_part(self) -> "Config":
        return Config(self.group, tuple((p, c) for p, c in self.entries if p < 0))

    def nonnegative_part(self) -> "Config":
        return Config(self.group, tuple((p, c) for p, c in self.entries if p >= 0))

    def __str__(self) -> str:
        return format_poly(self)


def config_shift(f: Config, k: int) -> Config:
    return f.shift(k)


def config_add(f: Config, h: Config) -> Config:
    return f + h


@dataclass(frozen=True)
class Element:
    """Wreath-product element in the normal form ``t^shift * config``."""

    group: Group
    config: Config
    shift: int = 0

    @staticmethod
    def identity(group: Group) -> "Element":
        return Element(group, Config.zero(group), 0)

    @staticmethod
    def from_config(config: Config, shift: int = 0) -> "Element":
        return Element(config.group, config, shift)

    @staticmethod
    def shift_only(group: Group, k: int) -> "Element":
        return Element(group, Config.zero(group), k)

    @property
    def is_identity(self) -> bool:
        return self.shift == 0 and self.config.is_zero

    def absolute_config(self) -> Config:
        """Lamp states in absolute line coordinates (cursor-independent)."""
        return self.config.shift(self.shift)

    def __mul__(self, other: "Element") -> "Element":
        # t^m1 b1 t^m2 b2 = t^(m1+m2) (t^(-m2).b1) b2
        if self.group != other.group:
            raise GroupMismatchError("cannot multiply elements over different groups")
        config = self.config.shift(-other.shift) + other.config
        return Element(self.group, config, self.shift + other.shift)

    def inverse(self) -> "Element":
        return Element(self.group, -(self.config.shift(self.shift)), -self.shift)

    def mirror(self) -> "Element":
        """Image under the automorphism flipping the line and the shift."""
        return Element(self.group, self.config.mirror(), -self.shift)

    def __str__(self) -> str:
        if self.shift == 0:
            return str(self.config)
        head = f"t^{self.shift}"
        if self.config.is_zero:
            return head
        return f"{head} * {self.config}"


def elem_mul(x: Element, y: Element) -> Element:
    return x * y


def elem_inv(x: Element) -> Element:
    return x.inverse()


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of a coefficient group, cached as its full element set.

    Identity is the element set; the generating tuple is bookkeeping only.
    """

    group: Group
    elements: frozenset[Coeff]
    generators: tuple[Coeff, ...] = field(default=(), compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def is_proper(self) -> bool:
        return self.order < self.group.size

    def contains(self, a: Coeff) -> bool:
        return a in self.elements

    def is_subset_of(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def sorted_elements(self) -> tuple[Coeff, ...]:
        return tuple(sorted(self.elements))

    def sort_key(self) -> tuple:
        return (self.order, self.sorted_elements())

    def max_order_element(self) -> Coeff:
        return max(sorted(self.elements), key=self.group.order_of)

    def minimal_generators(self) -> tuple[Coeff, ...]:
        """Greedy inclusion-minimal generating set, deterministic."""
        gens: list[Coeff] = []
        span = frozenset([self.group.zero])
        for a in sorted(self.elements):
            if a in span:
                continue
            gens.append(a)
            span = _close(self.group, span | {a})
            if span == self.elements:
                break
        return tuple(gens)

    def label(self) -> str:
        return "{" + ",".join(self.group.format_coeff(g) for g in self.minimal_generators()) + "}"


def _close(group: Group, seed: frozenset[Coeff]) -> frozenset[Coeff]:
    elems = set(seed)
    elems.add(group.zero)
    frontier = list(elems)
    while frontier:
        a = frontier.pop()
        for b in list(elems):
            c = group.add(a, b)
            if c not in elems:
                elems.add(c)
                frontier.append(c)
    return frozenset(elems)


def subgroup_closure(group: Group, gens: Iterable[Coeff]) -> Subgroup:
    """Smallest subgroup containing the generators (closure under addition)."""
    gens = tuple(group.check_coeff(g) for g in gens)
    return Subgroup(group, _close(group, frozenset(gens)), gens)


def trivial_subgroup(group: Group) -> Subgroup:
    return Subgroup(group, frozenset([group.zero]), ())


def full_subgroup(group: Group) -> Subgroup:
    return Subgroup(group, frozenset(group.elements()), group.units())


# ---------------------------------------------------------------------------
# Polynomial notation
#
# term  := coeff? 't' ('^' int)? | coeff
# coeff := int | '(' int (',' int)* ')'
# terms joined by '+'; "0" is the empty config; a missing coefficient means 1
# (cyclic groups only); a missing exponent on 't' means 1.
# ---------------------------------------------------------------------------

_INT_RE = re.compile(r"-?\d+")


def parse_poly(text: str, group: Group) -> Config:
    """Parse sparse Laurent-polynomial notation into a canonical config."""
    if text.strip() == "0":
        return Config.zero(group)
    s = text
    n = len(s)
    i = 0
    entries: list[tuple[int, Coeff]] = []
    seen: set[int] = set()

    def skip_ws(j: int) -> int:
        while j < n and s[j].isspace():
            j += 1
        return j

    def parse_int(j: int) -> tuple[int, int]:
        m = _INT_RE.match(s, j)
        if not m:
            raise PolyParseError("expected integer", j)
        return int(m.group()), m.end()

    first = True
    while True:
        i = skip_ws(i)
        if i >= n:
            if first:
                raise PolyParseError("empty polynomial", i)
            raise PolyParseError("expected term after '+'", i)
        term_start = i
        coeff: Coeff | None = None
        if s[i] == "(":
            i += 1
            parts: list[int] = []
            while True:
                i = skip_ws(i)
                v, i = parse_int(i)
                parts.append(v)
                i = skip_ws(i)
                if i < n and s[i] == ",":
                    i += 1
                    continue
                if i < n and s[i] == ")":
                    i += 1
                    break
                raise PolyParseError("expected ',' or ')' in coefficient tuple", i)
            coeff = tuple(parts)
        elif i < n and (s[i].isdigit() or s[i] == "-"):
            v, i = parse_int(i)
            coeff = (v,)

        exponent = 0
        has_t = False
        if i < n and s[i] == "t":
            has_t = True
            i += 1
            if i < n and s[i] == "^":
                i += 1
                exponent, i = parse_int(i)
            else:
                exponent = 1

        if coeff is None:
            if not has_t:
                raise PolyParseError("expected term", term_start)
            if group.rank != 1:
                raise PolyParseError(
                    "coefficient required for non-cyclic groups", term_start
                )
            coeff = (1,)
        if len(coeff) != group.rank:
            raise PolyParseError(
                f"coefficient has {len(coeff)} components, group needs {group.rank}",
                term_start,
            )
        for v, order in zip(coeff, group.orders):
            if not 0 <= v < order:
                raise PolyParseError(
                    f"coefficient out of range [0, {order}) in {group.name}", term_start
                )
        if exponent in seen:
            raise PolyParseError(f"duplicate exponent {exponent}", term_start)
        seen.add(exponent)
        if coeff != group.zero:
            entries.append((exponent, coeff))

        first = False
        i = skip_ws(i)
        if i >= n:
            break
        if s[i] != "+":
            raise PolyParseError("expected '+' between terms", i)
        i += 1

    return Config(group, tuple(sorted(entries)))


def format_poly(config: Config) -> str:
    """Canonical output: strictly increasing exponents, '0' for the empty config."""
    if config.is_zero:
        return "0"
    group = config.group
    terms = []
    for pos, coeff in config.entries:
        cs = group.format_coeff(coeff)
        if pos == 0:
            terms.append(cs)
            continue
        tpart = "t" if pos == 1 else f"t^{pos}"
        if group.rank == 1 and coeff == (1,):
            terms.append(tpart)
        else:
            terms.append(cs + tpart)
    return " + ".join(terms)


def parse_element(text: str, group: Group) -> Element:
    """Parse ``t^m * p(t)`` | ``t^m`` | ``p(t)`` into an element."""
    s = text.strip()
    m = re.match(r"^t(?:\^(-?\d+))?\s*(?:\*\s*(.*))?$", s, re.DOTALL)
    if m and (m.group(2) is not None or re.fullmatch(r"t(\^-?\d+)?", s)):
        shift = int(m.group(1)) if m.group(1) else 1
        rest = m.group(2)
        config = parse_poly(rest, group) if rest else Config.zero(group)
        return Element(group, config, shift)
    return Element(group, parse_poly(s, group), 0)
