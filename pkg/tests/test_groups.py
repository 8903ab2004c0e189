import random

import pytest
from hypothesis import given, settings, strategies as st

from wreathscope.groups import (
    Config,
    Element,
    Group,
    GroupMismatchError,
    OrderBoundError,
    PolyParseError,
    coeff_add,
    coeff_order,
    format_poly,
    parse_element,
    parse_poly,
    subgroup_closure,
)

Z2 = Group((2,))
Z3 = Group((3,))
Z8 = Group((8,))
Z12 = Group((12,))
K4 = Group((2, 2))

TEST_GROUPS = [Z2, Z3, Z8, K4]


def random_config(group, rng, window=5):
    entries = {}
    for _ in range(rng.randint(0, 4)):
        pos = rng.randint(-window, window)
        coeff = tuple(rng.randrange(n) for n in group.orders)
        entries[pos] = coeff
    return Config.make(group, entries)


def random_element(group, rng, window=5, max_shift=5):
    return Element(group, random_config(group, rng, window), rng.randint(-max_shift, max_shift))


class TestGroupBasics:
    def test_from_name(self):
        assert Group.from_name("Z12") == Z12
        assert Group.from_name("Z2xZ2") == K4
        assert Z12.name == "Z12"
        assert K4.name == "Z2xZ2"

    def test_invalid_groups(self):
        with pytest.raises(ValueError):
            Group(())
        with pytest.raises(ValueError):
            Group((1,))
        with pytest.raises(OrderBoundError):
            Group((65,))
        Group((65,), bound=128)  # configurable bound

    def test_is_cyclic(self):
        assert Z12.is_cyclic
        assert not K4.is_cyclic
        assert Group((2, 3)).is_cyclic  # Z2 x Z3 = Z6

    def test_coeff_add(self):
        assert coeff_add((4,), (6,), Z8) == (2,)
        assert coeff_add((0, 1), (1, 0), K4) == (1, 1)
        assert coeff_add((5,), (0,), Z8) == (5,)
        with pytest.raises(GroupMismatchError):
            coeff_add((1, 0), (1,), K4)

    def test_coeff_order(self):
        assert coeff_order((2,), Z8) == 4
        assert coeff_order((1, 1), K4) == 2
        assert coeff_order((8,), Z12) == 3
        assert coeff_order((0,), Z8) == 1

    def test_coeff_order_brute_force(self):
        for group in (Z8, Z12, K4):
            for a in group.elements():
                k = 1
                acc = a
                while acc != group.zero:
                    acc = group.add(acc, a)
                    k += 1
                assert coeff_order(a, group) == k


class TestConfig:
    def test_shift_single(self):
        f = Config.make(Z8, {-2: (4,)})
        assert f.shift(1) == Config.make(Z8, {-1: (4,)})

    def test_shift_empty(self):
        assert Config.zero(Z8).shift(7) == Config.zero(Z8)

    def test_shift_pointwise(self):
        f = Config.make(Z3, {0: (1,), 3: (2,)})
        assert f.shift(-3) == Config.make(Z3, {-3: (1,), 0: (2,)})

    def test_add_self_inverse(self):
        f = Config.make(Z2, {-1: (1,)})
        assert (f + f).is_zero

    def test_add_disjoint(self):
        f = Config.make(Z8, {-2: (4,)})
        h = Config.make(Z8, {0: (3,)})
        assert f + h == Config.make(Z8, {-2: (4,), 0: (3,)})

    def test_add_componentwise(self):
        f = Config.make(Z8, {0: (4,), 1: (2,)})
        h = Config.make(Z8, {1: (6,)})
        assert f + h == Config.make(Z8, {0: (4,)})

    def test_add_group_mismatch(self):
        with pytest.raises(GroupMismatchError):
            Config.make(Z8, {0: (1,)}) + Config.make(Z2, {0: (1,)})

    def test_canonical_sparsity(self):
        f = Config.make(Z8, {0: (0,), 2: (3,)})
        assert f.support() == (2,)

    def test_shift_bijection_random(self):
        rng = random.Random(7)
        for group in TEST_GROUPS:
            for _ in range(200):
                f = random_config(group, rng)
                k = rng.randint(-6, 6)
                assert f.shift(k).shift(-k) == f

    def test_shift_distributes_over_add(self):
        rng = random.Random(8)
        for group in TEST_GROUPS:
            for _ in range(200):
                f, h = random_config(group, rng), random_config(group, rng)
                k = rng.randint(-6, 6)
                assert (f + h).shift(k) == f.shift(k) + h.shift(k)


class TestElement:
    def test_identity(self):
        e = Element.identity(Z8)
        x = Element(Z8, Config.make(Z8, {2: (5,)}), -3)
        assert x * e == x
        assert e * x == x

    def test_shift_cancellation(self):
        t = Element.shift_only(Z8, 1)
        tinv = Element.shift_only(Z8, -1)
        assert (t * tinv).is_identity

    def test_conjugation_by_shift(self):
        x = Element(Z2, Config.make(Z2, {0: (1,)}), 2)
        y = Element.shift_only(Z2, -2)
        assert x * y == Element(Z2, Config.make(Z2, {2: (1,)}), 0)

    def test_inverse(self):
        assert Element.identity(Z8).inverse().is_identity
        assert Element.shift_only(Z8, 5).inverse() == Element.shift_only(Z8, -5)
        x = Element(Z3, Config.make(Z3, {0: (1,)}), 1)
        assert (x * x.inverse()).is_identity
        assert (x.inverse() * x).is_identity
        # frozen: solving x*y = e under the locked normal form puts the
        # inverted lamp at +1, one slot to the right of the original
        assert x.inverse() == Element(Z3, Config.make(Z3, {1: (2,)}), -1)

    def test_group_axioms_random(self):
        # associativity, identity and inverses on 1000 random triples per group
        for group in TEST_GROUPS:
            rng = random.Random(hash(group.orders) & 0xFFFF)
            e = Element.identity(group)
            for _ in range(1000):
                x = random_element(group, rng)
                y = random_element(group, rng)
                z = random_element(group, rng)
                assert (x * y) * z == x * (y * z)
                assert x * e == x and e * x == x
                assert (x * x.inverse()).is_identity
                assert (x.inverse() * x).is_identity

    def test_absolute_config(self):
        x = Element(Z2, Config.make(Z2, {-1: (1,)}), 1)
        assert x.absolute_config() == Config.make(Z2, {0: (1,)})

    def test_mirror_is_automorphism(self):
        rng = random.Random(11)
        for _ in range(200):
            x, y = random_element(Z8, rng), random_element(Z8, rng)
            assert (x * y).mirror() == x.mirror() * y.mirror()


class TestSubgroups:
    def test_closure_z8_carried_subgroup(self):
        h = subgroup_closure(Z8, [(4,), (2,)])
        assert h.sorted_elements() == ((0,), (2,), (4,), (6,))

    def test_closure_empty(self):
        assert subgroup_closure(Z8, []).sorted_elements() == ((0,),)

    def test_closure_z12(self):
        h = subgroup_closure(Z12, [(8,)])
        assert h.sorted_elements() == ((0,), (4,), (8,))

    def test_closure_idempotent_monotone(self):
        h = subgroup_closure(Z12, [(4,)])
        again = subgroup_closure(Z12, h.sorted_elements())
        assert again.elements == h.elements
        bigger = subgroup_closure(Z12, [(4,), (6,)])
        assert h.elements <= bigger.elements

    def test_minimal_generators_label(self):
        h = subgroup_closure(Z12, [(8,), (4,)])
        assert h.minimal_generators() == ((4,),)
        assert h.label() == "{4}"
        assert subgroup_closure(K4, [(0, 1)]).label() == "{(0,1)}"


class TestPolyNotation:
    def test_mixed_sign_exponents(self):
        z10 = Group((10,))
        f = parse_poly("2t^-9 + 3t^-6 + 1 + 2t + t^6", z10)
        assert f.as_dict() == {-9: (2,), -6: (3,), 0: (1,), 1: (2,), 6: (1,)}
        assert format_poly(f) == "2t^-9 + 3t^-6 + 1 + 2t + t^6"

    def test_zero(self):
        assert parse_poly("0", Z8).is_zero
        assert format_poly(Config.zero(Z8)) == "0"

    def test_tuple_coeffs(self):
        f = parse_poly("(0,1)t^-2 + (1,0)t^-1", K4)
        assert f.as_dict() == {-2: (0, 1), -1: (1, 0)}

    def test_errors(self):
        with pytest.raises(PolyParseError):
            parse_poly("2t^-9 +", Z8)
        with pytest.raises(PolyParseError):
            parse_poly("9t", Z8)  # coefficient out of range
        with pytest.raises(PolyParseError):
            parse_poly("1 + 2", Z8)  # duplicate exponent 0
        with pytest.raises(PolyParseError):
            parse_poly("t + 1", K4)  # bare t needs cyclic coefficients
        with pytest.raises(PolyParseError):
            parse_poly("(1,0,0)t", K4)

    def test_roundtrip_random(self):
        rng = random.Random(13)
        for group in TEST_GROUPS:
            for _ in range(250):
                f = random_config(group, rng, window=9)
                assert parse_poly(format_poly(f), group) == f

    @given(st.lists(st.tuples(st.integers(-9, 9), st.integers(0, 7)), max_size=5))
    @settings(max_examples=200)
    def test_roundtrip_hypothesis(self, items):
        f = Config.make(Z8, [(p, (v,)) for p, v in items])
        assert parse_poly(format_poly(f), Z8) == f


class TestParseElement:
    def test_forms(self):
        g = parse_element("t^4 * 1", Z2)
        assert g.shift == 4 and g.config.as_dict() == {0: (1,)}
        assert parse_element("t^-3", Z2) == Element.shift_only(Z2, -3)
        assert parse_element("t", Z2) == Element.shift_only(Z2, 1)
        pure = parse_element("2t^-5", Group((4,)))
        assert pure.shift == 0 and pure.config.as_dict() == {-5: (2,)}
        assert parse_element("1t^4", Z2).config.as_dict() == {4: (1,)}
