import itertools
import random

from wreathscope.linalg import (
    ModSpan,
    gf2_basis,
    gf2_in_span,
    scaled_contains,
    scaled_span,
)


def brute_force_span(rows, modulus, ncols):
    """Additive closure of the rows in (Z_m)^ncols, as a set of tuples."""
    span = {(0,) * ncols}
    frontier = [tuple(v % modulus for v in r) for r in rows]
    span.update(frontier)
    while frontier:
        a = frontier.pop()
        for b in list(span):
            c = tuple((x + y) % modulus for x, y in zip(a, b))
            if c not in span:
                span.add(c)
                frontier.append(c)
    return span


class TestGf2:
    def test_simple_span(self):
        basis = gf2_basis([0b011, 0b110])
        assert gf2_in_span(0b101, basis)
        assert gf2_in_span(0b000, basis)
        assert not gf2_in_span(0b001, basis)

    def test_against_enumeration(self):
        rng = random.Random(5)
        for _ in range(50):
            ncols = rng.randint(1, 6)
            rows = [rng.randrange(1 << ncols) for _ in range(rng.randint(0, 4))]
            basis = gf2_basis(rows)
            span = set()
            for picks in itertools.product([0, 1], repeat=len(rows)):
                v = 0
                for p, r in zip(picks, rows):
                    if p:
                        v ^= r
                span.add(v)
            for vec in range(1 << ncols):
                assert gf2_in_span(vec, basis) == (vec in span)


class TestModSpan:
    def test_z8_pattern(self):
        # coords are depths -1..-4; generators 2@(-d+1) + 4@(-d) for d=2,3,4
        span = ModSpan(4, 8)
        span.add([2, 4, 0, 0])
        span.add([0, 2, 4, 0])
        span.add([0, 0, 2, 4])
        # u1 + 2*u2 = (2,0,0,0): deep cancellation recovers a bare lamp
        assert span.contains([2, 0, 0, 0])
        assert span.contains([4, 0, 0, 0])
        assert not span.contains([1, 0, 0, 0])
        assert not span.contains([0, 0, 0, 4])

    def test_non_unit_pivot_chain(self):
        span = ModSpan(2, 12)
        span.add([8, 1])
        # 11 * (8,1) = (4, 11); the whole cyclic module must be recognized
        for k in range(12):
            assert span.contains([(8 * k) % 12, k % 12])
        assert not span.contains([1, 0])

    def test_against_brute_force(self):
        rng = random.Random(17)
        for modulus in (2, 3, 4, 6, 8, 12):
            for _ in range(40):
                ncols = rng.randint(1, 3)
                rows = [
                    tuple(rng.randrange(modulus) for _ in range(ncols))
                    for _ in range(rng.randint(0, 3))
                ]
                span = ModSpan(ncols, modulus)
                for r in rows:
                    span.add(list(r))
                truth = brute_force_span(rows, modulus, ncols)
                for vec in itertools.product(range(modulus), repeat=ncols):
                    assert span.contains(list(vec)) == (vec in truth), (
                        modulus,
                        rows,
                        vec,
                    )


class TestScaledSpan:
    def test_mixed_moduli(self):
        # coordinates mod 2 and mod 4
        moduli = (2, 4)
        span = scaled_span([(1, 2)], moduli)
        assert scaled_contains(span, (1, 2), moduli)
        assert scaled_contains(span, (0, 0), moduli)
        assert not scaled_contains(span, (1, 1), moduli)

    def test_mixed_against_brute_force(self):
        rng = random.Random(23)
        for moduli in ((2, 4), (3, 6), (2, 2, 8)):
            for _ in range(30):
                rows = [
                    tuple(rng.randrange(m) for m in moduli)
                    for _ in range(rng.randint(0, 3))
                ]
                span = scaled_span(rows, moduli)
                truth = {(0,) * len(moduli)}
                frontier = list(rows)
                truth.update(frontier)
                while frontier:
                    a = frontier.pop()
                    for b in list(truth):
                        c = tuple((x + y) % m for x, y, m in zip(a, b, moduli))
                        if c not in truth:
                            truth.add(c)
                            frontier.append(c)
                for vec in itertools.product(*(range(m) for m in moduli)):
                    assert scaled_contains(span, vec, moduli) == (vec in truth)
