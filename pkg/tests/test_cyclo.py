import cmath
import random
from fractions import Fraction

import pytest

from grady.cyclo import Cyc, rank_cyc, root_exponent, solve_linear


def rand_cyc(rng, M):
    d = len(Cyc(M, 0).c)
    return Cyc(M, [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(d)])


def test_roots_of_unity():
    for M in (1, 2, 4, 8, 12):
        z = Cyc.root(M, 1)
        acc = Cyc(M, 1)
        for _ in range(M):
            acc = acc * z
        assert acc == 1
        for k in range(M):
            assert root_exponent(Cyc.root(M, k)) == k
    assert Cyc.root(4, 2) == -1
    with pytest.raises(ValueError):
        root_exponent(Cyc(4, 2))


def test_field_axioms_numerically():
    rng = random.Random(1)
    for M in (3, 4, 8, 12):
        for _ in range(20):
            x, y = rand_cyc(rng, M), rand_cyc(rng, M)
            assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) < 1e-9
            assert abs((x + y).to_complex() - (x.to_complex() + y.to_complex())) < 1e-9
            assert abs(x.conj().to_complex() - x.to_complex().conjugate()) < 1e-9
            if not x.is_zero():
                assert x * x.inverse() == 1
                assert (y / x) * x == y


def test_galois_action():
    z = Cyc.root(8, 1)
    assert z.galois(3) == Cyc.root(8, 3)
    assert z.galois(-1 % 8) == z.conj()
    sqrt2 = z + z.conj()
    assert abs(sqrt2.to_complex() - cmath.sqrt(2)) < 1e-12
    assert sqrt2.is_real() and not sqrt2.is_rational()
    assert (sqrt2 * sqrt2).rational() == 2


def test_errors():
    with pytest.raises(ValueError):
        Cyc(4, [1, 2, 3])
    with pytest.raises(ValueError):
        Cyc(4, 1) + Cyc(8, 1)
    with pytest.raises(ZeroDivisionError):
        Cyc(4, 0).inverse()
    with pytest.raises(ValueError):
        Cyc.root(4, 1).rational()


def test_linear_algebra():
    M = 4
    i = Cyc.root(M, 1)
    rows = [[Cyc(M, 1), i], [i, Cyc(M, -1)]]
    assert rank_cyc(rows, M) == 1
    (v,) = solve_linear(rows, M)
    for r in rows:
        assert r[0] * v[0] + r[1] * v[1] == 0
    assert rank_cyc([[Cyc(M, 1), Cyc(M, 0)], [Cyc(M, 0), i]], M) == 2
    assert rank_cyc([], M) == 0
