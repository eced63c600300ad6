import random
from fractions import Fraction

import pytest

from sfab.qlaurent import (InexactDivision, QLaurent, QRatio, TorusPoly, UPoint, fmt_rational,
                           parse_rational)


def rand_poly(rng, nvars=2, terms=4, span=3):
    d = {}
    for _ in range(terms):
        e = tuple(rng.randint(-span, span) for _ in range(nvars))
        d[e] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return QLaurent(nvars, d)


def naive_mul(a, b):
    out = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return QLaurent(a.nvars, out)


def test_monomials():
    x = QLaurent.monomial([1])
    assert x * x == QLaurent.monomial([2])
    s = x + x.inverse_monomial()
    assert s * s == QLaurent.monomial([2]) + 2 + QLaurent.monomial([-2])


def test_product_vs_naive():
    rng = random.Random(3)
    for _ in range(50):
        a, b = rand_poly(rng), rand_poly(rng)
        assert a * b == naive_mul(a, b)


def test_exact_division_roundtrip():
    rng = random.Random(7)
    for _ in range(40):
        p, d = rand_poly(rng), rand_poly(rng, terms=3)
        if d.is_zero():
            continue
        assert (p * d).divide_exact(d) == p


def test_division_examples():
    x = QLaurent.monomial([1])
    assert (x * x - 1).divide_exact(x - 1) == x + 1
    y = x - x.inverse_monomial()
    assert y.divide_exact(y).is_one()
    with pytest.raises(InexactDivision):
        (x * x + 1).divide_exact(x - 1)


def test_text_roundtrip():
    rng = random.Random(11)
    names = ["z0", "z1"]
    for _ in range(20):
        p = rand_poly(rng)
        assert QLaurent.from_text(p.to_text(names), names) == p
    assert fmt_rational(Fraction(2, 4)) == "1/2"
    assert parse_rational("3/6") == Fraction(1, 2)


def test_ratio_equality():
    z = QLaurent.monomial([1])
    assert QRatio(z * 2, z * z + 1) == QRatio(z * 4, z * z * 2 + 2)
    assert QRatio(z * z - 1, z - 1) == QRatio(z + 1)


def test_evaluate_exact():
    z = QLaurent.monomial([1])
    assert (z * z + 1).evaluate_exact([Fraction(4)]) == 5
    assert (z * z * z).evaluate_exact([Fraction(4)]) == 8


def test_torus_weyl_and_eval():
    from sfab.root_datum import build_root_system
    a1 = build_root_system("A", 1)
    s1 = [w for w in a1.weyl_group() if w.word == (1,)][0]
    p = TorusPoly.x((1,), 0)
    assert p.weyl_act(s1) == TorusPoly.x((-1,), 0)
    assert p.eval_at(UPoint([2.0]), []) == 2
    a2 = build_root_system("A", 2)
    orb = sum((TorusPoly.x(m, 0) for m in a2.orbit((1, 0))), TorusPoly(2, 0))
    for w in a2.weyl_group():
        assert orb.weyl_act(w) == orb


def test_torus_eval_matches_term_sum():
    rng = random.Random(5)
    terms = {(rng.randint(-2, 2), rng.randint(-2, 2)): QLaurent.const(0, rng.randint(1, 5))
             for _ in range(5)}
    p = TorusPoly(2, 0, terms)
    u = UPoint([0.3 + 0.7j, 1.5 - 0.2j])
    direct = sum(float(c.terms.get((), 0)) * u.power(e) for e, c in terms.items())
    assert abs(p.eval_at(u, []) - direct) < 1e-12
