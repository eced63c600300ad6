from fractions import Fraction

import pytest

from sfab import hecke
from sfab.parameters import make_params
from sfab.qlaurent import QLaurent, QRatio
from sfab.root_datum import build_root_system


def exact(ps, x):
    return ps.evaluate_exact(x if isinstance(x, QLaurent) else x.as_laurent()) \
        if not isinstance(x, QRatio) else x.evaluate_exact(ps.class_q)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_n_lambda_a1(q):
    ps = make_params("A", 1, q)
    assert ps.evaluate_exact(hecke.n_lambda((0,), ps)) == 1
    for k in range(1, 6):
        assert ps.evaluate_exact(hecke.n_lambda((k,), ps)) == (q + 1) * q ** (k - 1)


def test_n_lambda_bc1():
    ps = make_params("BC", 1, "0=4,1=2")
    for k in range(1, 5):
        assert ps.evaluate_exact(hecke.n_lambda((k,), ps)) == 3 * 4 ** k * 2 ** (k - 1)


def test_n_lambda_routes_agree():
    for tag, n, q in [("A", 3, "3"), ("B", 3, "0=2,1=2,2=2,3=3"), ("G", 2, "0=2,1=3,2=2")]:
        ps = make_params(tag, n, q)
        for lam in [(1,) * n, (2,) + (0,) * (n - 1), (0,) * (n - 1) + (3,)]:
            assert hecke.n_lambda_first(lam, ps) == hecke.n_lambda(lam, ps)


def test_saturated_sets():
    a1 = build_root_system("A", 1)
    assert sorted(hecke.dominant_below((2,), a1)) == [(0,), (2,)]
    bc = build_root_system("BC", 1)
    assert sorted(hecke.dominant_below((2,), bc)) == [(0,), (1,), (2,)]
    assert hecke.dominant_below((0, 0), build_root_system("A", 2)) == [(0, 0)]
    c3 = build_root_system("C", 3)
    for lam in [(1, 1, 1), (2, 0, 1)]:
        assert sorted(hecke.dominant_below(lam, c3)) == sorted(hecke.dominant_below_boxscan(lam, c3))
        assert hecke.saturated_set(lam, c3).root_string_closed()


@pytest.mark.parametrize("q", [2, 3, 4])
def test_structure_a1(q):
    ps = make_params("A", 1, q)
    row = hecke.structure_constants((1,), (1,), ps)
    assert exact(ps, row[(0,)]) == Fraction(1, q + 1)
    assert exact(ps, row[(2,)]) == Fraction(q, q + 1)
    assert (1,) not in row or exact(ps, row[(1,)]) == 0


def test_structure_identity_and_rows():
    ps = make_params("A", 2, "2")
    assert exact(ps, hecke.structure_constant((1, 1), (0, 0), (1, 1), ps)) == 1
    row = hecke.structure_constants((1, 0), (0, 1), ps)
    assert hecke.check_structure_row((1, 0), (0, 1), ps, row) == []
    rev = hecke.structure_constants((1, 0), (0, 1), ps, order="revlex")
    assert all(row[k] == rev[k] for k in row)


def test_choose_nu_far():
    assert hecke.choose_nu_far((0,), build_root_system("A", 1)) == (1,)
    assert hecke.choose_nu_far((2,), build_root_system("A", 1)) == (3,)
    assert hecke.choose_nu_far((0, 0), build_root_system("A", 2)) == (1, 1)


def test_phi_a1_closed_form():
    q = 4
    ps = make_params("A", 1, q)
    phi = hecke.phi_lambda((1,), ps)
    want = Fraction(2, q + 1)          # sqrt(q)/(q+1) at q = 4
    assert exact(ps, phi[(1,)]) == want and exact(ps, phi[(-1,)]) == want


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1)])
def test_phi_check(lam):
    ps = make_params("A", len(lam), "2")
    rep = hecke.phi_check(lam, ps)
    assert rep["ok"], rep


@pytest.mark.parametrize("q", [2, 3])
def test_horocycle_a1_counts(q):
    ps = make_params("A", 1, q)
    for k in range(1, 5):
        dist = hecke.horocycle_distribution((k,), ps)
        for j in range(k + 1):
            h = 2 * j - k
            want = 1 if j == k else (q ** k if j == 0 else (q - 1) * q ** (k - j - 1))
            assert dist.values[(h,)] == want
        assert dist.ok(Fraction((q + 1) * q ** (k - 1)))


def test_convex_hull():
    a2 = build_root_system("A", 2)
    assert hecke.convex_hull_count((2, 1)) == 6
    assert hecke.convex_hull_interval((2, 1), a2) == 6 == hecke.convex_hull_geometric((2, 1), a2)
    assert hecke.convex_hull_count((0, 0)) == 1
    for k in range(5):
        assert hecke.convex_hull_count((k,)) == k + 1
