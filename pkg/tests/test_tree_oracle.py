import math
from fractions import Fraction

import numpy as np
import pytest

from sfab import hecke, tree_oracle as to
from sfab.parameters import make_params
from sfab.qlaurent import UPoint
from sfab.spherical import macdonald_eval, norm_at_one


def test_sizes():
    t = to.build_tree(2, 2, 3)
    assert t.n_vertices == 22
    assert list(to.build_tree(4, 2, 2).sizes) == [1, 3, 12]
    line = to.build_tree(1, 1, 4)
    assert list(line.sizes) == [1, 2, 2, 2, 2]
    assert line.degree(0) == 2 and line.degree(3) == 2


def test_parent_child_consistency():
    t = to.build_tree(3, 2, 5)
    for v in range(1, t.n_vertices, 7):
        assert v in t.children(int(t.parent(v))).tolist()
    for v in range(0, int(t.offsets[t.depth]), 5):
        assert t.degree(v) in (t.q0 + 1, t.q1 + 1)


@pytest.mark.parametrize("q0,q1", [(2, 2), (3, 3), (4, 2), (2, 4)])
def test_sphere_counts(q0, q1):
    t = to.build_tree(q0, q1, 10)
    kmax = t.depth // t.step
    for k in range(kmax + 1):
        assert to.sphere_count(t, k) == to.sphere_formula(t, k)
    x = int(t.offsets[t.step])        # a good vertex one step out
    for k in range(kmax):
        if t.step * k + t.step <= t.depth:
            assert to.sphere_count(t, k, x) == to.sphere_formula(t, k)


def test_census():
    t = to.build_tree(2, 2, 10)
    assert to.horocycle_census(t, 3) == {-3: 8, -1: 2, 1: 1, 3: 1}
    assert to.horocycle_census(to.build_tree(4, 2, 10), 1) == {-1: 8, 0: 3, 1: 1}


def test_horocycle_basics():
    t = to.build_tree(3, 3, 8)
    leaf = t.first_leaf_below(0)
    assert t.horocycle(5, 5, leaf) == 0
    for L in range(t.depth):
        y = int(t.ancestor_at(leaf, L))
        assert t.horocycle(0, y, leaf) == L
    with pytest.raises(to.TruncationError):
        t.horocycle(0, leaf, leaf)
    rng = np.random.default_rng(0)
    trip = rng.integers(0, t.n_vertices, size=(200, 3))
    assert to.cocycle_check(t, trip, leaf)


def test_structure_counts():
    t = to.build_tree(2, 2, 8)
    assert to.structure_count(t, 1, 1, 0) == Fraction(1, 3)
    assert to.structure_count(t, 1, 1, 2) == Fraction(2, 3)
    assert to.structure_count(t, 3, 0, 3) == 1
    bc = to.build_tree(4, 2, 10)
    ps = make_params("BC", 1, "0=4,1=2")
    for lam, mu, nu in [(1, 1, 2), (1, 1, 1), (1, 1, 0), (2, 1, 1)]:
        alg = hecke.structure_constant((lam,), (mu,), (nu,), ps).evaluate_exact(ps.class_q)
        assert to.structure_count(bc, lam, mu, nu) == alg


@pytest.mark.parametrize("q0,q1", [(3, 3), (4, 2)])
def test_radon_nikodym(q0, q1):
    t = to.build_tree(q0, q1, 10)
    ys = t.sphere(0, 1)[:4]
    rep = to.radon_nikodym_check(t, 0, ys, 3)
    assert rep["ok"], rep["bad"][:3]
    assert to.tau_product(t, 1) == (q0 if q0 == q1 else q0 * q1)


def test_cylinder_masses_sum_to_one():
    for q in [(2, 2), (4, 2)]:
        t = to.build_tree(*q, 8)
        assert sum(to.cylinder_masses(t, 2).values()) == 1


@pytest.mark.parametrize("q0,q1,tag,qs", [(4, 4, "A", "4"), (4, 2, "BC", "0=4,1=2")])
def test_boundary_integral(q0, q1, tag, qs):
    t = to.build_tree(q0, q1, 12)
    ps = make_params(tag, 1, qs)
    assert abs(to.boundary_integral_hom(t, 0, 0.7) - 1) < 1e-14
    for k in (1, 2):
        for u in (1.0, 0.6 + 0.8j, 1.7):
            assert abs(to.boundary_integral_hom(t, k, u) - macdonald_eval((k,), UPoint([u]), ps)) < 1e-10


def test_power_iteration_estimates():
    assert abs(to.power_iteration_norm(to.build_tree(4, 4, 12), 1) - 0.8) < 0.01
    assert abs(to.power_iteration_norm(to.build_tree(2, 2, 12), 1) - 2 * math.sqrt(2) / 3) < 0.01
    assert to.power_iteration_norm(to.build_tree(2, 2, 6), 0) == 1
    rep = to.power_iteration_report(to.build_tree(3, 3, 12), 1)
    assert rep["raw"] < rep["extrapolated"] and len(rep["estimates"]) == 3


def test_bc_power_iteration():
    ps = make_params("BC", 1, "0=4,1=2")
    want = norm_at_one((1,), ps)[0]
    assert abs(to.power_iteration_norm(to.build_tree(4, 2, 14), 1) - want) / want < 0.01


def test_radial_matches_dense():
    t = to.build_tree(2, 2, 7)
    k, R = 1, 5
    A, _ = to.operator_matrix(t, k, R)
    assert np.allclose(A, A.T)
    dense = np.abs(np.linalg.eigvalsh(A)).max()
    assert abs(to._radial_norm(t, k, R, 4000) - dense) < 1e-8


def test_sector_and_hull():
    t = to.build_tree(3, 3, 10)
    y = int(t.sphere(0, 2)[5])
    rep = to.sector_check(t, 0, y, 3, 1)
    assert rep["ok"] and rep["intersections"] > 0
    for k in range(5):
        assert to.geodesic_hull_count(t, 0, int(t.sphere(0, k)[-1])) == k + 1
    bc = to.build_tree(4, 2, 8)
    assert to.geodesic_hull_count(bc, 0, int(bc.sphere(0, 2)[0])) == 3


def test_truncation():
    t = to.build_tree(2, 2, 4)
    with pytest.raises(to.TruncationError):
        t.sphere(int(t.offsets[3]), 2)
    with pytest.raises(to.TruncationError):
        to.power_iteration_report(t, 1)
    with pytest.raises(ValueError):
        to.build_tree(2, 2, to.MAX_DEPTH + 1)
