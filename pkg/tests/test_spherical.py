import cmath
import math

import numpy as np
import pytest

from sfab.parameters import make_params
from sfab.qlaurent import QLaurent, UPoint
from sfab.spherical import (CFunction, bc_c_explicit, bc_t_to_u, macdonald_eval, macdonald_expand,
                            norm_at_one)
from sfab.tree_oracle import build_tree, power_iteration_norm


def test_c_function_values():
    ps = make_params("A", 1, "4")
    assert abs(CFunction(ps)(UPoint([2.0])) - 1.25) < 1e-14
    flat = make_params("A", 2, "1")
    assert abs(CFunction(flat)(UPoint([0.3 + 1j, 2.0])) - 1) < 1e-14


def test_bc_closed_form():
    ps = make_params("BC", 2, "0=4,1=2,2=2")
    rng = np.random.default_rng(0)
    for _ in range(10):
        t = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert abs(CFunction(ps)(bc_t_to_u(t)) - bc_c_explicit(t, ps)) < 1e-10
    a, b = ps.a_b
    assert abs(a - math.sqrt(8)) < 1e-14 and abs(b - 1 / math.sqrt(2)) < 1e-14


def test_a1_expansion():
    ps = make_params("A", 1, "4")
    exp = macdonald_expand((1,), ps=ps)
    assert exp.coeffs == {(1,): QLaurent.const(ps.nz, 1)}
    assert abs(exp.eval(UPoint([2.0])) - 1) < 1e-14
    assert macdonald_eval((0,), UPoint([0.4]), ps) == 1
    val, _ = norm_at_one((1,), ps)
    assert abs(val - 0.8) < 1e-14


@pytest.mark.parametrize("tag,n,q", [("A", 2, "2"), ("C", 2, "0=2,1=3,2=2"), ("G", 2, "2"),
                                     ("BC", 2, "0=4,1=2,2=2"), ("BC", 1, "0=4,1=2")])
def test_direct_vs_expansion(tag, n, q):
    ps = make_params(tag, n, q)
    rng = np.random.default_rng(1)
    lams = [(1,) * n, (2,) + (0,) * (n - 1)]
    for lam in lams:
        exp = macdonald_expand(lam, ps=ps)
        for _ in range(5):
            u = UPoint(np.exp(1j * rng.uniform(0, 2 * np.pi, size=n)))
            assert abs(exp.eval(u) - macdonald_eval(lam, u, ps)) < 1e-10


def test_weyl_invariance_of_evaluation():
    ps = make_params("C", 2, "0=2,1=3,2=2")
    rng = np.random.default_rng(2)
    u = UPoint(rng.normal(size=2) + 1j * rng.normal(size=2))
    lam = (1, 1)
    base = macdonald_eval(lam, u, ps)
    for w in ps.rs.weyl_group():
        # (w u)^mu = u^{w^{-1} mu}: evaluate via the expansion on the permuted point
        exp = macdonald_expand(lam, ps=ps)
        tot = 0j
        for mu, c in exp.coeffs.items():
            for nu in ps.rs.orbit(mu):
                tot += c.evaluate(ps.zvals) * u.power(w.act(nu))
        assert abs(tot * exp.scale.evaluate(ps.zvals) - base) < 1e-10


def test_a1_inverse_point():
    ps = make_params("A", 1, "3")
    u = 0.4 + 0.9j
    assert abs(macdonald_eval((2,), UPoint([u]), ps) - macdonald_eval((2,), UPoint([1 / u]), ps)) < 1e-12


def test_singular_point_fallback():
    ps = make_params("A", 1, "2")
    # u = 1 is a pole of individual Weyl-sum terms
    assert abs(macdonald_eval((1,), UPoint([1.0]), ps) - norm_at_one((1,), ps)[0]) < 1e-12


def test_norm_two_lambda_vs_power_iteration():
    ps = make_params("A", 1, "4")
    val, _ = norm_at_one((2,), ps)
    est = power_iteration_norm(build_tree(4, 4, 12), 2)
    assert abs(est - val) / val < 0.01


def test_triangularity_failure_is_detected():
    ps = make_params("A", 1, "2")
    with pytest.raises(ValueError):
        macdonald_expand((-1,), ps=ps)
