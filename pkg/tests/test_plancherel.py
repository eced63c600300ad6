import numpy as np
import pytest

from sfab.hecke import n_lambda
from sfab.parameters import make_params
from sfab.plancherel import (Plancherel, convergence_study, density_at, integrate_pairing,
                             integrate_triple, orthogonality_residual, phi1_explicit, phi1_limit,
                             spectrum_description, triple_vs_algebraic)
from sfab.qlaurent import UPoint


def test_density_values():
    assert abs(density_at(UPoint([1j]), make_params("A", 1, "4")) - 1.6) < 1e-12
    flat = make_params("A", 2, "1")
    assert abs(density_at(UPoint([np.exp(0.3j), np.exp(1.1j)]), flat) - 1) < 1e-12


def test_phi1_explicit_vs_limit():
    ps = make_params("BC", 2, "0=4,1=2,2=2")
    for t in (np.exp(0.4j), np.exp(2.0j)):
        a, b = phi1_explicit(ps, [t]), phi1_limit(ps, [t], delta=1e-7)
        assert abs(a - b) < 1e-5 * max(1, abs(a))


def test_a1_pairings():
    ps = make_params("A", 1, "4")
    assert abs(integrate_pairing((1,), (1,), ps, grid=129) - 0.2) < 1e-12
    assert abs(integrate_pairing((1,), (2,), ps, grid=129)) < 1e-12
    assert abs(Plancherel(ps, 129).total_mass - 1) < 1e-12


def test_a1_triples():
    ps = make_params("A", 1, "4")
    n2 = n_lambda((2,), ps).evaluate(ps.zvals)
    assert abs(n2 * integrate_triple((1,), (1,), (2,), ps, grid=129) - 0.8) < 1e-12
    assert abs(integrate_triple((1,), (1,), (1,), ps, grid=129)) < 1e-12


def test_bc1_boundary_term_matters():
    ps = make_params("BC", 1, "0=4,1=2")
    assert ps.exceptional
    with_b, _ = orthogonality_residual(ps, [(0,), (1,), (2,)], grid=257)
    without, _ = orthogonality_residual(ps, [(0,), (1,), (2,)], grid=257, include_boundary=False)
    assert with_b < 1e-10 and without > 1e-3


@pytest.mark.parametrize("tag,n,q", [("A", 2, "3"), ("C", 2, "0=2,1=3,2=2"), ("G", 2, "2"),
                                     ("BC", 2, "0=4,1=2,2=2")])
def test_orthogonality_rank_two(tag, n, q):
    ps = make_params(tag, n, q)
    lams = [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert orthogonality_residual(ps, lams, grid=129)[0] < 1e-8


def test_triples_match_structure_constants():
    ps = make_params("C", 2, "0=2,1=3,2=2")
    assert triple_vs_algebraic(ps, [(0, 0), (1, 0), (0, 1)], grid=129) < 1e-8


def test_convergence_study_shrinks():
    ps = make_params("A", 1, "3")
    res, ok = convergence_study(ps, [(0,), (1,), (3,)], grids=(5, 9, 17, 33))
    assert ok and res[-1] < 1e-3 * res[0]


def test_spectrum_components():
    std = spectrum_description(make_params("A", 1, "2"), lams=[(1,)], samples=2000)
    assert len(std["components"]) == 1
    chk = std["norm_checks"][0]
    assert chk["bounded"] and chk["approaches"]
    exc = spectrum_description(make_params("BC", 2, "0=4,1=2,2=2"))
    assert exc["mode"] == "exceptional" and len(exc["components"]) == 2
    assert exc["components"][1]["weyl_prime_order"] == 2
