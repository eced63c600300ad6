from fractions import Fraction

import pytest

from sfab.parameters import ParameterError, make_params, r_hom
from sfab.qlaurent import QLaurent
from sfab.hecke import n_lambda


def test_bc1_tau_and_mode():
    ps = make_params("BC", 1, "0=3,1=2")
    tau = {r: ps.evaluate_exact(ps.tau(r)) for r in ps.rs.positive_roots}
    assert tau == {(1,): Fraction(2, 3), (2,): Fraction(3)}
    assert ps.mode == "exceptional"


def test_modes_and_equal_tau():
    ps = make_params("A", 2, "2")
    assert {ps.evaluate_exact(ps.tau(r)) for r in ps.rs.positive_roots} == {2}
    assert make_params("BC", 2, "0=2,1=3,2=5").mode == "standard"


def test_q_word_c2():
    ps = make_params("C", 2, "0=2,1=3,2=2")
    w = [w for w in ps.rs.weyl_group() if w.word == (1, 2, 1)][0]
    # q_1^2 q_2 = 9 * 2
    assert ps.evaluate_exact(ps.q_w(w)) == 18
    assert ps.q_word((1, 2, 1)) == ps.q_word((1, 2, 1))
    assert ps.q_w(ps.rs.weyl_group()[0]).is_one()


def test_reduced_words_agree():
    ps = make_params("G", 2, "0=2,1=3,2=2")
    w0 = ps.rs.longest
    alt = tuple(3 - i for i in w0.word)      # the other reduced word of w0 in G2
    assert ps.q_word(w0.word) == ps.q_word(alt)


def test_poincare():
    ps = make_params("A", 1, "5")
    assert ps.evaluate_exact(ps.W0_inv) == 1 + Fraction(1, 5)
    ps = make_params("A", 2, "2")
    assert ps.evaluate_exact(ps.W0_inv) == 1 + Fraction(2, 2) + Fraction(2, 4) + Fraction(1, 8)
    ps = make_params("C", 2, "0=2,1=3,2=2")
    q1, q2 = Fraction(3), Fraction(2)
    want = (1 + 1 / q1 + 1 / q2 + 2 / (q1 * q2) + 1 / (q1 ** 2 * q2) + 1 / (q1 * q2 ** 2)
            + 1 / (q1 ** 2 * q2 ** 2))
    assert ps.evaluate_exact(ps.W0_inv) == want


def test_translation():
    ps = make_params("A", 1, "3")
    assert ps.q_translation((0,)).is_one()
    assert ps.evaluate_exact(ps.q_translation((1,))) == 3
    ps = make_params("BC", 1, "0=4,1=2")
    for k in range(4):
        assert ps.evaluate_exact(ps.q_translation((k,))) == 8 ** k
    with pytest.raises(Exception):
        ps.q_translation((-1,))


@pytest.mark.parametrize("tag,n,q", [("A", 1, "2"), ("BC", 2, "0=4,1=2,2=2"), ("G", 2, "0=2,1=3,2=2"),
                                     ("C", 3, "0=2,1=3,2=3,3=2")])
def test_longest_element_identity(tag, n, q):
    assert make_params(tag, n, q).longest_element_identity()["ok"]


def test_r_hom():
    ps = make_params("A", 1, "4")
    assert r_hom(ps)[0] == QLaurent.monomial([1])
    ps = make_params("C", 2, "0=2,1=3,2=2")
    lam, mu = (3, 3), (1, 0)
    r2 = ps.r_power(mu) ** 2
    ratio = n_lambda(lam, ps).divide_exact(n_lambda((2, 3), ps))
    assert r2 == ratio


def test_errors_and_warnings():
    with pytest.raises(ParameterError, match="use type A1"):
        make_params("BC", 1, "0=4,1=4")
    with pytest.raises(ParameterError, match="use type C2"):
        make_params("BC", 2, "0=3,1=2,2=3")
    with pytest.raises(ParameterError, match="requires type BC1"):
        make_params("A", 1, "0=4,1=2")
    with pytest.raises(ParameterError):
        make_params("A", 2, "0=2,1=3,2=2")
    with pytest.raises(ParameterError):
        make_params("A", 1, "1/2")
    ps = make_params("BC", 2, "0=9,1=2,2=2")
    assert any("Higman" in w for w in ps.warnings)
    assert not make_params("BC", 2, "0=4,1=2,2=2").warnings
