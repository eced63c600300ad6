import pytest

from sfab.root_datum import RootSystemError, build_root_system, dominant_up_to

ORDERS = {("A", 1): (1, 2), ("A", 2): (3, 6), ("A", 3): (6, 24), ("B", 2): (4, 8),
          ("B", 3): (9, 48), ("C", 2): (4, 8), ("C", 3): (9, 48), ("D", 4): (12, 192),
          ("G", 2): (6, 12), ("F", 4): (24, 1152), ("BC", 1): (2, 2), ("BC", 2): (6, 8),
          ("BC", 3): (12, 48)}


@pytest.mark.parametrize("key", sorted(ORDERS))
def test_counts(key):
    rs = build_root_system(*key)
    npos, order = ORDERS[key]
    assert len(rs.positive_roots) == npos
    assert len(rs.weyl_group()) == order


def test_a1_and_bc1_roots():
    a1 = build_root_system("A", 1)
    assert a1.positive_roots == [(1,)]
    assert a1.coroot((1,)) == (2,)
    bc = build_root_system("BC", 1)
    assert sorted(bc.positive_roots) == [(1,), (2,)]
    assert {bc.coroot(r) for r in bc.positive_roots} == {(2,), (1,)}
    # base of the coroot system uses (2 e_1)^vee = e_1
    assert bc.coroot_base == [(1,)]


def test_c2_marks():
    rs = build_root_system("C", 2)
    assert rs.highest_root == (2, 1)
    assert rs.marks == (2, 1)


def test_orbits():
    a1 = build_root_system("A", 1)
    assert a1.orbit((1,)) == {(1,), (-1,)}
    a2 = build_root_system("A", 2)
    assert len(a2.orbit((1, 0))) == 3
    assert a2.orbit((0, 0)) == {(0, 0)}


def test_lambda_star():
    assert build_root_system("C", 2).lambda_star((2, 1)) == (2, 1)
    assert build_root_system("A", 2).lambda_star((1, 0)) == (0, 1)
    assert build_root_system("G", 2).lambda_star((0, 0)) == (0, 0)


@pytest.mark.parametrize("key", [("A", 3), ("C", 3), ("G", 2), ("BC", 2)])
def test_length_equals_inversions(key):
    rs = build_root_system(*key)
    for w in rs.weyl_group():
        assert len(w.word) == rs.inversions(w)
    r1 = [r for r in rs.positive_roots if rs.in_R1(r)]
    assert len(rs.longest.word) == len(r1)


def test_dominant_and_preceq():
    a1 = build_root_system("A", 1)
    assert a1.preceq((0,), (2,)) and not a1.preceq((1,), (2,))
    bc = build_root_system("BC", 1)
    assert bc.preceq((1,), (2,)) and bc.preceq((0,), (1,))
    a2 = build_root_system("A", 2)
    for mu in [(3, -5), (-2, 1), (0, -1)]:
        d = a2.dominant(mu)
        assert min(d) >= 0 and d in a2.orbit(mu)


def test_dominant_up_to():
    assert list(dominant_up_to(1, 3)) == [(0,), (1,), (2,), (3,)]
    assert len(list(dominant_up_to(2, 3))) == 10


def test_rejects_unknown_and_large():
    with pytest.raises(RootSystemError):
        build_root_system("Z", 2)
    with pytest.raises(RootSystemError):
        build_root_system("E", 8).weyl_group()
