import pytest

from periodcoh.exactla import Matrix
from periodcoh.models.poly import Element
from periodcoh.tduality import (
    T_operator,
    T_periodized,
    T_prime_operator,
    T_unperiodized,
    build_tduality_model,
    double_tduality,
    untwisted_double_duality,
)


@pytest.mark.parametrize("ring", ("Z", "Q", "Z/5"))
def test_T_on_monomials(ring):
    m = build_tduality_model(ring, 8)
    T, Tp = T_operator(m), T_prime_operator(m)
    for n in range(9):
        want = Element({(n - 1, ("vh",)): n}) if n else Element()
        if ring == "Z/5":
            want = Element({k: c % 5 for k, c in want.items() if c % 5})
        got = T(m.side_v.mono(n))
        if ring == "Z/5":
            got = Element({k: c % 5 for k, c in got.items() if c % 5})
        assert got == want
        assert T(m.side_v.mono(n, ["v"])) == m.side_vh.mono(n)
        assert Tp(m.side_vh.mono(n, ["vh"])) == m.side_v.mono(n)
        assert Tp(m.side_vh.mono(n)) == (Element({(n - 1, ("v",)): n}) if n else Element())


def test_unperiodized_T_is_not_an_isomorphism():
    rep = T_unperiodized(build_tduality_model("Q", 8))
    assert rep.kills_one
    assert not rep.injective
    assert (rep.rank, rep.dimension) == (17, 18)
    assert rep.to_json()["kernel_witnesses"] == ["1"]


def test_periodized_T_is_the_swap():
    rep = T_periodized("Q", 10, 6)
    assert rep.matrix == Matrix.from_rows([[0, 1], [1, 0]])
    assert rep.det in (1, -1) and rep.isomorphism


def test_periodized_T_depth_stable():
    for depth in (2, 4, 6):
        assert T_periodized("Q", depth + 2, depth).matrix == Matrix.from_rows([[0, 1], [1, 0]])


def test_periodized_T_over_other_rings():
    rep = T_periodized("Z/6", 10, 6)
    assert rep.vacuous and rep.isomorphism
    for ring in ("Z", "Q/Z"):
        with pytest.raises(ValueError):
            T_periodized(ring, 10, 6)


def test_double_duality_is_W():
    rep = double_tduality("Q", 10, 6)
    assert rep.equal and rep.vectors_equal
    assert rep.W_matrix == Matrix.identity(2)


def test_untwisted_control_vanishes():
    assert untwisted_double_duality("Q", 6).is_zero()
