import pytest

from grtlab.dk_pentagon import (PresentationError, TruncationError, build, dk_aliases, dk_generators, dk_relations,
                                drinfeld_kohno, pentagon_residual, semidirect_dimensions)
from grtlab.lie_core import LieSeries, bracket
from grtlab.lie_format import parse


@pytest.mark.parametrize("n, expected", [
    (2, [1, 0, 0, 0, 0]),
    (3, [3, 1, 2, 3, 6]),
    (4, [6, 4, 10, 21, 54]),
])
def test_drinfeld_kohno_dimensions(n, expected):
    assert drinfeld_kohno(n, 5).dimensions() == expected


def test_t4_matches_semidirect_count():
    assert drinfeld_kohno(4, 5).dimensions() == semidirect_dimensions(4, 5)


def test_relation_counts():
    assert len(dk_relations(3)) == 3
    assert len(dk_relations(4)) == 15
    assert drinfeld_kohno(4, 3).ideal_rank(2) == 11


def test_ideal_is_saturated():
    t4 = drinfeld_kohno(4, 4)
    assert all(t4.saturated.values())


def test_generator_names():
    assert dk_generators(3) == ("t12", "t13", "t23")
    assert dk_aliases(3)["t31"] == "t13"
    with pytest.raises(PresentationError):
        dk_generators(1)
    with pytest.raises(PresentationError):
        dk_generators(10)


def test_braid_relations_reduce_to_zero():
    t4 = drinfeld_kohno(4, 4)
    gens = t4.generators
    assert t4.reduce(parse("[t12, t13 + t23]", gens, 4)).is_zero()
    assert t4.reduce(parse("[t12, t34]", gens, 4)).is_zero()
    assert t4.reduce(parse("[t21, t34]", gens, 4, aliases=dk_aliases(4))).is_zero()
    assert not t4.reduce(parse("[t12, t13]", gens, 4)).is_zero()


def test_quotient_arithmetic_and_bracket():
    t3 = drinfeld_kohno(3, 4)
    t12, t13, t23 = (t3.reduce(t3.generator(g)) for g in t3.generators)
    assert t12.bracket(t13) == -(t12.bracket(t23))
    assert (t12 + t13) - t13 == t12
    assert (2 * t12).lift() == 2 * t3.generator("t12")
    assert str(t12) == "t12"
    assert t12.to_dict()["terms"] == [{"degree": 1, "index": 0, "word": "t12", "coeff": "1"}]


def test_reduce_rejects_foreign_or_overlong_series():
    t3 = drinfeld_kohno(3, 3)
    with pytest.raises(PresentationError):
        t3.reduce(LieSeries.generator(("x", "y"), 3, "x"))
    s = parse("[t12,[t12,[t12,t13]]]", t3.generators, 4)
    with pytest.raises(TruncationError):
        t3.reduce(s.with_max_degree(4))


def test_build_validates_relations():
    gens = ("a", "b")
    a, b = LieSeries.generators(gens, 3)
    with pytest.raises(PresentationError):
        build(gens, [a + bracket(a, b)], 3)
    with pytest.raises(PresentationError):
        build(gens, [LieSeries.generator(("c",), 3, "c")], 3)
    with pytest.raises(PresentationError):
        build(gens, [], 0)


def test_build_commutative_quotient():
    gens = ("a", "b")
    a, b = LieSeries.generators(gens, 4)
    algebra = build(gens, [bracket(a, b)], 4)
    assert algebra.dimensions() == [2, 0, 0, 0]
    assert algebra.describe()["basis"]["1"] == ["a", "b"]


def test_pentagon_residual_on_generators(xy, xy_bracket):
    x, y = xy
    t4 = drinfeld_kohno(4, 3)
    t12 = t4.reduce(t4.generator("t12"))
    t34 = t4.reduce(t4.generator("t34"))
    assert pentagon_residual(x.with_max_degree(3), 3) == -t12
    assert pentagon_residual(y.with_max_degree(3), 3) == -t34
    assert pentagon_residual(xy_bracket.with_max_degree(3), 3).is_zero()


def test_pentagon_residual_is_linear(xy):
    x, y = xy
    r = pentagon_residual((x + 2 * y).with_max_degree(3), 3)
    assert r == pentagon_residual(x.with_max_degree(3), 3) + 2 * pentagon_residual(y.with_max_degree(3), 3)


def test_pentagon_residual_truncation():
    phi = parse("[x,[x,y]]", ("x", "y"), 3)
    with pytest.raises(TruncationError):
        pentagon_residual(phi, 2)
