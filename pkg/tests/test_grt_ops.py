from fractions import Fraction

import pytest

from grtlab.dk_pentagon import pentagon_residual
from grtlab.grt_ops import (LIE2, WrongAlphabetError, alpha, antihexagon_project, antihexagon_residual,
                            drinfeld_eq3_residual, grt_solutions, hexagon_project, hexagon_residual, ihara_bracket,
                            lambda_compose, lambda_inverse, lie2, projector_certificate, sigma3, sigma5,
                            skew_symmetrize, swap)
from grtlab.lie_core import LieSeries, random_series
from grtlab.lie_format import format_series, parse


def test_alpha_on_generators_and_bracket(xy, xy_bracket):
    x, y = xy
    assert alpha(x) == -x
    assert alpha(y) == -y
    assert alpha(xy_bracket) == 2 * xy_bracket


def test_generators_are_hexagon_solutions(xy):
    x, _ = xy
    assert hexagon_residual(x).is_zero()
    assert hexagon_project(x) == x
    assert antihexagon_project(x).is_zero()


def test_bracket_is_antihexagon(xy_bracket):
    assert hexagon_residual(xy_bracket) == 3 * xy_bracket
    assert hexagon_project(xy_bracket).is_zero()
    assert antihexagon_residual(xy_bracket).is_zero()
    assert antihexagon_project(xy_bracket) == xy_bracket


def test_projectors_split_identity(rng):
    phi = random_series(LIE2, 5, rng)
    h, a = hexagon_project(phi), antihexagon_project(phi)
    assert h + a == phi
    assert hexagon_project(h) == h
    assert hexagon_residual(h).is_zero()
    assert antihexagon_residual(a).is_zero()


def test_alpha_satisfies_its_quadratic(rng):
    phi = random_series(LIE2, 5, rng)
    assert alpha(alpha(phi)) == 2 * phi + alpha(phi)


def test_lambda_inverse_undoes_lambda(rng):
    phi = random_series(LIE2, 4, rng)
    lam = Fraction(3, 7)
    assert lambda_inverse(lam, lambda_compose(lam, 0, phi)) == phi
    assert lambda_compose(lam, 0, lambda_inverse(lam, phi)) == phi


@pytest.mark.parametrize("lam", [1, Fraction(-1, 2)])
def test_lambda_inverse_singular_values(xy, lam):
    x, _ = xy
    with pytest.raises(ValueError):
        lambda_inverse(lam, x)


def test_skew_symmetrize_and_swap(xy, xy_bracket):
    x, y = xy
    assert swap(x) == y
    assert skew_symmetrize(xy_bracket) == xy_bracket
    assert skew_symmetrize(x + y).is_zero()


def test_operators_need_two_letters():
    s = LieSeries.generator(("a", "b", "c"), 3, "a")
    with pytest.raises(WrongAlphabetError):
        alpha(s)


def test_eq3_residual_of_bracket(xy_bracket):
    expected = parse("[x,[x,y]] + 2[y,[x,y]]", LIE2, 5)
    assert drinfeld_eq3_residual(xy_bracket) == expected


def test_sigma3_fixture():
    s = sigma3(max_degree=4)
    assert format_series(s) == "[x,[x,y]] - [[x,y],y]"
    assert (s + swap(s)).is_zero()
    assert hexagon_residual(s).is_zero()
    assert drinfeld_eq3_residual(s).is_zero()
    assert pentagon_residual(s.with_max_degree(3), 3).is_zero()


def test_bracket_passes_pentagon_but_not_hexagon(xy_bracket):
    assert pentagon_residual(xy_bracket.with_max_degree(3), 3).is_zero()
    assert not hexagon_residual(xy_bracket).is_zero()


@pytest.mark.parametrize("degree, expected", [(1, 0), (2, 0), (3, 1), (4, 0), (5, 1)])
def test_grt_dimensions(degree, expected):
    assert len(grt_solutions(degree)) == expected


def test_degree_one_needs_the_pentagon():
    (sol,) = grt_solutions(1, include_pentagon=False)
    assert sol.degrees() == [1]


def test_sigma5_is_unique_degree_five_solution():
    s = sigma5()
    assert s.degrees() == [5]
    assert (s + swap(s)).is_zero()
    assert hexagon_residual(s).is_zero()


def test_ihara_bracket_is_antisymmetric(rng):
    f = random_series(LIE2, 5, rng, degrees=[2])
    g = random_series(LIE2, 5, rng, degrees=[3])
    assert ihara_bracket(f, g) == -ihara_bracket(g, f)
    assert ihara_bracket(f, f).is_zero()


def test_x_is_central_for_ihara_bracket(xy, rng):
    x, _ = xy
    # D_x = -ad_x on the generators
    g = random_series(LIE2, 5, rng)
    assert ihara_bracket(x, g).is_zero()


def test_ihara_bracket_stays_in_grt():
    top = 9
    b = ihara_bracket(sigma3(top), sigma5(top))
    assert not b.is_zero()
    assert b.degrees() == [8]
    assert (b + swap(b)).is_zero()
    assert hexagon_residual(b).is_zero()
    assert drinfeld_eq3_residual(b).is_zero()


# Lyndon coordinates of {sigma3, sigma5} with at most two x's or at most two y's.
# With u_n = ad_x^n y the two-y part is [u2, u4] + ad_x^4 [y, u2] - ad_x^2 [y, u4] = 2[u1, u5] + 5[u2, u4];
# the two-x part follows from skew-symmetry.
IHARA_S3_S5_FIXTURE = {
    "xxxxxxxy": 0,
    "xxxxxxyy": 0,
    "xxxxxyxy": -2,
    "xxxxyxxy": -1,
    "xxyyyyyy": 0,
    "xyxyyyyy": -2,
    "xyyxyyyy": -5,
    "xyyyyyyy": 0,
}


@pytest.fixture(scope="module")
def s3_s5():
    return ihara_bracket(sigma3(8), sigma5(8))


@pytest.mark.parametrize("word, coeff", sorted(IHARA_S3_S5_FIXTURE.items()))
def test_ihara_bracket_sigma3_sigma5_fixture(s3_s5, word, coeff):
    assert s3_s5.coefficient(tuple("xy".index(c) for c in word)) == coeff


def test_sigma5_is_normalised_on_ad_x_power():
    s = sigma5(5)
    assert s.coefficient((0, 0, 0, 0, 1)) == 1


def test_projector_certificate_passes(rng):
    report = projector_certificate(rng, samples=4, max_degree=5, pairs=2)
    assert report.passed
    assert report.points_checked == 4


def test_lie2_generators():
    x, y = lie2(3)
    assert x.alphabet == ("x", "y")
    assert x.max_degree == 3
