import json

import numpy as np
import pytest

from grtlab.finite_groups import MapTableError, NaryMap, PairingError, group_from_spec, make_pairing
from grtlab import torsor_lab
from grtlab.torsor_lab import (LAB_TORSOR_PROPS, TorsorAxiomError, TorsorTable, anchored_group, axiom_certificate,
                               canonical_gamma,
                               f_maps, gamma_diff, gamma_diff_certificate, gamma_solve, iota_cycle, load_torsor,
                               run_lab_torsor, torsor_diff, torsor_diff_certificate, torsor_diff_counterexample_search,
                               torsor_from_group, torsor_from_table)


@pytest.fixture
def s3_torsor(s3):
    return torsor_from_group(s3)


@pytest.fixture
def z3_torsor():
    return torsor_from_group(group_from_spec("Z3"))


def test_group_torsors_are_heaps(s3_torsor):
    assert s3_torsor.heap
    assert not s3_torsor.abelian
    assert torsor_from_group(group_from_spec("Z5")).flags() == {"heap": True, "abelian": True}


def test_reflection_law_is_enforced():
    with pytest.raises(TorsorAxiomError, match="reflection"):
        TorsorTable("zeros", [0, 1], np.zeros((2, 2, 2), dtype=int))


def test_table_shape_is_enforced():
    with pytest.raises(TorsorAxiomError):
        torsor_from_table([0, 1], np.zeros((2, 2), dtype=int))
    with pytest.raises(TorsorAxiomError):
        TorsorTable("empty", [], np.zeros((0, 0, 0), dtype=int))


def test_load_torsor_from_json(tmp_path):
    idx = np.arange(3)
    table = (idx[:, None, None] - idx[None, :, None] + idx[None, None, :]) % 3
    path = tmp_path / "z3.json"
    path.write_text(json.dumps({"labels": ["a", "b", "c"], "table": table.tolist()}))
    T = load_torsor(str(path))
    assert T.order == 3
    assert T.abelian
    assert T.label(T.tau(0, 1, 2)) == "b"


def test_load_torsor_from_group_spec():
    assert load_torsor("Z6").order == 6


@pytest.mark.parametrize("base", range(6))
def test_anchored_group_recovers_the_torsor(s3_torsor, base):
    G, report = anchored_group(s3_torsor, base)
    assert report.passed
    assert G.identity == base


def test_klein_four_relations_hold_for_group_torsors(s3_torsor):
    _, report = f_maps(s3_torsor)
    assert report.passed
    assert report.extra["klein_four"] is True
    assert report.extra["abelian"] is False


@pytest.mark.parametrize("sign", ["-", "+"])
@pytest.mark.parametrize("tilde", [False, True])
@pytest.mark.parametrize("spec", ["Z6", "S3"])
def test_gamma_solutions_in_s3(rng, s3, sign, tilde, spec):
    T = load_torsor(spec)
    gamma, report = gamma_solve(NaryMap.random(T, 3, s3, rng), T, sign, tilde)
    assert report.passed
    assert report.points_checked == T.order ** 3


def test_gamma_solve_argument_checks(rng, s3, z3_torsor):
    phi = NaryMap.random(z3_torsor, 3, s3, rng)
    with pytest.raises(MapTableError):
        gamma_solve(phi, z3_torsor, sign="*")
    with pytest.raises(MapTableError):
        gamma_solve(NaryMap.random(s3, 3, s3, rng), z3_torsor)


class TestTorsorDifferential:

    def test_squares_to_identity(self, rng):
        T = load_torsor("Z5")
        br = make_pairing("heisenberg")
        report = torsor_diff_certificate(NaryMap.random(T, 3, br.group, rng), T, br)
        assert report.passed
        assert report.extra["checks"] == {"d^2=e": True, "d f1=(d f2)^-1": True}

    def test_needs_alternating_bihomomorphism(self, rng, s3_torsor):
        br = make_pairing("commutator")
        phi = NaryMap.random(s3_torsor, 3, br.group, rng)
        with pytest.raises(PairingError):
            torsor_diff(phi, s3_torsor, br)
        torsor_diff(phi, s3_torsor, br, permissive=True)

    def test_target_must_be_pairing_group(self, rng, z3_torsor):
        br = make_pairing("heisenberg")
        with pytest.raises(MapTableError):
            torsor_diff(NaryMap.random(z3_torsor, 3, group_from_spec("Z5"), rng), z3_torsor, br)


class TestGammaDifferential:

    @pytest.fixture
    def setup(self, rng, z3_torsor):
        br = make_pairing("heisenberg")
        phi0, phi, other = (NaryMap.random(z3_torsor, 3, br.group, rng) for _ in range(3))
        return z3_torsor, br, canonical_gamma(phi0, z3_torsor), phi, other

    def test_plus_sign_with_modified_leibniz(self, setup):
        T, br, gamma, phi, other = setup
        report = gamma_diff_certificate(gamma, phi, other, T, br, "+")
        assert report.passed
        assert set(report.extra["checks"]) == {"d^2=0", "output_symmetry", "modified_leibniz", "leibniz_mirror",
                                              "leibniz_unfolded"}

    @pytest.mark.parametrize("check", ["modified_leibniz", "leibniz_mirror", "leibniz_unfolded"])
    def test_each_leibniz_form_holds(self, setup, check):
        T, br, gamma, phi, other = setup
        report = gamma_diff_certificate(gamma, phi, other, T, br, "+")
        assert report.extra["checks"][check] is True

    def test_leibniz_forms_detect_a_broken_differential(self, setup, monkeypatch):
        T, br, gamma, phi, other = setup
        real = torsor_lab.gamma_diff

        def doubled(g, p, *args, **kwargs):
            d = real(g, p, *args, **kwargs)
            return d * d
        monkeypatch.setattr(torsor_lab, "gamma_diff", doubled)
        report = gamma_diff_certificate(gamma, phi, other, T, br, "+")
        assert not report.passed

    def test_minus_sign(self, setup):
        T, br, gamma, phi, other = setup
        report = gamma_diff_certificate(gamma, phi, other, T, br, "-")
        assert report.passed
        assert set(report.extra["checks"]) == {"d^2=0", "output_symmetry"}

    def test_rejects_maps_that_are_not_gammas(self, setup):
        T, br, _, phi, _ = setup
        bogus = NaryMap.constant(T, 3, br.group, br.group.index((0, 0, 1)))
        with pytest.raises(MapTableError):
            gamma_diff(bogus, phi, T, br)

    def test_rejects_non_abelian_target(self, rng, s3_torsor):
        br = make_pairing("commutator")
        phi = NaryMap.random(s3_torsor, 3, br.group, rng)
        with pytest.raises(MapTableError):
            gamma_diff(canonical_gamma(phi, s3_torsor), phi, s3_torsor, br)


@pytest.mark.parametrize("spec", ["Z2", "Z5", "S3"])
def test_iota_has_order_three(spec):
    _, report = iota_cycle(load_torsor(spec))
    assert report.passed


@pytest.mark.parametrize("prop", sorted(LAB_TORSOR_PROPS))
def test_lab_torsor_runs_pass(prop):
    reports = run_lab_torsor(prop, seed=5)
    assert reports
    assert all(r.passed for r in reports)
    assert all(r.extra["prop"] == prop for r in reports)


def test_lab_torsor_unknown_id():
    with pytest.raises(KeyError):
        run_lab_torsor("torsor-99")


class TestSkewPairingSearch:

    def test_ring_on_z2_is_skew_but_not_alternating(self):
        flags = make_pairing("ring", group_from_spec("Z2")).flags()
        assert flags["skew"] and flags["bihomomorphic"]
        assert not flags["alternating"]

    def test_constant_map_breaks_square_zero(self, rng):
        T = load_torsor("Z5")
        report = torsor_diff_counterexample_search(T, make_pairing("ring", group_from_spec("Z2")), rng)
        assert report.extra["counterexample"] == {"phi": "constant(1)", "x": [0, 0, 0], "d2": 1}
        assert report.extra["flags"]["alternating"] is False

    def test_alternating_pairing_has_no_counterexample(self, rng):
        report = torsor_diff_counterexample_search(load_torsor("Z3"), make_pairing("heisenberg"), rng, trials=2)
        assert report.extra["counterexample"] is None
        assert report.points_checked == 2 * 27

    def test_lab_defaults_to_ring_on_z2(self):
        [report] = run_lab_torsor("torsor-diff-skew", seed=3)
        assert report.extra["pairing"] == "ring"
        assert report.extra["counterexample"]["d2"] == 1


def test_torsor_diff_lab_uses_z5_cubed_target():
    [report] = run_lab_torsor("torsor-diff", seed=2)
    assert report.passed
    assert report.group == "torsor(Z5)"
    assert report.points_checked == 2 * 125


class TestAxiomReport:

    def test_group_torsor_passes(self):
        [report] = run_lab_torsor("axioms", torsor="S3")
        assert report.passed
        assert report.points_checked == 6 ** 2 + 6 ** 5
        assert report.extra["heap"] is True

    def test_failing_json_table_yields_violations(self, tmp_path):
        idx = np.arange(3)
        table = (idx[:, None, None] + idx[None, :, None] + idx[None, None, :]) % 3
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"labels": ["a", "b", "c"], "table": table.tolist()}))
        [report] = run_lab_torsor("axioms", torsor=str(path))
        assert not report.passed
        assert report.extra["checks"] == {"reflection": False, "para-associativity": True}
        assert report.violations[0] == {"check": "reflection", "at": ["a", "b"]}

    def test_malformed_shape_still_raises(self):
        with pytest.raises(TorsorAxiomError):
            axiom_certificate("flat", [0, 1], np.zeros((2, 2), dtype=int))
