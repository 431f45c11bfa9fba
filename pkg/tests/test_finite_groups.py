import numpy as np
import pytest

from grtlab.finite_groups import (FiniteGroup, GroupTableError, MapTableError, NaryMap, PairingError, compose_maps,
                                  cyclic_group, direct_product, domain_coords, group_from_spec, make_pairing,
                                  maps_equal, symmetric_group)


@pytest.mark.parametrize("spec, order, abelian, exponent", [
    ("Z5", 5, True, 5),
    ("Z6", 6, True, 6),
    ("Z3^2", 9, True, 3),
    ("Z2xZ4", 8, True, 4),
    ("S3", 6, False, 6),
])
def test_group_specs(spec, order, abelian, exponent):
    G = group_from_spec(spec)
    assert G.order == order
    assert G.abelian is abelian
    assert G.exponent == exponent


def test_specs_are_cached():
    assert group_from_spec("Z5") is group_from_spec("Z5")


@pytest.mark.parametrize("spec", ["Q8", "Z", "S9", "Z3^0", ""])
def test_bad_specs(spec):
    with pytest.raises(GroupTableError):
        group_from_spec(spec)


def test_non_associative_table_is_rejected():
    idx = np.arange(3)
    with pytest.raises(GroupTableError, match="associative"):
        FiniteGroup("minus", list(range(3)), (idx[:, None] - idx[None, :]) % 3)


def test_table_without_inverses_is_rejected():
    with pytest.raises(GroupTableError):
        FiniteGroup("max", [0, 1], np.array([[0, 1], [1, 1]]))


def test_group_operations(s3):
    a = s3.index((1, 0, 2))
    assert s3.mul(a, a) == s3.identity
    assert s3.inv(a) == a
    assert s3.power(a, 3) == a
    assert s3.power(a, -1) == a
    assert s3.label(s3.identity) == (0, 1, 2)


def test_s3_is_not_commutative(s3):
    a, b = s3.index((1, 0, 2)), s3.index((0, 2, 1))
    assert s3.mul(a, b) != s3.mul(b, a)


def test_direct_product_labels():
    G = direct_product([cyclic_group(2), cyclic_group(3)])
    assert G.order == 6
    assert G.factors == ("Z2", "Z3")
    assert G.label(G.mul(G.index((1, 2)), G.index((1, 2)))) == (0, 1)


def test_symmetric_group_degree_limit():
    with pytest.raises(GroupTableError):
        symmetric_group(6)


def test_domain_coords_and_composition(z5):
    x, y = domain_coords(z5, 2)
    swap = (y, x)
    assert maps_equal(compose_maps(swap, swap), (x, y)).all()


class TestNaryMap:

    def test_table_must_be_total(self, z5):
        with pytest.raises(MapTableError):
            NaryMap(z5, 2, z5, np.zeros((5, 4), dtype=int))

    def test_values_must_lie_in_target(self, z5):
        with pytest.raises(MapTableError):
            NaryMap(z5, 1, z5, np.full(5, 7))

    def test_declared_symmetry_is_checked(self, z5):
        proj = NaryMap(z5, 2, z5, domain_coords(z5, 2)[0])
        with pytest.raises(MapTableError):
            NaryMap(z5, 2, z5, proj.table, symmetric=True)

    def test_symmetrize_and_antisymmetrize(self, z5, rng):
        phi = NaryMap.random(z5, 3, z5, rng)
        assert phi.symmetrize().is_symmetric()
        assert phi.antisymmetrize().is_skew()

    def test_symmetrize_needs_abelian_target(self, z5, s3, rng):
        with pytest.raises(MapTableError):
            NaryMap.random(z5, 2, s3, rng).symmetrize()

    def test_pointwise_group_structure(self, small_group, rng):
        phi = NaryMap.random(small_group, 2, small_group, rng)
        assert (phi * phi.inverse()).is_identity()
        assert phi.power(small_group.exponent).is_identity()
        assert phi == phi.like(phi.table.copy())

    def test_substitute_slot(self, z5):
        proj = NaryMap.from_function(z5, 2, z5, lambda i, j: i)
        zeros = np.zeros((5, 5), dtype=int)
        assert proj.substitute_slot(0, zeros).is_identity()
        assert proj.substitute_slot(1, zeros) == proj


class TestPairings:

    def test_ring_is_symmetric_not_alternating(self):
        ring = make_pairing("ring", group_from_spec("Z5"))
        assert ring.bihomomorphic and ring.symmetric
        assert not ring.alternating
        with pytest.raises(PairingError, match="alternating"):
            ring.require("alternating")

    @pytest.mark.parametrize("name", ["heisenberg", "cross", "det", "z2z4", "zero"])
    def test_catalog_lie_brackets(self, name):
        assert make_pairing(name).is_lie_bracket

    def test_commutator_on_s3_is_not_bihomomorphic(self):
        br = make_pairing("commutator")
        assert br.alternating
        assert not br.bihomomorphic
        with pytest.raises(PairingError, match="fails at"):
            br.require("bihomomorphic")

    def test_pairing_group_shape_is_checked(self):
        with pytest.raises(PairingError):
            make_pairing("ring", group_from_spec("Z3^2"))
        with pytest.raises(PairingError):
            make_pairing("heisenberg", group_from_spec("Z3^2"))
        with pytest.raises(PairingError):
            make_pairing("no-such-pairing")

    def test_flags_are_reported(self):
        flags = make_pairing("heisenberg").flags()
        assert flags == {"bihomomorphic": True, "skew": True, "symmetric": False, "alternating": True,
                         "jacobi": True}
