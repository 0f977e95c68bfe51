import itertools
import random

import pytest
from hypothesis import given

import ccdual.coproduct as coproduct_module
from ccdual.catalog import all_root_systems, random_root_system
from ccdual.coproduct import (
    coproduct_gan,
    coproduct_godel,
    depth_check,
    depth_of_coproduct,
    gan_coincidence,
    mediating_map,
    product_poset,
    restrict_tensor,
    tensor,
    tensor_laws_check,
    tensor_projection,
    verify_product_universal,
    witness_chain,
    witness_size,
)
from ccdual.errors import CheckFailed, DimensionError, PreconditionError, ResourceError
from ccdual.lattice import boolean_lattice, chain_lattice, find_lattice_isomorphism, is_hom, upset_lattice
from ccdual.poset import (
    PMorph,
    antichain_poset,
    bits,
    chain_poset,
    count_upsets_forest,
    count_upsets_transfer,
    depth,
    depth_of,
    diamond_poset,
    disjoint_union,
    empty_poset,
    enumerate_monotone_maps,
    is_isomorphic,
    is_p_morphism,
    restrict_to_depth,
)
from strategies import root_systems


def tuples_of(t, mask):
    return sorted(t.tuples[x] for x in bits(mask))


class TestProduct:
    def test_square_is_diamond(self):
        p, _ = product_poset([chain_poset(2), chain_poset(2)])
        assert is_isomorphic(p, diamond_poset())

    def test_point_factor(self):
        p, _ = product_poset([diamond_poset(), chain_poset(1)])
        assert is_isomorphic(p, diamond_poset())

    def test_chain_times_antichain(self):
        p, _ = product_poset([chain_poset(2), antichain_poset(2)])
        two_chains = disjoint_union(chain_poset(2), chain_poset(2))
        assert p.size == 4 and is_isomorphic(p, two_chains)
        p, _ = product_poset([chain_poset(2), antichain_poset(3)])
        assert p.size == 6 and len(p.covers()) == 3

    def test_empty_product_is_point(self):
        p, tuples = product_poset([])
        assert p.size == 1 and tuples == [()]

    def test_size_cap(self):
        with pytest.raises(ResourceError):
            product_poset([chain_poset(10)] * 4, max_size=1000)


class TestTensor:
    def test_two_by_two(self):
        t = tensor([chain_poset(2), chain_poset(2)])
        got = sorted(tuples_of(t, m) for m in t.space.masks)
        expected = sorted([
            [(1, 1)],
            [(0, 0), (1, 1)], [(0, 1), (1, 1)], [(1, 0), (1, 1)],
            [(0, 0), (0, 1), (1, 1)], [(0, 0), (1, 0), (1, 1)],
        ])
        assert got == expected
        # the chain {00, 01} projects onto {0} in the second factor, not an upset
        assert not t.is_admissible(0b0011)

    def test_single_factor_is_the_factor(self):
        for y in all_root_systems(5):
            t = tensor([y])
            assert is_isomorphic(t.space.order, y)
            assert sorted(t.space.masks) == sorted(y.up[v] for v in range(y.size))

    def test_empty_factor(self):
        t = tensor([chain_poset(2), empty_poset()])
        assert t.space.size == 0

    def test_no_factors(self):
        t = tensor([])
        assert t.space.size == 1

    def test_needs_root_systems(self):
        with pytest.raises(PreconditionError, match="root system"):
            tensor([diamond_poset()])

    def test_methods_agree_exhaustively(self):
        ys = all_root_systems(3)
        for a, b in itertools.product(ys, ys):
            tensor([a, b], method="both")
        for a, b, c in itertools.combinations_with_replacement(all_root_systems(2), 3):
            tensor([a, b, c], method="both")

    @given(root_systems(4), root_systems(3))
    def test_methods_agree_random(self, a, b):
        t = tensor([a, b], method="both")
        cert = tensor_laws_check(t)
        assert cert.passed, cert.failures[:3]

    def test_cross_check_detects_mismatch(self, monkeypatch):
        monkeypatch.setattr(coproduct_module, "_generate_admissible", lambda *a: [])
        with pytest.raises(CheckFailed):
            tensor([chain_poset(2)], method="both")

    def test_laws_on_small_families(self):
        ys = all_root_systems(3)
        for a, b in itertools.product(ys, ys):
            if a.size * b.size <= 12:
                cert = tensor_laws_check(tensor([a, b]))
                assert cert.passed, cert.failures[:3]

    def test_restriction_is_depth_truncation(self):
        t = tensor([chain_poset(2), chain_poset(3)])
        for n in range(6):
            r = restrict_tensor(t, n)
            assert is_isomorphic(r.order, restrict_to_depth(t.space.order, n))


class TestProjections:
    def test_example(self):
        t = tensor([chain_poset(2), chain_poset(2)])
        k = t.space.index_of(0b1011)  # {00, 01, 11}
        assert tensor_projection(t, 0).map[k] == 0
        top = t.space.index_of(0b1000)
        assert all(tensor_projection(t, i).map[top] == 1 for i in range(2))

    def test_index_range(self):
        t = tensor([chain_poset(2)])
        with pytest.raises(DimensionError):
            tensor_projection(t, 1)

    def test_p_morphisms(self):
        ys = all_root_systems(3)
        for a, b in itertools.product(ys, ys):
            t = tensor([a, b])
            for i in range(2):
                assert is_p_morphism(tensor_projection(t, i))


class TestUniversal:
    def test_point(self):
        t = tensor([chain_poset(2), chain_poset(2)])
        pt = chain_poset(1)
        fs = [PMorph(pt, y, (1,)) for y in t.factors]
        assert verify_product_universal(t, pt, fs).passed

    def test_two_chain_identities(self):
        two = chain_poset(2)
        t = tensor([two, two])
        fs = [PMorph(two, two, (0, 1))] * 2
        masks = mediating_map(t, two, fs)
        assert [tuples_of(t, m) for m in masks] == [[(0, 0), (1, 1)], [(1, 1)]]
        assert verify_product_universal(t, two, fs).passed

    def test_all_small_sources(self):
        two = chain_poset(2)
        t = tensor([two, two])
        checked = 0
        for z in all_root_systems(3):
            p_maps = [PMorph(z, two, f) for f in enumerate_monotone_maps(z, two)]
            p_maps = [f for f in p_maps if is_p_morphism(f)]
            for f1, f2 in itertools.product(p_maps, p_maps):
                cert = verify_product_universal(t, z, [f1, f2])
                assert cert.passed, cert.failures
                checked += 1
        assert checked > 20

    def test_map_count_mismatch(self):
        two = chain_poset(2)
        t = tensor([two, two])
        with pytest.raises(DimensionError):
            verify_product_universal(t, two, [PMorph(two, two, (0, 1))])


class TestCoproducts:
    def test_one_factor(self):
        h = chain_lattice(4)
        alg, (inj,) = coproduct_godel([h])
        assert find_lattice_isomorphism(alg, h) is not None
        assert len(set(inj.map)) == h.size

    def test_two_element_is_unit(self):
        h = chain_lattice(3)
        alg, _ = coproduct_godel([chain_lattice(2), h])
        assert find_lattice_isomorphism(alg, h) is not None

    def test_three_chains(self):
        res = coproduct_godel([chain_lattice(3), chain_lattice(3)])
        assert res.space.size == 6
        assert res.algebra.size == count_upsets_transfer(res.space.order) == 19
        for inj in res.injections:
            assert is_hom(inj.source, inj.target, inj.map, "heyting")

    def test_injections_are_heyting_on_corpus(self):
        algs = [upset_lattice(y) for y in all_root_systems(3)]
        for a, b in itertools.product(algs, algs):
            res = coproduct_godel([a, b])
            if count_upsets_forest(res.space.order) > 1000:
                continue
            for inj in res.injections:
                assert is_hom(inj.source, inj.target, inj.map, "heyting")

    @pytest.mark.parametrize("m,n", list(itertools.product(range(1, 5), repeat=2)))
    def test_boolean_factors(self, m, n):
        res = coproduct_godel([boolean_lattice(m), boolean_lattice(n)])
        # upsets of an antichain form the power set of its points
        assert is_isomorphic(res.space.order, antichain_poset(m * n))
        if m * n <= 6:
            assert find_lattice_isomorphism(res.algebra, boolean_lattice(m * n)) is not None

    def test_needs_godel(self):
        with pytest.raises(PreconditionError):
            coproduct_godel([upset_lattice(diamond_poset())])


class TestDepth:
    def test_formula(self):
        assert depth_of_coproduct([1, 1, 1]) == 1
        assert depth_of_coproduct([2, 2]) == 3
        assert depth_of_coproduct([2, 3]) == 4
        assert depth_of_coproduct([]) == 1
        with pytest.raises(PreconditionError):
            depth_of_coproduct([0, 2])

    def test_two_by_two(self):
        t = tensor([chain_poset(2), chain_poset(2)])
        assert depth_of(t.space.order) == 3
        assert max(m.bit_count() for m in t.space.masks) == 3

    def test_two_by_three(self):
        cert = depth_check([chain_poset(2), chain_poset(3)])
        assert cert.passed and cert.details["computed"] == 4

    def test_algebras_accepted(self):
        assert depth_check([chain_lattice(3), chain_lattice(4)]).details["formula"] == 4

    def test_random_families(self):
        rng = random.Random(2024)
        for _ in range(100):
            fs = [random_root_system(rng, 4) for _ in range(rng.randint(1, 3))]
            cert = depth_check(fs)
            assert cert.passed, cert.failures[:3]


class TestWitness:
    def test_no_coordinates(self):
        y = chain_poset(2)
        mask, tuples = witness_chain([y, y], [1, 1], [])
        assert [tuples[x] for x in bits(mask)] == [(1, 1)]

    def test_two_bottoms(self):
        y = chain_poset(2)
        mask, tuples = witness_chain([y, y], [1, 1], [(1, 0), (0, 0)])
        assert sorted(tuples[x] for x in bits(mask)) == [(0, 0), (1, 0), (1, 1)]
        mask, tuples = witness_chain([y, y], [1, 1], [(0, 0), (1, 0)])
        assert sorted(tuples[x] for x in bits(mask)) == [(0, 0), (0, 1), (1, 1)]

    def test_preconditions(self):
        y = chain_poset(2)
        with pytest.raises(PreconditionError, match="maximal"):
            witness_chain([y], [0], [])
        with pytest.raises(PreconditionError):
            witness_chain([y, y], [1, 1], [(0, 0), (0, 0)])
        with pytest.raises(DimensionError):
            witness_chain([y, y], [1], [])

    def test_random_instances(self):
        rng = random.Random(11)
        for _ in range(200):
            fs = [random_root_system(rng, 4) for _ in range(rng.randint(1, 3))]
            ws = [rng.choice(list(bits(f.maximal()))) for f in fs]
            idx = rng.sample(range(len(fs)), rng.randint(0, len(fs)))
            zs = [(i, rng.choice(list(bits(fs[i].down[ws[i]])))) for i in idx]
            mask, _ = witness_chain(fs, ws, zs)
            t = tensor(fs)
            assert mask in t.space.index
            assert mask.bit_count() == witness_size(fs, zs) == 1 + sum(depth(fs[i], z) - 1 for i, z in zs)


class TestDepthBoundedCoproducts:
    def test_coincide(self):
        assert gan_coincidence([chain_lattice(3), chain_lattice(3)], 3)

    def test_differ(self):
        gs = [chain_lattice(3), chain_lattice(3)]
        assert not gan_coincidence(gs, 2)
        res = coproduct_gan(gs, 2)
        assert res.space.size == 4 and res.tensor.space.size == 6

    def test_single_factor(self):
        for n in range(3, 6):
            assert gan_coincidence([chain_lattice(3)], n)

    def test_factor_too_deep(self):
        with pytest.raises(PreconditionError, match="GA_n"):
            coproduct_gan([chain_lattice(4)], 2)

    def test_trivial_factor(self):
        with pytest.raises(PreconditionError):
            gan_coincidence([chain_lattice(1)], 2)

    def test_matches_inequality(self):
        for d1, d2 in itertools.product(range(1, 4), repeat=2):
            gs = [chain_lattice(d1 + 1), chain_lattice(d2 + 1)]
            for n in range(max(d1, d2), 6):
                assert gan_coincidence(gs, n) == ((d1 - 1) + (d2 - 1) <= n - 1)
