import random

import pytest

from ccdual.catalog import all_posets, godel_algebras, named_algebra
from ccdual.chainspace import cc
from ccdual.certificate import Certificate
from ccdual.errors import CheckFailed, PreconditionError, ResourceError
from ccdual.freealg import (
    FreeAlgebraResult,
    certify_free,
    certify_free_generators,
    count_heyting_extensions,
    free_gan,
    free_gan_over_lattice,
    free_godel,
    free_godel_over_lattice,
    size_oracle,
    unit_laws_check,
)
from ccdual.lattice import (
    boolean_lattice,
    chain_lattice,
    coimplication_table,
    coresiduation_holds,
    enumerate_homs,
    find_lattice_isomorphism,
    is_in_gan,
    upset_lattice,
)
from ccdual.poset import antichain_poset, depth_of, diamond_poset, is_isomorphic


class TestOverLattice:
    def test_trivial(self):
        res = free_godel_over_lattice(chain_lattice(1))
        assert res.dual.size == 0 and res.algebra.size == 1

    def test_boolean_adds_nothing(self):
        res = free_godel_over_lattice(boolean_lattice(2))
        assert is_isomorphic(res.dual.order, antichain_poset(2))
        assert find_lattice_isomorphism(res.algebra, boolean_lattice(2)) is not None

    def test_free_distributive_on_two(self):
        res = free_godel_over_lattice(upset_lattice(diamond_poset()))
        assert res.dual.size == 11
        assert is_isomorphic(res.dual.order, cc(diamond_poset()).order)
        assert res.algebra.godel

    def test_unit_laws_on_corpus(self):
        for p in all_posets(4):
            res = free_godel_over_lattice(upset_lattice(p))
            cert = unit_laws_check(res)
            assert cert.passed, cert.failures[:3]
            if res.dual.size <= 11:
                assert res.unit_hom().map == res.unit_indices()


class TestOverGenerators:
    def test_zero(self):
        res = free_godel(0)
        assert res.dual.size == 1 and res.algebra.size == 2
        assert res.generators == 0

    def test_one(self):
        res = free_godel(1)
        assert res.dual.size == 3 and res.algebra.size == 6

    def test_two(self):
        res = free_godel(2)
        assert res.dual.size == 11
        assert res.algebra_size() == size_oracle(res) == 342
        assert res.algebra.size == 342

    @pytest.mark.slow
    def test_three_is_counted_not_built(self):
        res = free_godel(3)
        assert res.dual.size == 51
        assert res.algebra_size() == size_oracle(res)
        assert not res.materialized

    def test_generator_cap(self):
        with pytest.raises(ResourceError):
            free_godel(4)
        with pytest.raises(PreconditionError):
            free_godel(-1)

    def test_generators_are_distinct_boxes(self):
        res = free_godel(2)
        assert len(set(res.unit)) == 2
        for g in res.unit:
            assert res.dual.up_of(g) == g


class TestDepthBounded:
    def test_depth_one_is_boolean(self):
        for p in all_posets(3):
            lat = upset_lattice(p)
            res = free_gan_over_lattice(lat, 1)
            assert is_isomorphic(res.dual.order, antichain_poset(p.size))
            assert is_in_gan(res.algebra, 1)

    def test_depth_two_of_one_generator_is_everything(self):
        a, b = free_gan(1, 2), free_godel(1)
        assert find_lattice_isomorphism(a.algebra, b.algebra) is not None

    def test_two_generators_depth_two(self):
        res = free_gan(2, 2)
        assert res.dual.size == 9
        assert is_in_gan(res.algebra, 2)

    @pytest.mark.parametrize("k", [1, 2])
    def test_sizes_increase_then_settle(self, k):
        full = free_godel(k)
        d = depth_of(full.dual.order)
        sizes = [free_gan(k, n).algebra_size() for n in range(d + 3)]
        assert sizes == sorted(sizes)
        assert all(s == full.algebra_size() for s in sizes[d:])
        assert sizes[d - 1] < sizes[d]


class TestCertification:
    def test_trivial_target(self):
        res = free_godel_over_lattice(chain_lattice(3))
        cert = certify_free(res, chain_lattice(1))
        assert cert.passed and cert.details["algebraic"]["homs"] == 1

    def test_three_chain(self):
        res = free_godel_over_lattice(chain_lattice(3))
        cert = certify_free(res, chain_lattice(3), method="both")
        assert cert.passed, cert.failures
        assert cert.details["algebraic"]["homs"] == 3

    def test_diamond_into_free_one(self):
        res = free_godel_over_lattice(upset_lattice(diamond_poset()))
        cert = certify_free(res, free_godel(1).algebra, method="both")
        assert cert.passed, cert.failures[:3]
        assert cert.details["dual"]["homs"] == 36

    def test_needs_godel_target(self):
        res = free_godel_over_lattice(chain_lattice(3))
        with pytest.raises(PreconditionError):
            certify_free(res, upset_lattice(diamond_poset()))

    def test_depth_bounded_target_check(self):
        res = free_gan_over_lattice(chain_lattice(3), 1)
        with pytest.raises(PreconditionError, match="GA_n"):
            certify_free(res, chain_lattice(3))
        assert certify_free(res, boolean_lattice(2)).passed

    def test_wrong_dual_is_rejected(self):
        # an empty dual makes every unit image the bottom, so no hom extends
        fake = FreeAlgebraResult(cc(antichain_poset(0)), (0, 0, 0), chain_lattice(3))
        cert = certify_free(fake, chain_lattice(3))
        assert isinstance(cert, Certificate) and not cert.passed
        assert cert.details["algebraic"]["extensions"] == [0, 0, 0]
        with pytest.raises(CheckFailed):
            cert.raise_if_failed()

    def test_generators(self):
        res = free_godel(1)
        for h in godel_algebras(6):
            cert = certify_free_generators(res, h)
            assert cert.passed, cert.failures[:3]
            assert len(cert.details["extensions"]) == h.size

    def test_two_generators_into_three_chain(self):
        cert = certify_free_generators(free_godel(2), chain_lattice(3))
        assert cert.passed and len(cert.details["extensions"]) == 9

    def test_extension_counter_brute_force(self):
        # endomorphisms of the 3-chain fixing nothing: both Heyting homs
        h = chain_lattice(3)
        assert count_heyting_extensions(h, h, {}) == len(enumerate_homs(h, h, "heyting"))


class TestBiHeyting:
    @pytest.mark.parametrize("k", [0, 1])
    def test_exhaustive(self, k):
        alg = free_godel(k).algebra
        assert coresiduation_holds(alg)

    def test_two_generators_sampled(self):
        alg = free_godel(2).algebra
        rng = random.Random(7)
        n = alg.size
        triples = [(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(20000)]
        assert coresiduation_holds(alg, triples)

    def test_coimplication_of_chain(self):
        h = chain_lattice(3)
        table = coimplication_table(h)
        # a - b is the least c with a <= b v c
        assert table[2][1] == 2 and table[1][2] == 0 and table[2][0] == 2

    def test_named_free_algebras(self):
        assert named_algebra("free-1").size == 6
        assert named_algebra("free-0").size == 2
