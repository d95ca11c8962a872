from fractions import Fraction

import pytest

from relexkit.config import RelexConfig
from relexkit.core.adapters import RandomStream
from relexkit.core.errors import CodeError, SimplexError, StructureError
from relexkit.core.factory import (FamilyFactory, make_set_code, make_stick_breaking_mixture, random_simplex)
from relexkit.core.simplex import MixingMeasure, SimplexPoint
from relexkit.core.strategies.base import CodeFamily
from relexkit.core.strategies.partitions import PartitionFamily
from relexkit.core.structures import Signature, Structure

pytestmark = pytest.mark.unit


class TestFamilyFactory:

    def test_default_families(self):
        assert {'partition', 'pairs', 'hyperedges', 'paths'} <= set(FamilyFactory.list_families())

    def test_unknown_family(self):
        with pytest.raises(ValueError, match='Unknown family'):
            FamilyFactory.create_family('trees')

    def test_instances_cached_per_config(self):
        first = FamilyFactory.create_family('pairs')
        assert FamilyFactory.create_family('pairs') is first
        FamilyFactory.clear_cache()
        assert FamilyFactory.create_family('pairs') is not first

    def test_config_passed_through(self):
        family = FamilyFactory.create_family('partition', RelexConfig())
        assert isinstance(family.config, RelexConfig)

    def test_register_rejects_foreign_class(self):
        with pytest.raises(ValueError):
            FamilyFactory.register_family('bogus', dict)

    def test_register_custom_family(self, monkeypatch):
        class Singletons(PartitionFamily):
            name = 'singletons'

        monkeypatch.setitem(FamilyFactory._families, 'singletons', Singletons)
        family = FamilyFactory.create_family('singletons')
        assert isinstance(family, CodeFamily)
        assert family.build('code', atom=2).encode() == '{1:[(2)]}'


class TestOperations:

    @pytest.mark.parametrize('family', ['partition', 'pairs', 'hyperedges', 'paths'])
    def test_unsupported_operation(self, family):
        with pytest.raises(ValueError):
            FamilyFactory.create_family(family).build('explode')

    @pytest.mark.parametrize('family', ['partition', 'pairs', 'hyperedges', 'paths'])
    def test_empty_operation(self, family):
        with pytest.raises(ValueError):
            FamilyFactory.create_family(family).build('')

    def test_pair_code_missing_argument(self):
        with pytest.raises(ValueError):
            FamilyFactory.create_family('pairs').build('code', i=1)

    def test_set_code_needs_members(self):
        with pytest.raises(ValueError):
            FamilyFactory.create_family('hyperedges').build('code', members=[])


class TestPartitionFamily:

    def test_singleton_code(self):
        family = FamilyFactory.create_family('partition')
        assert family.build('code', atom=0).encode() == '{1:[(0)]}'
        with pytest.raises(CodeError):
            family.build('code', atom=-1)

    def test_raw_structure(self):
        family = FamilyFactory.create_family('partition')
        assert family.build('structure', element=5) == Structure.of([(5,)])
        with pytest.raises(CodeError):
            family.build('structure', element=0)

    def test_stick_breaking_draws_paintboxes(self):
        phi = make_stick_breaking_mixture(2.0)
        assert isinstance(phi, MixingMeasure)
        f = phi.draw(RandomStream(0))
        assert f.sig == Signature((1,))
        ranked = sorted((code.atoms()[0], w) for code, w in f.support if code.atoms())
        atom_weights = [w for _, w in ranked]
        assert atom_weights == sorted(atom_weights, reverse=True)
        assert sum(f.weights()) == pytest.approx(1.0)

    def test_stick_breaking_reproducible(self):
        phi = make_stick_breaking_mixture(1.0, discount=0.3, truncation=20)
        assert phi.draw(RandomStream(4)).as_dict() == phi.draw(RandomStream(4)).as_dict()

    @pytest.mark.parametrize('kwargs', [{'alpha': 1.0, 'discount': 1.0}, {'alpha': -0.5},
                                        {'alpha': 1.0, 'truncation': 0}])
    def test_stick_breaking_parameters(self, kwargs):
        with pytest.raises(SimplexError):
            make_stick_breaking_mixture(**kwargs)

    def test_random_simplex(self):
        f = random_simplex('partition', rng=1, support_size=3)
        assert isinstance(f, SimplexPoint)
        assert len(f) == 3
        assert f.is_exact
        assert sum(f.weights()) == 1

    def test_random_simplex_too_few_codes(self):
        with pytest.raises(SimplexError):
            random_simplex('partition', rng=1, support_size=6, max_atoms=4)

    def test_random_simplex_reproducible(self):
        assert random_simplex('partition', rng=8).as_dict() == random_simplex('partition', rng=8).as_dict()

    def test_random_simplex_size_validated(self):
        with pytest.raises(ValueError):
            random_simplex('partition', rng=1, support_size=0)


class TestPairFamily:

    def test_raw_edges(self):
        family = FamilyFactory.create_family('pairs')
        assert family.build('structure', src=3, dst=5) == Structure.of([(3, 5)])
        assert family.build('structure', src=3, dst=5, directed=False) == Structure.of([(3, 5), (5, 3)])

    def test_self_loop(self):
        with pytest.raises(StructureError):
            FamilyFactory.create_family('pairs').build('structure', src=4, dst=4)

    def test_non_positive_raw_id(self):
        with pytest.raises(CodeError):
            FamilyFactory.create_family('pairs').build('structure', src=0, dst=4)

    def test_random_simplex_codes_valid(self):
        f = random_simplex('pairs', rng=3, support_size=4)
        assert f.sig == Signature((2,))
        for code in f.codes():
            (t,) = code.structure.slot(1)
            assert t[0] != t[1]

    def test_random_undirected(self):
        f = random_simplex('pairs', rng=3, support_size=2, directed=False)
        assert all(code.structure.size() == 2 for code in f.codes())


class TestHyperedgeFamily:

    def test_set_code_repeated_member(self):
        with pytest.raises(CodeError):
            make_set_code([1, 1])

    def test_set_code_exceeds_max_size(self):
        with pytest.raises(CodeError):
            make_set_code([1, 2, 3], max_size=2)

    def test_raw_set(self):
        family = FamilyFactory.create_family('hyperedges')
        assert family.build('structure', members=[3, 1]) == Structure.from_slots({2: [(3, 1), (1, 3)]})
        with pytest.raises(CodeError):
            family.build('structure', members=[0, 1])

    def test_random_simplex_signature(self):
        f = random_simplex('hyperedges', rng=5, support_size=3, max_size=2)
        assert f.sig == Signature((1, 2))
        for code in f.codes():
            k = code.structure.r
            assert len(code.structure.slot(k)) == (1 if k == 1 else 2)


class TestPathFamily:

    def test_raw_path(self):
        family = FamilyFactory.create_family('paths')
        assert family.build('structure', nodes=[4, 2, 9]) == Structure.from_slots({3: [(4, 2, 9)]})

    def test_repeated_node(self):
        with pytest.raises(CodeError):
            FamilyFactory.create_family('paths').build('structure', nodes=[4, 2, 4])

    def test_random_simplex_signature(self):
        f = random_simplex('paths', rng=6, support_size=3, max_size=3)
        assert f.sig == Signature((1, 2, 3))
        assert sum(f.weights()) == Fraction(1)
