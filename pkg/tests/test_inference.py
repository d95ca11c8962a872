from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from relexkit.config import RelexConfig
from relexkit.core.canonical import RelSequence
from relexkit.core.errors import (AbsentElementError, BudgetExceededError, EmptySequenceError, SampleSizeError,
                                  SequenceMismatchError, SimplexError)
from relexkit.core.factory import make_paintbox, make_pair_code, make_stick_breaking_mixture
from relexkit.core.inference import (ChiSquareReport, ClassDistribution, _pooled_table, arrival_order,
                                     empirical_propensity, epsilon_f_sampler, epsilon_phi_sampler, estimate_f,
                                     exact_distribution, exact_mixture_distribution, exact_positional_distribution,
                                     merge_blip_classes, partition_blocks, positional_sampler, push_forward,
                                     test_exchangeability_exact, test_exchangeability_mc)
from relexkit.core.simplex import MixingMeasure, SimplexPoint, dagger

pytestmark = pytest.mark.unit

SAME_BLOCK = '{1:[(1)]}|{1:[(1)]}'
SPLIT = '{1:[(1)]}|{1:[(2)]}'


@pytest.fixture
def atom_atom_blip(partition_sig):
    atom = SimplexPoint.degenerate('{1:[(1)]}', partition_sig)
    blip = SimplexPoint.degenerate('{1:[(0)]}', partition_sig)
    return [atom, atom, blip]


@pytest.fixture
def swapped_pairs(pair_sig):
    """第一项 {(1,0)}，第二项 {(0,1)}：原子的方向随位置改变"""
    return [SimplexPoint.degenerate(make_pair_code(1, 0), pair_sig),
            SimplexPoint.degenerate(make_pair_code(0, 1), pair_sig)]


class TestEstimate:

    def test_partition_trace(self, partition_trace):
        assert estimate_f(partition_trace).as_dict() == {'{1:[(1)]}': Fraction(3, 7), '{1:[(0)]}': Fraction(4, 7)}

    def test_phone_calls(self, calls):
        f_hat = estimate_f(calls)
        assert f_hat.as_dict() == {'{1:[(1,0)]}': Fraction(1, 4), '{1:[(2,1)]}': Fraction(1, 4),
                                   '{1:[(0,-1)]}': Fraction(1, 4), '{1:[(1,2)]}': Fraction(1, 4)}

    def test_invariant_under_relabeling(self, calls):
        relabeled = calls.relabel({7: 40, 9: 3, 2: 11, 8: 12, 4: 1})
        assert estimate_f(relabeled) == estimate_f(calls)

    def test_threshold_override(self, calls):
        assert estimate_f(calls, recurrence_threshold=4).as_dict() == {'{1:[(0,-1)]}': 1}

    def test_empty(self, pair_sig):
        with pytest.raises(EmptySequenceError):
            estimate_f(RelSequence((), pair_sig))

    def test_blip_classes_merged(self, pair_sig):
        f = SimplexPoint.from_mapping({'{1:[(0,-1)]}': Fraction(1, 2), '{1:[(-1,0)]}': Fraction(1, 2)}, pair_sig)
        assert merge_blip_classes(f).as_dict() == {'{1:[(0,-1)]}': 1}

    def test_merge_keeps_distinct_codes(self, pair_point):
        assert merge_blip_classes(pair_point) == pair_point


def weighted_sequence(f, copies=2):
    """按 f 的精确权重逐一展开编码的序列，含较小原子的编码排在前面"""
    scale = copies * int(np.lcm.reduce([w.denominator for w in f.weights()]))
    codes = [code for code, w in f.support for _ in range(int(w * scale))]
    codes.sort(key=lambda code: min(code.atoms(), default=len(codes) + 1))
    return dagger(codes, f.sig)


class TestEstimatorFixedPoint:

    def test_ordered_pairs(self, pair_sig):
        f = SimplexPoint.from_mapping({make_pair_code(1, 2): Fraction(1, 2), make_pair_code(3, 1): Fraction(1, 3),
                                       make_pair_code(2, 3): Fraction(1, 6)}, pair_sig)
        assert estimate_f(weighted_sequence(f)) == f

    @pytest.mark.parametrize('atoms', [
        [Fraction(1, 2), Fraction(3, 10), Fraction(1, 5)],
        [Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)],
        [Fraction(1)],
    ])
    def test_blip_free_paintbox(self, atoms):
        f = make_paintbox(0, atoms)
        assert estimate_f(weighted_sequence(f)) == f

    @pytest.mark.parametrize('copies', [2, 3, 5])
    def test_copies_do_not_matter(self, paintbox, copies):
        assert estimate_f(weighted_sequence(paintbox, copies)) == paintbox

    def test_with_blips_up_to_blip_classes(self, pair_sig):
        f = SimplexPoint.from_mapping({make_pair_code(1, 0): Fraction(1, 2), make_pair_code(1, 2): Fraction(1, 4),
                                       make_pair_code(-1, 0): Fraction(1, 4)}, pair_sig)
        f_hat = estimate_f(weighted_sequence(f))
        assert f_hat == merge_blip_classes(f)
        assert f_hat.weight('{1:[(0,-1)]}') == Fraction(1, 4)


class TestDescriptive:

    def test_empirical_propensity(self, calls_canonical):
        assert empirical_propensity(calls_canonical, 1) == Fraction(3, 4)
        assert empirical_propensity(calls_canonical, 5) == Fraction(1, 4)

    def test_absent_element(self, calls_canonical):
        with pytest.raises(AbsentElementError):
            empirical_propensity(calls_canonical, 9)

    def test_partition_blocks(self, partition_canonical):
        assert partition_blocks(partition_canonical) == [(1,), (2,), (3, 5, 6), (4,), (7,)]

    def test_partition_blocks_needs_singletons(self, calls):
        with pytest.raises(SequenceMismatchError):
            partition_blocks(calls)

    def test_arrival_order(self, partition_canonical):
        assert arrival_order(partition_canonical) == [(1, Fraction(1, 7)), (2, Fraction(1, 7)), (3, Fraction(3, 7)),
                                                      (4, Fraction(1, 7)), (5, Fraction(1, 7))]

    def test_arrival_order_raw_labels(self, calls):
        assert [a for a, _ in arrival_order(calls)] == [7, 9, 2, 8, 4]
        assert dict(arrival_order(calls))[7] == Fraction(3, 4)

    def test_arrival_order_empty(self, pair_sig):
        assert arrival_order(RelSequence((), pair_sig)) == []


class TestExactDistribution:

    def test_coin(self, coin):
        dist = exact_distribution(coin, 2)
        assert dist.probs == {SAME_BLOCK: Fraction(1, 4), SPLIT: Fraction(3, 4)}
        assert dist.total == 1

    def test_paintbox_same_block(self, paintbox):
        dist = exact_distribution(paintbox, 2)
        assert dist.get(SAME_BLOCK) == Fraction(19, 50)
        assert dist.get(SPLIT) == Fraction(31, 50)

    def test_length_zero(self, paintbox):
        dist = exact_distribution(paintbox, 0)
        assert dist.probs == {'': 1}

    def test_negative_length(self, paintbox):
        with pytest.raises(SequenceMismatchError):
            exact_distribution(paintbox, -1)

    def test_budget(self, paintbox):
        with pytest.raises(BudgetExceededError):
            exact_distribution(paintbox, 13, budget=1000)

    def test_budget_from_config(self, paintbox, mocker):
        mocker.patch.object(RelexConfig, 'get_enumeration_budget', return_value=8)
        exact_distribution(paintbox, 1)
        with pytest.raises(BudgetExceededError):
            exact_distribution(paintbox, 2)

    def test_float_weights(self, partition_sig):
        f = SimplexPoint.from_mapping({'{1:[(1)]}': 0.5, '{1:[(0)]}': 0.5}, partition_sig)
        dist = exact_distribution(f, 2)
        assert not dist.is_exact
        assert dist.get(SAME_BLOCK) == pytest.approx(0.25)

    def test_items_sorted_by_probability(self, coin):
        assert [key for key, _ in exact_distribution(coin, 2).items()] == [SPLIT, SAME_BLOCK]

    def test_representatives_are_canonical(self, pair_point):
        dist = exact_distribution(pair_point, 3)
        for key, rep in dist.representatives.items():
            assert rep.encode() == key
        assert dist.total == 1

    def test_positional(self, atom_atom_blip):
        dist = exact_positional_distribution(atom_atom_blip)
        assert dist.probs == {'{1:[(1)]}|{1:[(1)]}|{1:[(2)]}': 1}

    def test_positional_needs_points(self):
        with pytest.raises(SimplexError):
            exact_positional_distribution([])

    def test_mixture(self, paintbox, coin):
        phi = MixingMeasure(((Fraction(1, 2), paintbox), (Fraction(1, 2), coin)))
        dist = exact_mixture_distribution(phi, 2)
        assert dist.get(SAME_BLOCK) == Fraction(1, 2) * Fraction(19, 50) + Fraction(1, 2) * Fraction(1, 4)

    def test_mixture_generator_rejected(self):
        with pytest.raises(SimplexError):
            exact_mixture_distribution(make_stick_breaking_mixture(1.0), 2)

    def test_total_variation(self, coin, paintbox):
        p = exact_distribution(coin, 2)
        q = exact_distribution(paintbox, 2)
        assert p.tv(q) == Fraction(19, 50) - Fraction(1, 4)
        assert p.tv(p) == 0

    def test_push_forward_swap(self, coin):
        dist = exact_distribution(coin, 2)
        assert push_forward(dist, (2, 1)) == dist.probs


class TestExactExchangeability:

    def test_paintbox(self, paintbox):
        report = test_exchangeability_exact(paintbox, 3)
        assert report.max_tv == 0
        assert report.exchangeable
        assert len(report.per_sigma) == 6

    def test_pair_point(self, pair_point):
        assert test_exchangeability_exact(pair_point, 3).exchangeable

    def test_mixture(self, paintbox, coin):
        phi = MixingMeasure(((Fraction(1, 3), paintbox), (Fraction(2, 3), coin)))
        assert test_exchangeability_exact(phi, 3).exchangeable

    def test_float_weights(self, partition_sig):
        f = SimplexPoint.from_mapping({'{1:[(1)]}': 0.3, '{1:[(2)]}': 0.3, '{1:[(0)]}': 0.4}, partition_sig)
        assert test_exchangeability_exact(f, 3).exchangeable

    def test_swapped_pairs_not_exchangeable(self, swapped_pairs):
        report = test_exchangeability_exact(swapped_pairs)
        assert report.max_tv == 1
        assert not report.exchangeable
        assert dict(report.per_sigma)[(2, 1)] == 1

    def test_atom_atom_blip(self, atom_atom_blip):
        report = test_exchangeability_exact(atom_atom_blip)
        assert report.n == 3
        assert report.max_tv == 1
        assert dict(report.per_sigma)[(2, 1, 3)] == 0

    def test_missing_length(self, paintbox):
        with pytest.raises(SequenceMismatchError):
            test_exchangeability_exact(paintbox)

    def test_length_must_match_points(self, atom_atom_blip):
        with pytest.raises(SequenceMismatchError):
            test_exchangeability_exact(atom_atom_blip, 2)

    def test_report_json(self, swapped_pairs):
        payload = test_exchangeability_exact(swapped_pairs).to_json()
        assert payload['max_tv'] == '1'
        assert payload['n'] == 2
        assert {'sigma': [1, 2], 'tv': '0'} in payload['per_sigma']


class TestPooledTable:

    def test_no_pooling(self):
        table = _pooled_table(Counter(a=500, b=500), Counter(a=480, b=520), 5.0)
        assert table.shape == (2, 2)
        np.testing.assert_array_equal(table[:, 0], [500, 480])

    def test_rare_class_merged_into_smallest(self):
        table = _pooled_table(Counter(a=500, b=498, c=2), Counter(a=500, b=500), 5.0)
        assert table.shape == (2, 2)
        assert table.sum() == 2000
        np.testing.assert_array_equal(table[:, 1], [500, 500])

    def test_rare_classes_form_own_bin(self):
        first = Counter(a=490, **{f'r{k}': 1 for k in range(10)})
        second = Counter(a=490, **{f'r{k}': 1 for k in range(10, 20)})
        table = _pooled_table(first, second, 5.0)
        assert table.shape == (2, 2)
        np.testing.assert_array_equal(table[:, 1], [10, 10])

    def test_everything_pooled(self):
        assert _pooled_table(Counter(a=1), Counter(b=1), 5.0).shape == (2, 1)


class TestMonteCarlo:

    def test_sample_size_floor(self, paintbox):
        with pytest.raises(SampleSizeError):
            test_exchangeability_mc(epsilon_f_sampler(paintbox), 3, (2, 3, 1), 999, 0)

    def test_invalid_sigma(self, paintbox):
        with pytest.raises(SequenceMismatchError):
            test_exchangeability_mc(epsilon_f_sampler(paintbox), 3, (1, 2), 1000, 0)

    def test_deterministic_law_uninformative(self, pair_sig):
        f = SimplexPoint.degenerate(make_pair_code(1, 2), pair_sig)
        report = test_exchangeability_mc(epsilon_f_sampler(f), 3, (3, 1, 2), 1000, 0)
        assert report.uninformative
        assert report.bins == 1
        assert not report.flagged()

    def test_positional_law_flagged(self, atom_atom_blip):
        report = test_exchangeability_mc(positional_sampler(atom_atom_blip), 3, (3, 1, 2), 1000, 0)
        assert report.bins == 2
        assert report.dof == 1
        assert report.flagged()
        assert report.to_json()['samples'] == 1000

    def test_min_samples_from_config(self, pair_sig, mocker):
        mocker.patch.object(RelexConfig, 'get_mc_min_samples', return_value=10)
        f = SimplexPoint.degenerate(make_pair_code(1, 2), pair_sig)
        assert test_exchangeability_mc(epsilon_f_sampler(f), 2, (2, 1), 10, 0).samples == 10

    def test_positional_sampler_length(self, atom_atom_blip):
        with pytest.raises(SequenceMismatchError):
            positional_sampler(atom_atom_blip)(2, 0)

    def test_phi_sampler(self, paintbox):
        x = epsilon_phi_sampler(MixingMeasure.of(paintbox))(4, 0)
        assert len(x) == 4

    def test_flagged_threshold(self):
        report = ChiSquareReport(9.0, 1, 0.0027, 1000, 2)
        assert not report.flagged()
        assert report.flagged(0.01)

    @pytest.mark.slow
    def test_paintbox_not_flagged(self, paintbox):
        report = test_exchangeability_mc(epsilon_f_sampler(paintbox), 3, (2, 3, 1), 2000, 0)
        assert not report.uninformative
        assert not report.flagged()


def test_class_distribution_lookup():
    dist = ClassDistribution({SAME_BLOCK: Fraction(1, 4), SPLIT: Fraction(3, 4)}, 2)
    assert dist.get('missing') == 0
    assert len(dist) == 2
    assert dist.is_exact
