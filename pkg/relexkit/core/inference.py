"""
f 的经验估计、ε_f 在有限 n 上的精确分布，以及关系可交换性的精确检验与 Monte Carlo 检验
"""

import itertools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import chi2_contingency

from ..config import resolve
from .adapters import as_stream
from .canonical import CanonicalSequence, canonical_form, check_permutation, permute
from .errors import (AbsentElementError, BudgetExceededError, EmptySequenceError, SampleSizeError,
                     SequenceMismatchError, SimplexError)
from .simplex import (MixingMeasure, RStarCode, SimplexPoint, Weight, blip_representative, dagger,
                      format_weight, sample_epsilon_f, sample_epsilon_phi, sample_positional)
from .starmap import rank_recurring
from .structures import Signature, Structure

logger = logging.getLogger(__name__)

Law = Union[SimplexPoint, MixingMeasure, Sequence[SimplexPoint]]
Sampler = Callable[[int, object], object]


@dataclass(frozen=True)
class ClassDistribution:
    """R_n 在各规范类上的分布

    probs 以规范序列编码为键；representatives 保存每个类的一个规范代表元。
    """

    probs: Mapping[str, Weight]
    n: int
    law: Optional[Law] = field(default=None, compare=False, repr=False)
    representatives: Mapping[str, CanonicalSequence] = field(default_factory=dict, compare=False, repr=False)

    @property
    def total(self) -> Weight:
        return sum(self.probs.values(), Fraction(0))

    @property
    def is_exact(self) -> bool:
        return all(isinstance(p, Fraction) for p in self.probs.values())

    def get(self, key: str) -> Weight:
        return self.probs.get(key, Fraction(0) if self.is_exact else 0.0)

    def tv(self, other: Mapping[str, Weight]) -> Weight:
        """全变差距离 ½ Σ |p - q|"""
        if isinstance(other, ClassDistribution):
            other = other.probs
        keys = set(self.probs) | set(other)
        exact = self.is_exact and all(isinstance(p, Fraction) for p in other.values())
        zero = Fraction(0) if exact else 0.0
        total = sum((abs(self.probs.get(k, zero) - other.get(k, zero)) for k in keys), zero)
        return total / 2

    def items(self) -> List[Tuple[str, Weight]]:
        """按概率降序、编码升序"""
        return sorted(self.probs.items(), key=lambda kv: (-kv[1], kv[0]))

    def __len__(self) -> int:
        return len(self.probs)


def _item_code(item: Structure, ranks: Mapping[int, int], sig: Signature) -> RStarCode:
    """原子换成排名，其余元素按本项编码遍历中的首次出现依次编为 0, -1, ..."""
    mapping: Dict[int, int] = {}
    next_blip = 0
    for _, t in item.tuples():
        for a in t:
            if a in mapping:
                continue
            if a in ranks:
                mapping[a] = ranks[a]
            else:
                mapping[a] = next_blip
                next_blip -= 1
    return RStarCode(item.map_ids(mapping), sig)


def estimate_f(x, recurrence_threshold: Optional[int] = None) -> SimplexPoint:
    """经验估计 f̂：各项星编码（合并 blip 重排类之后）的相对频率

    原子为出现在至少 recurrence_threshold 个位置的元素，按经验倾向度、模板画像、
    首次出现顺序排名。

    Raises:
        EmptySequenceError: x 为空
    """
    if len(x.items) == 0:
        raise EmptySequenceError("cannot estimate f from an empty sequence")
    threshold = resolve(recurrence_threshold, 'get_recurrence_threshold')
    c = canonical_form(x)
    # 规范标号本身就是首次出现顺序
    ordering = rank_recurring(c.items, threshold, lambda u: u)
    ranks = {u: ordering.rank(u) for u in ordering.atoms}
    counts: Counter = Counter(blip_representative(_item_code(item, ranks, c.sig)) for item in c.items)
    n = len(c.items)
    logger.debug("estimate_f: n=%d, %d atom(s), %d code(s)", n, len(ordering), len(counts))
    return SimplexPoint(tuple((code, Fraction(k, n)) for code, k in counts.items()), c.sig)


def merge_blip_classes(f: SimplexPoint) -> SimplexPoint:
    """合并仅相差本项内 blip 重排的编码，代表元为编码文本最大者"""
    merged: Dict[RStarCode, Weight] = {}
    for code, w in f.support:
        rep = blip_representative(code)
        merged[rep] = merged[rep] + w if rep in merged else w
    return SimplexPoint(tuple(merged.items()), f.sig)


def empirical_propensity(x, element: int) -> Fraction:
    """包含 element 的位置数 / n

    Raises:
        AbsentElementError: element 不出现在 x 中
    """
    hits = sum(1 for item in x.items if element in item.domain())
    if hits == 0:
        raise AbsentElementError(f"element {element} does not occur in the sequence")
    return Fraction(hits, len(x.items))


def partition_blocks(x) -> List[Tuple[int, ...]]:
    """α = (1) 序列的划分视图：每个元素占据的位置集合，按首个位置排序

    Raises:
        SequenceMismatchError: 签名不是 (1)
    """
    if x.sig != Signature((1,)):
        raise SequenceMismatchError(f"partition view needs signature [1], got {x.sig.to_list()}")
    blocks: Dict[int, List[int]] = {}
    for i, item in enumerate(x.items, start=1):
        for a in sorted(item.domain()):
            blocks.setdefault(a, []).append(i)
    return sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0])


def arrival_order(x) -> List[Tuple[int, Fraction]]:
    """元素按首次出现的顺序排列，附经验倾向度"""
    if len(x.items) == 0:
        return []
    witness = canonical_form(x).witness
    n = len(x.items)
    counts: Counter = Counter()
    for item in x.items:
        counts.update(item.domain())
    return [(a, Fraction(counts[a], n)) for a in sorted(counts, key=lambda a: witness[a])]


def _check_budget(points: Sequence[SimplexPoint], budget: Optional[int]):
    budget = resolve(budget, 'get_enumeration_budget')
    size = 1
    for p in points:
        size *= len(p)
    if size > budget:
        raise BudgetExceededError(f"exact enumeration needs {size} code tuples, budget is {budget}")
    return size


def _enumerate(points: Sequence[SimplexPoint], law: Law) -> ClassDistribution:
    sig = points[0].sig
    exact = all(p.is_exact for p in points)
    probs: Dict[str, Weight] = defaultdict(lambda: Fraction(0) if exact else 0.0)
    representatives: Dict[str, CanonicalSequence] = {}
    for combo in itertools.product(*(p.support for p in points)):
        weight = Fraction(1) if exact else 1.0
        for _, w in combo:
            weight *= w
        c = canonical_form(dagger([code for code, _ in combo], sig))
        key = c.encode()
        probs[key] += weight
        representatives.setdefault(key, c)
    return ClassDistribution(dict(probs), len(points), law, representatives)


def exact_distribution(f: SimplexPoint, n: int, budget: Optional[int] = None) -> ClassDistribution:
    """ε_f 限制到 [n] 的精确分布：枚举全部编码 n 元组

    Raises:
        BudgetExceededError: |support(f)|^n 超过 enumeration_budget
    """
    if n < 0:
        raise SequenceMismatchError(f"sequence length must be non-negative, got {n}")
    size = _check_budget([f] * n, budget)
    logger.debug("exact_distribution: enumerating %d code tuple(s)", size)
    if n == 0:
        return ClassDistribution({'': Fraction(1) if f.is_exact else 1.0}, 0, f,
                                 {'': CanonicalSequence((), f.sig)})
    return _enumerate([f] * n, f)


def exact_positional_distribution(points: Sequence[SimplexPoint], budget: Optional[int] = None) -> ClassDistribution:
    """位置相关抽样（第 i 项来自 points[i]）的精确分布"""
    if not points:
        raise SimplexError("positional law needs at least one point")
    if any(p.sig != points[0].sig for p in points):
        raise SimplexError("positional points must share one signature")
    size = _check_budget(points, budget)
    logger.debug("exact_positional_distribution: enumerating %d code tuple(s)", size)
    return _enumerate(list(points), list(points))


def exact_mixture_distribution(phi: MixingMeasure, n: int, budget: Optional[int] = None) -> ClassDistribution:
    """有限混合 ε_φ = Σ_k w_k ε_{f_k} 的精确分布

    Raises:
        SimplexError: φ 为程序化生成器，无法枚举
    """
    if phi.generator is not None:
        raise SimplexError("exact distribution needs a finite mixture, not a generator")
    probs: Dict[str, Weight] = {}
    representatives: Dict[str, CanonicalSequence] = {}
    for weight, f in phi.components:
        component = exact_distribution(f, n, budget)
        for key, p in component.probs.items():
            probs[key] = probs[key] + weight * p if key in probs else weight * p
        for key, rep in component.representatives.items():
            representatives.setdefault(key, rep)
    return ClassDistribution(probs, n, phi, representatives)


def push_forward(dist: ClassDistribution, sigma: Sequence[int]) -> Dict[str, Weight]:
    """把类分布经位置置换 σ 推前"""
    pushed: Dict[str, Weight] = {}
    for key, p in dist.probs.items():
        image = permute(dist.representatives[key], sigma).encode()
        pushed[image] = pushed[image] + p if image in pushed else p
    return pushed


@dataclass(frozen=True)
class ExchangeabilityReport:
    """精确检验结果：每个 σ 的全变差距离及其最大值"""

    max_tv: Weight
    per_sigma: Tuple[Tuple[Tuple[int, ...], Weight], ...]
    n: int

    @property
    def exchangeable(self) -> bool:
        if isinstance(self.max_tv, Fraction):
            return self.max_tv == 0
        return self.max_tv < resolve(None, 'get_float_tolerance')

    def to_json(self) -> dict:
        return {
            'max_tv': format_weight(self.max_tv),
            'per_sigma': [{'sigma': list(sigma), 'tv': format_weight(tv)} for sigma, tv in self.per_sigma],
            'n': self.n,
        }


def test_exchangeability_exact(law: Law, n: Optional[int] = None,
                               budget: Optional[int] = None) -> ExchangeabilityReport:
    """对 [n] 的每个置换 σ 比较 R_n 的分布与其推前，报告最大全变差

    Args:
        law: SimplexPoint（ε_f，需要 n）、有限 MixingMeasure（ε_φ，需要 n）或 SimplexPoint 列表（位置相关抽样，n 取列表长度）
        n: 序列长度
        budget: 枚举上限，默认读配置

    Raises:
        BudgetExceededError: 枚举规模超限
        SequenceMismatchError: n 缺失或与列表长度不符
    """
    if isinstance(law, (SimplexPoint, MixingMeasure)):
        if n is None:
            raise SequenceMismatchError("sequence length n is required for a simplex point or mixture")
        if isinstance(law, SimplexPoint):
            dist = exact_distribution(law, n, budget)
        else:
            dist = exact_mixture_distribution(law, n, budget)
    else:
        if n is not None and n != len(law):
            raise SequenceMismatchError(f"n={n} does not match {len(law)} positional point(s)")
        dist = exact_positional_distribution(law, budget)
        n = len(law)
    zero = Fraction(0) if dist.is_exact else 0.0
    per_sigma = []
    max_tv = zero
    for sigma in itertools.permutations(range(1, n + 1)):
        tv = dist.tv(push_forward(dist, sigma))
        per_sigma.append((sigma, tv))
        if tv > max_tv:
            max_tv = tv
    logger.debug("test_exchangeability_exact: n=%d, %d class(es), max TV %s", n, len(dist), max_tv)
    return ExchangeabilityReport(max_tv, tuple(per_sigma), n)


@dataclass(frozen=True)
class ChiSquareReport:
    """Monte Carlo 检验结果（两样本列联表卡方检验）"""

    chi2: float
    dof: int
    p: float
    samples: int
    bins: int
    uninformative: bool = False

    def flagged(self, alpha: Optional[float] = None) -> bool:
        """p 值低于 alpha（默认 mc_alpha）"""
        return not self.uninformative and self.p < resolve(alpha, 'get_mc_alpha')

    def to_json(self) -> dict:
        return {
            'chi2': self.chi2,
            'dof': self.dof,
            'p': self.p,
            'samples': self.samples,
            'bins': self.bins,
            'uninformative': self.uninformative,
        }


def epsilon_f_sampler(f: SimplexPoint) -> Sampler:
    return lambda n, rng: sample_epsilon_f(f, n, rng)


def epsilon_phi_sampler(phi: MixingMeasure) -> Sampler:
    return lambda n, rng: sample_epsilon_phi(phi, n, rng)


def positional_sampler(points: Sequence[SimplexPoint]) -> Sampler:
    """位置相关抽样器，n 必须等于 points 的长度"""
    def sample(n, rng):
        if n != len(points):
            raise SequenceMismatchError(f"n={n} does not match {len(points)} positional point(s)")
        return sample_positional(points, rng)
    return sample


def _pooled_table(first: Counter, second: Counter, min_expected: float) -> np.ndarray:
    """两行列联表；期望频数低于 min_expected 的类合并为一个分箱"""
    keys = sorted(set(first) | set(second))
    grand = sum(first.values()) + sum(second.values())
    rows = np.array([sum(first.values()), sum(second.values())], dtype=float)
    columns = []
    pooled = np.zeros(2)
    for key in keys:
        column = np.array([first.get(key, 0), second.get(key, 0)], dtype=float)
        if (rows * column.sum() / grand).min() < min_expected:
            pooled += column
        else:
            columns.append(column)
    if pooled.sum() > 0:
        if (rows * pooled.sum() / grand).min() >= min_expected or not columns:
            columns.append(pooled)
        else:
            smallest = min(range(len(columns)), key=lambda k: columns[k].sum())
            columns[smallest] = columns[smallest] + pooled
    if not columns:
        return np.zeros((2, 0))
    return np.stack(columns, axis=1)


def test_exchangeability_mc(sampler: Sampler, n: int, sigma: Sequence[int], N: int, rng=None,
                            min_expected: Optional[float] = None) -> ChiSquareReport:
    """Monte Carlo 检验：N 个原序列与 N 个经 σ 置换的独立序列，按规范编码分箱做卡方检验

    Args:
        sampler: (n, rng) -> 序列
        n: 序列长度
        sigma: [n] 上的置换（sigma[i-1] = σ(i)）
        N: 每组样本数，至少 mc_min_samples
        rng: 种子或 RandomStream
        min_expected: 合并分箱的期望频数阈值，默认读配置

    Raises:
        SampleSizeError: N 低于 mc_min_samples
    """
    minimum = resolve(None, 'get_mc_min_samples')
    if N < minimum:
        raise SampleSizeError(f"Monte Carlo test needs at least {minimum} samples, got {N}")
    sigma = check_permutation(sigma, n)
    min_expected = resolve(min_expected, 'get_chi2_min_expected')
    plain_stream, permuted_stream = as_stream(rng).spawn(2)

    plain: Counter = Counter()
    permuted: Counter = Counter()
    for _ in range(N):
        plain[canonical_form(sampler(n, plain_stream)).encode()] += 1
    for _ in range(N):
        permuted[permute(sampler(n, permuted_stream), sigma).encode()] += 1

    table = _pooled_table(plain, permuted, min_expected)
    bins = table.shape[1]
    if bins < 2:
        logger.info("test_exchangeability_mc: %d bin(s) after pooling, uninformative", bins)
        return ChiSquareReport(0.0, 0, 1.0, N, bins, uninformative=True)
    chi2, p, dof, _ = chi2_contingency(table, correction=False)
    logger.debug("test_exchangeability_mc: %d bin(s), chi2=%.4g, p=%.4g", bins, chi2, p)
    return ChiSquareReport(float(chi2), int(dof), float(p), N, bins)


# 名称以 test_ 开头，避免被 pytest 当作用例收集
test_exchangeability_exact.__test__ = False
test_exchangeability_mc.__test__ = False
