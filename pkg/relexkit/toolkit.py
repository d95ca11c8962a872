from typing import Optional, Sequence, Union

from .config.defaults import RelexConfig
from .core.adapters import RandomStream
from .core.canonical import CanonicalSequence, RelSequence, are_equivalent, canonical_form, distance, permute, restrict
from .core.factory import FamilyFactory
from .core.inference import (ChiSquareReport, ClassDistribution, ExchangeabilityReport, epsilon_f_sampler,
                             epsilon_phi_sampler, estimate_f, exact_distribution, exact_mixture_distribution,
                             test_exchangeability_exact, test_exchangeability_mc)
from .core.simplex import MixingMeasure, SimplexPoint, sample_epsilon_f, sample_epsilon_phi
from .core.starmap import roundtrip_check
from .tools import io_methods


class RelationalToolkit:
    """关系可交换结构工具类，把各模块的操作收拢到一个对象上

    持有一份配置和一条随机流；所有抽样方法都从这条流取数，
    因此同一种子构造的两个工具对象给出相同的结果
    """

    def __init__(self, seed: Optional[int] = None, config_manager: Optional[RelexConfig] = None):
        """初始化工具类

        Args:
            seed: 随机种子，默认读配置 default_seed
            config_manager: 配置管理器对象
        """
        self.config = config_manager or RelexConfig()
        self.stream = RandomStream(self.config.get_default_seed() if seed is None else seed)

    def family(self, name: str):
        """取编码族策略（'partition'、'pairs'、'hyperedges'、'paths'）"""
        return FamilyFactory.create_family(name, self.config)

    # 规范形式与度量
    def canonical(self, x) -> CanonicalSequence:
        return canonical_form(x)

    def equivalent(self, x, y) -> bool:
        return are_equivalent(x, y)

    def restrict(self, x, n: int) -> CanonicalSequence:
        return restrict(x, n)

    def permute(self, x, sigma: Sequence[int]) -> CanonicalSequence:
        return permute(x, sigma)

    def distance(self, x, y, depth: Optional[int] = None):
        return distance(x, y, depth)

    # 抽样
    def sample(self, model: Union[SimplexPoint, MixingMeasure], n: int) -> CanonicalSequence:
        """ε_f 或 ε_φ 的前 n 项"""
        if isinstance(model, SimplexPoint):
            return sample_epsilon_f(model, n, self.stream)
        return sample_epsilon_phi(model, n, self.stream)

    def roundtrip(self, x) -> bool:
        return roundtrip_check(x, self.stream)

    # 推断与检验
    def estimate(self, x, threshold: Optional[int] = None) -> SimplexPoint:
        return estimate_f(x, threshold if threshold is not None else self.config.get_recurrence_threshold())

    def distribution(self, model: Union[SimplexPoint, MixingMeasure], n: int) -> ClassDistribution:
        budget = self.config.get_enumeration_budget()
        if isinstance(model, SimplexPoint):
            return exact_distribution(model, n, budget)
        return exact_mixture_distribution(model, n, budget)

    def check_exchangeability(self, model, n: Optional[int] = None) -> ExchangeabilityReport:
        """全置换精确检验"""
        return test_exchangeability_exact(model, n, self.config.get_enumeration_budget())

    def check_exchangeability_mc(self, model: Union[SimplexPoint, MixingMeasure], n: int,
                                 sigma: Sequence[int], samples: Optional[int] = None) -> ChiSquareReport:
        """单个 σ 的 Monte Carlo 卡方检验"""
        sampler = epsilon_f_sampler(model) if isinstance(model, SimplexPoint) else epsilon_phi_sampler(model)
        samples = self.config.get_mc_min_samples() if samples is None else samples
        return test_exchangeability_mc(sampler, n, sigma, samples, self.stream,
                                       self.config.get_chi2_min_expected())

    # 文件
    def load_sequence(self, path: str) -> RelSequence:
        return io_methods.parse_sequence(path)

    def save_sequence(self, x, path: str):
        io_methods.write_sequence(x, path)

    def load_model(self, path: str):
        return io_methods.load_model(path)

    def save_model(self, model, path: str):
        io_methods.dump_model(model, path)
