from typing import Dict, List, Optional, Sequence, Type

from ..config import RelexConfig
from .simplex import MixingMeasure, RStarCode, SimplexPoint
from .strategies.base import CodeFamily
from .strategies.hyperedges import HyperedgeFamily
from .strategies.pairs import PairFamily
from .strategies.partitions import PartitionFamily
from .strategies.paths import PathFamily


class FamilyFactory:
    """编码族工厂类

    负责编码族策略的注册、创建和管理，实例按配置对象缓存
    """

    # 编码族注册表
    _families: Dict[str, Type[CodeFamily]] = {}
    # 实例缓存
    _instances: Dict[str, CodeFamily] = {}

    @classmethod
    def register_family(cls, name: str, family_class: Type[CodeFamily]):
        """注册编码族

        Args:
            name: 编码族名称
            family_class: 编码族策略类
        """
        if not issubclass(family_class, CodeFamily):
            raise ValueError(f"Family class must inherit from CodeFamily: {family_class}")

        cls._families[name] = family_class

    @classmethod
    def create_family(cls, name: str, config: Optional[RelexConfig] = None) -> CodeFamily:
        """创建编码族实例

        Args:
            name: 编码族名称
            config: 配置管理器对象，默认为全局 RelexConfig

        Returns:
            编码族策略实例

        Raises:
            ValueError: 当编码族名称不存在时
        """
        if name not in cls._families:
            raise ValueError(f"Unknown family: {name}. Available families: {list(cls._families.keys())}")

        config = config or RelexConfig()
        cache_key = f"{name}_{id(config)}"
        if cache_key not in cls._instances:
            cls._instances[cache_key] = cls._families[name](config)
        return cls._instances[cache_key]

    @classmethod
    def list_families(cls) -> List[str]:
        return list(cls._families.keys())

    @classmethod
    def clear_cache(cls):
        """清理实例缓存"""
        cls._instances.clear()

    @classmethod
    def _auto_register_families(cls):
        """注册默认编码族"""
        cls.register_family('partition', PartitionFamily)
        cls.register_family('pairs', PairFamily)
        cls.register_family('hyperedges', HyperedgeFamily)
        cls.register_family('paths', PathFamily)


# 自动注册默认编码族
FamilyFactory._auto_register_families()


def make_paintbox(f0, atoms: Sequence) -> SimplexPoint:
    """油漆盒单纯形点（排序单纯形 Δ↓ 中的点）"""
    return FamilyFactory.create_family('partition').build('paintbox', f0=f0, atoms=atoms)


def make_stick_breaking_mixture(alpha: float, discount: float = 0.0, truncation: int = 50) -> MixingMeasure:
    """截断 GEM / Pitman–Yor 油漆盒混合"""
    return FamilyFactory.create_family('partition').build(
        'stick_breaking', alpha=alpha, discount=discount, truncation=truncation)


def make_pair_code(i: int, j: int, directed: bool = True) -> RStarCode:
    """有序对编码 {(i, j)}；directed=False 时存两个方向"""
    operation = 'code' if directed else 'undirected_code'
    return FamilyFactory.create_family('pairs').build(operation, i=i, j=j)


def make_set_code(members: Sequence[int], max_size: Optional[int] = None) -> RStarCode:
    """合著集合编码：槽位 k 中的全部 k! 个排列"""
    return FamilyFactory.create_family('hyperedges').build('code', members=members, max_size=max_size)


def make_path_code(nodes: Sequence[int], max_size: Optional[int] = None) -> RStarCode:
    """路径编码：槽位 k 中的单个 k 元组"""
    return FamilyFactory.create_family('paths').build('code', nodes=nodes, max_size=max_size)


def random_simplex(family: str, rng=None, support_size: int = 3, **kwargs) -> SimplexPoint:
    """指定编码族上的随机有理权重单纯形点"""
    return FamilyFactory.create_family(family).build('random_simplex', rng=rng, support_size=support_size, **kwargs)
