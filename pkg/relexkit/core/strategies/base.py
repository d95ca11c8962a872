from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, List, Optional, Sequence

from ..adapters import as_stream
from ..errors import CodeError, SimplexError
from ..simplex import RStarCode, SimplexPoint
from ..structures import Signature, Structure


class CodeFamily(ABC):
    """编码族策略抽象基类

    定义每个关系族（划分、有向对、合著集合、路径）必须实现的接口规范：
    构造 R* 编码、构造原始数据中的关系结构、构造随机单纯形点
    """

    name = ''

    def __init__(self, config_manager):
        """初始化编码族策略

        Args:
            config_manager: 配置管理器对象
        """
        self.config = config_manager

    @abstractmethod
    def build(self, operation: str, **kwargs) -> Any:
        """执行构造操作

        Args:
            operation: 操作类型字符串
            **kwargs: 操作参数

        Returns:
            构造结果对象

        Raises:
            ValueError: 当操作类型不支持或参数非法时
        """
        pass

    @abstractmethod
    def signature(self, **kwargs) -> Signature:
        """该族使用的签名"""
        pass

    @abstractmethod
    def _random_code(self, stream, **kwargs) -> RStarCode:
        """随机构造一个该族的编码"""
        pass

    def validate_params(self, operation: str, **kwargs) -> bool:
        """参数验证

        Args:
            operation: 操作类型
            **kwargs: 操作参数

        Returns:
            bool: 参数是否有效
        """
        if not operation:
            return False
        if operation == 'random_simplex':
            return kwargs.get('support_size', 1) >= 1
        return True

    def _random_simplex(self, rng=None, support_size: int = 3, max_weight: int = 9, **kwargs) -> SimplexPoint:
        """随机单纯形点：support_size 个互不相同的编码，权重为精确有理数

        Args:
            rng: 种子或 RandomStream
            support_size: 支撑大小
            max_weight: 未归一化权重分子取 1..max_weight
        """
        stream = as_stream(rng)
        codes: List[RStarCode] = []
        attempts = 0
        while len(codes) < support_size:
            attempts += 1
            if attempts > 1000 * support_size:
                raise SimplexError(f"{self.name}: cannot find {support_size} distinct codes with {kwargs}")
            code = self._random_code(stream, **kwargs)
            if code not in codes:
                codes.append(code)
        numerators = [int(v) for v in stream.integers(1, max_weight + 1, size=support_size)]
        total = sum(numerators)
        return SimplexPoint(tuple((code, Fraction(m, total)) for code, m in zip(codes, numerators)),
                            codes[0].sig)

    @staticmethod
    def _assign_blips(members: Sequence[Optional[int]]) -> List[int]:
        """None 表示 blip，依出现顺序编为 0, -1, -2, ..."""
        ids = []
        next_blip = 0
        for m in members:
            if m is None:
                ids.append(next_blip)
                next_blip -= 1
            else:
                ids.append(m)
        return ids

    @staticmethod
    def _check_distinct(ids: Sequence[int], what: str):
        if len(set(ids)) != len(ids):
            raise CodeError(f"{what} has repeated elements: {list(ids)}")

    @staticmethod
    def _check_raw_ids(ids: Sequence[int], what: str):
        for a in ids:
            if not isinstance(a, int) or isinstance(a, bool) or a < 1:
                raise CodeError(f"{what}: raw ids must be positive integers, got {a!r}")

    def _code(self, structure: Structure, **kwargs) -> RStarCode:
        return RStarCode(structure, self.signature(**kwargs))
