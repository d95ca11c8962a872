import logging
from typing import Any, Sequence

from ..errors import CodeError, SimplexError
from ..simplex import MixingMeasure, RStarCode, SimplexPoint, as_weight
from ..structures import Signature, Structure
from .base import CodeFamily

logger = logging.getLogger(__name__)


class PartitionFamily(CodeFamily):
    """划分族策略（α = (1)）

    负责单点编码、Kingman 油漆盒（排序单纯形 Δ↓）以及截断 stick-breaking 混合
    """

    name = 'partition'

    def build(self, operation: str, **kwargs) -> Any:
        """执行划分族构造操作

        Args:
            operation: 操作类型 ('code', 'paintbox', 'stick_breaking', 'structure', 'random_simplex')
            **kwargs: 操作参数

        Returns:
            RStarCode / SimplexPoint / MixingMeasure / Structure
        """
        if not self.validate_params(operation, **kwargs):
            raise ValueError(f"Invalid parameters for operation: {operation}")

        if operation == 'code':
            return self._singleton_code(**kwargs)
        elif operation == 'paintbox':
            return self._paintbox(**kwargs)
        elif operation == 'stick_breaking':
            return self._stick_breaking(**kwargs)
        elif operation == 'structure':
            return self._structure(**kwargs)
        elif operation == 'random_simplex':
            return self._random_simplex(**kwargs)
        else:
            raise ValueError(f"Unsupported operation: {operation}")

    def signature(self, **kwargs) -> Signature:
        return Signature((1,))

    def _singleton_code(self, atom: int) -> RStarCode:
        """{atom}；atom = 0 表示 blip"""
        if atom < 0:
            raise CodeError(f"singleton code takes an atom >= 1 or the blip 0, got {atom}")
        return self._code(Structure.of([(atom,)]))

    def _paintbox(self, f0, atoms: Sequence) -> SimplexPoint:
        """油漆盒：atoms[j-1] 放在 {j} 上，f0 放在 blip 编码 {0} 上"""
        f0 = as_weight(f0)
        weights = [as_weight(a) for a in atoms]
        if f0 < 0:
            raise SimplexError(f"dust mass f0 must be non-negative, got {f0}")
        for j, w in enumerate(weights, start=1):
            if not w > 0:
                raise SimplexError(f"atom {j} weight must be positive, got {w}")
            if j > 1 and w > weights[j - 2]:
                raise SimplexError(f"atom weights must be non-increasing: {w} follows {weights[j - 2]}")
        support = [(self._singleton_code(j), w) for j, w in enumerate(weights, start=1)]
        if f0 > 0:
            support.append((self._singleton_code(0), f0))
        return SimplexPoint(tuple(support), self.signature())

    def _stick_breaking(self, alpha: float, discount: float = 0.0, truncation: int = 50) -> MixingMeasure:
        """截断 GEM / Pitman–Yor 混合：每次抽取返回一个油漆盒单纯形点

        V_k ~ Beta(1 - d, α + k d)，权重 V_k Π_{i<k}(1 - V_i) 排序后作为原子，
        截断后剩余质量放到 blip 编码上。
        """
        if not 0 <= discount < 1:
            raise SimplexError(f"discount must lie in [0, 1), got {discount}")
        if alpha <= -discount:
            raise SimplexError(f"alpha must exceed -discount, got alpha={alpha}, discount={discount}")
        if truncation < 1:
            raise SimplexError(f"truncation must be >= 1, got {truncation}")

        def draw(stream) -> SimplexPoint:
            remaining = 1.0
            weights = []
            for k in range(1, truncation + 1):
                v = stream.beta(1.0 - discount, alpha + k * discount)
                weights.append(remaining * v)
                remaining *= 1.0 - v
            atoms = sorted((w for w in weights if w > 0), reverse=True)
            dust = max(0.0, 1.0 - sum(atoms))
            logger.debug("stick-breaking draw: %d atoms, dust %.3g", len(atoms), dust)
            return self._paintbox(dust, atoms)

        return MixingMeasure(generator=draw)

    def _structure(self, element: int) -> Structure:
        """原始数据中的单点关系"""
        self._check_raw_ids([element], 'singleton')
        return Structure.of([(element,)])

    def _random_code(self, stream, max_atoms: int = 4, **kwargs) -> RStarCode:
        return self._singleton_code(int(stream.integers(0, max_atoms + 1)))
