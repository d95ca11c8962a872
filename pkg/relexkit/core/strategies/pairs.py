from typing import Any

from ..errors import CodeError, StructureError
from ..simplex import RStarCode
from ..structures import Signature, Structure
from .base import CodeFamily


class PairFamily(CodeFamily):
    """有序对族策略（α = (2)）

    对应通话记录中的 (主叫, 被叫)；无向边存储两个方向
    """

    name = 'pairs'

    def build(self, operation: str, **kwargs) -> Any:
        """执行有序对构造操作

        Args:
            operation: 操作类型 ('code', 'undirected_code', 'structure', 'random_simplex')
            **kwargs: 操作参数
        """
        if not self.validate_params(operation, **kwargs):
            raise ValueError(f"Invalid parameters for operation: {operation}")

        if operation == 'code':
            return self._pair_code(**kwargs)
        elif operation == 'undirected_code':
            return self._undirected_code(**kwargs)
        elif operation == 'structure':
            return self._structure(**kwargs)
        elif operation == 'random_simplex':
            return self._random_simplex(**kwargs)
        else:
            raise ValueError(f"Unsupported operation: {operation}")

    def signature(self, **kwargs) -> Signature:
        return Signature((2,))

    def validate_params(self, operation: str, **kwargs) -> bool:
        if not super().validate_params(operation, **kwargs):
            return False
        if operation in ('code', 'undirected_code'):
            return 'i' in kwargs and 'j' in kwargs
        elif operation == 'structure':
            return 'src' in kwargs and 'dst' in kwargs
        return True

    def _pair_code(self, i: int, j: int) -> RStarCode:
        """{(i, j)}；正数为原子排名，0 与 -1 为本关系内的两个 blip"""
        if i == j:
            raise CodeError(f"pair code needs distinct entries, got ({i},{j})")
        return self._code(Structure.of([(i, j)]))

    def _undirected_code(self, i: int, j: int) -> RStarCode:
        if i == j:
            raise CodeError(f"pair code needs distinct entries, got ({i},{j})")
        return self._code(Structure.of([(i, j), (j, i)]))

    def _structure(self, src: int, dst: int, directed: bool = True) -> Structure:
        """原始边；自环按 R_1 = {(i,j)}, i ≠ j 拒绝"""
        self._check_raw_ids([src, dst], 'edge')
        if src == dst:
            raise StructureError([f"self-loop ({src},{dst}) is not a valid pair"])
        tuples = [(src, dst)] if directed else [(src, dst), (dst, src)]
        return Structure.of(tuples)

    def _random_code(self, stream, max_atoms: int = 3, directed: bool = True, **kwargs) -> RStarCode:
        while True:
            picks = [int(v) for v in stream.integers(0, max_atoms + 1, size=2)]
            members = [p if p > 0 else None for p in picks]
            if members[0] is not None and members[0] == members[1]:
                continue
            i, j = self._assign_blips(members)
            if members[0] is None and members[1] is None and stream.uniform() < 0.5:
                i, j = j, i
            return self._pair_code(i, j) if directed else self._undirected_code(i, j)
