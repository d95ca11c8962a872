from typing import Any, Optional, Sequence

from ..errors import CodeError
from ..simplex import RStarCode
from ..structures import Signature, Structure
from .base import CodeFamily


class PathFamily(CodeFamily):
    """路径族策略（α(j) = j）

    路径 (a_1, ..., a_k) 存为槽位 k 中的单个 k 元组
    """

    name = 'paths'

    def build(self, operation: str, **kwargs) -> Any:
        """执行路径构造操作

        Args:
            operation: 操作类型 ('code', 'structure', 'random_simplex')
            **kwargs: 操作参数
        """
        if not self.validate_params(operation, **kwargs):
            raise ValueError(f"Invalid parameters for operation: {operation}")

        if operation == 'code':
            return self._path_code(**kwargs)
        elif operation == 'structure':
            return self._structure(**kwargs)
        elif operation == 'random_simplex':
            return self._random_simplex(**kwargs)
        else:
            raise ValueError(f"Unsupported operation: {operation}")

    def signature(self, max_size: int = 1, **kwargs) -> Signature:
        return Signature.identity(max_size)

    def validate_params(self, operation: str, **kwargs) -> bool:
        if not super().validate_params(operation, **kwargs):
            return False
        if operation in ('code', 'structure'):
            return len(kwargs.get('nodes', ())) >= 1
        return True

    def _path_code(self, nodes: Sequence[int], max_size: Optional[int] = None) -> RStarCode:
        """路径的 R* 编码；nodes 中非正数为 blip"""
        nodes = tuple(nodes)
        self._check_distinct(nodes, 'path')
        max_size = max_size or len(nodes)
        if len(nodes) > max_size:
            raise CodeError(f"path of length {len(nodes)} exceeds max_size {max_size}")
        return self._code(Structure.from_slots({len(nodes): [nodes]}), max_size=max_size)

    def _structure(self, nodes: Sequence[int]) -> Structure:
        nodes = tuple(nodes)
        self._check_raw_ids(nodes, 'path')
        self._check_distinct(nodes, 'path')
        return Structure.from_slots({len(nodes): [nodes]})

    def _random_code(self, stream, max_atoms: int = 3, max_size: int = 3, **kwargs) -> RStarCode:
        k = int(stream.integers(1, max_size + 1))
        atoms = stream.permutation(max_atoms)[:k]
        members = [a if stream.uniform() < 0.5 else None for a in atoms]
        members += [None] * (k - len(members))
        order = stream.permutation(k)
        members = [members[i - 1] for i in order]
        return self._path_code(self._assign_blips(members), max_size=max_size)
