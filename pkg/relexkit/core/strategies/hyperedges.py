import itertools
from typing import Any, Optional, Sequence

from ..errors import CodeError
from ..simplex import RStarCode
from ..structures import Signature, Structure
from .base import CodeFamily


class HyperedgeFamily(CodeFamily):
    """合著集合族策略（α(j) = j）

    大小为 k 的集合存为槽位 k 中的全部 k! 个排列
    """

    name = 'hyperedges'

    def build(self, operation: str, **kwargs) -> Any:
        """执行超边构造操作

        Args:
            operation: 操作类型 ('code', 'structure', 'random_simplex')
            **kwargs: 操作参数
        """
        if not self.validate_params(operation, **kwargs):
            raise ValueError(f"Invalid parameters for operation: {operation}")

        if operation == 'code':
            return self._set_code(**kwargs)
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
            return len(kwargs.get('members', ())) >= 1
        return True

    @staticmethod
    def _set_structure(ids: Sequence[int]) -> Structure:
        k = len(ids)
        return Structure.from_slots({k: itertools.permutations(ids)})

    def _set_code(self, members: Sequence[int], max_size: Optional[int] = None) -> RStarCode:
        """合著集合的 R* 编码；members 中非正数为 blip"""
        members = list(members)
        self._check_distinct(members, 'coauthor set')
        max_size = max_size or len(members)
        if len(members) > max_size:
            raise CodeError(f"set of size {len(members)} exceeds max_size {max_size}")
        return self._code(self._set_structure(members), max_size=max_size)

    def _structure(self, members: Sequence[int]) -> Structure:
        members = list(members)
        self._check_raw_ids(members, 'coauthor set')
        self._check_distinct(members, 'coauthor set')
        return self._set_structure(members)

    def _random_code(self, stream, max_atoms: int = 3, max_size: int = 3, **kwargs) -> RStarCode:
        k = int(stream.integers(1, max_size + 1))
        atoms = stream.permutation(max_atoms)[:k]
        members = [a if stream.uniform() < 0.5 else None for a in atoms]
        members += [None] * (k - len(members))
        return self._set_code(self._assign_blips(members), max_size=max_size)
