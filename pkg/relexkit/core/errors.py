from typing import Optional, Sequence


class RelexError(ValueError):
    """relexkit 所有异常的基类（继承 ValueError，便于按 ValueError 捕获）"""


class SignatureError(RelexError):
    """签名 α 非法：负数、非整数，或出现 0 之后又出现正数"""


class StructureError(RelexError):
    """结构不满足签名约束，violations 列出每一条违例"""

    def __init__(self, violations: Sequence[str], context: str = ''):
        self.violations = tuple(violations)
        prefix = f"{context}: " if context else ''
        super().__init__(prefix + '; '.join(self.violations))


class RelabelError(RelexError):
    """重标号映射未覆盖定义域，或在定义域上不是单射"""


class SequenceMismatchError(RelexError):
    """两个序列的签名或长度不一致，或置换非法"""


class EmptySequenceError(RelexError):
    """操作需要非空序列"""


class AbsentElementError(RelexError):
    """元素不在序列的定义域中"""


class CodeError(RelexError):
    """R* 编码非法（非正标号不是 0,-1,...,-k 连续取值等）"""


class SimplexError(RelexError):
    """单纯形点或混合测度非法（权重非正、未归一化、排序错误）"""


class BudgetExceededError(RelexError):
    """精确枚举规模超过配置上限"""


class SampleSizeError(RelexError):
    """Monte Carlo 样本量低于配置下限"""


class FormatError(RelexError):
    """文件格式错误，line 为出错的行号（从 1 开始）"""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.line = line
        self.path = path
        where = ''
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)


class UsageError(RelexError):
    """命令行参数错误"""
