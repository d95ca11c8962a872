"""
有限 α-结构

签名 α 只存有限前缀（之后的元数一律为 0）；结构按槽位 j=1..r_A 保存有序元组集合，
定义域由元组中出现的整数隐式给出，不支持孤立点。
"""

import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Sequence, Tuple

from .errors import FormatError, RelabelError, SignatureError, StructureError

Tup = Tuple[int, ...]
Relation = FrozenSet[Tup]

_STRUCTURE_RE = re.compile(r'\{(?:\d+:\[[^\]]*\](?:;\d+:\[[^\]]*\])*)?\}')
_SLOT_RE = re.compile(r'(\d+):\[([^\]]*)\]')
_TUPLES_RE = re.compile(r'(?:\([^()]*\)(?:;\([^()]*\))*)?')
_TUPLE_RE = re.compile(r'\(([^()]*)\)')


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


@dataclass(frozen=True)
class Signature:
    """签名 α = (α(1), ..., α(J))，J 之后的元数约定为 0

    构造时去掉末尾的 0，因此 Signature((2, 0)) == Signature((2,))。
    """

    arities: Tuple[int, ...] = ()

    def __post_init__(self):
        arities = tuple(self.arities)
        for j, a in enumerate(arities, start=1):
            if not _is_int(a) or a < 0:
                raise SignatureError(f"arity of slot {j} must be a non-negative integer, got {a!r}")
        seen_zero = False
        for j, a in enumerate(arities, start=1):
            if a == 0:
                seen_zero = True
            elif seen_zero:
                raise SignatureError(f"slot {j} has arity {a} after a zero arity")
        while arities and arities[-1] == 0:
            arities = arities[:-1]
        object.__setattr__(self, 'arities', arities)

    @classmethod
    def identity(cls, k: int) -> 'Signature':
        """α(j) = j，j = 1..k（超图与路径的签名）"""
        return cls(tuple(range(1, k + 1)))

    @property
    def length(self) -> int:
        return len(self.arities)

    def arity(self, j: int) -> int:
        """槽位 j（从 1 开始）的元数"""
        if j < 1:
            raise SignatureError(f"slot index must be >= 1, got {j}")
        return self.arities[j - 1] if j <= len(self.arities) else 0

    def to_list(self) -> List[int]:
        return list(self.arities)


@dataclass(frozen=True)
class Structure:
    """有限 α-结构 A = (R_1, ..., R_r)

    relations[j-1] 是槽位 j 的元组集合；末尾的空槽位在构造时去掉，
    因此 len(relations) 恰为 r_A（空结构为 0）。
    """

    relations: Tuple[Relation, ...] = ()
    _domain: FrozenSet[int] = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self):
        slots = []
        for slot in self.relations:
            tuples = set()
            for t in slot:
                t = tuple(t)
                if not all(_is_int(a) for a in t):
                    raise StructureError([f"tuple {t!r} has non-integer components"])
                tuples.add(t)
            slots.append(frozenset(tuples))
        while slots and not slots[-1]:
            slots.pop()
        object.__setattr__(self, 'relations', tuple(slots))
        object.__setattr__(self, '_domain', frozenset(a for slot in slots for t in slot for a in t))

    @classmethod
    def of(cls, *slots: Iterable[Sequence[int]]) -> 'Structure':
        """按位置给出各槽位：Structure.of([(1, 2)], [(1, 4, 5)])"""
        return cls(tuple(frozenset(tuple(t) for t in slot) for slot in slots))

    @classmethod
    def from_slots(cls, slots: Mapping[int, Iterable[Sequence[int]]]) -> 'Structure':
        """按槽位号给出：Structure.from_slots({2: [(1, 2)]})"""
        if not slots:
            return cls()
        if min(slots) < 1:
            raise StructureError([f"slot index must be >= 1, got {min(slots)}"])
        r = max(slots)
        return cls(tuple(frozenset(tuple(t) for t in slots.get(j, ())) for j in range(1, r + 1)))

    @property
    def r(self) -> int:
        return len(self.relations)

    def slot(self, j: int) -> Relation:
        return self.relations[j - 1] if 1 <= j <= len(self.relations) else frozenset()

    def tuples(self) -> Iterator[Tuple[int, Tup]]:
        """按 (槽位, 元组) 依编码顺序遍历"""
        for j, slot in enumerate(self.relations, start=1):
            for t in sorted(slot):
                yield j, t

    def domain(self) -> FrozenSet[int]:
        return self._domain

    def size(self) -> int:
        return sum(len(slot) for slot in self.relations)

    def sort_key(self) -> Tuple:
        """按整数分量比较的字典序键（与 encode 的排列顺序一致）"""
        return tuple(tuple(sorted(slot)) for slot in self.relations)

    def map_ids(self, mapping: Mapping[int, int]) -> 'Structure':
        """不做检查的替换，调用方保证 mapping 覆盖定义域且为单射"""
        return Structure(tuple(frozenset(tuple(mapping[a] for a in t) for t in slot)
                               for slot in self.relations))

    def __str__(self) -> str:
        return encode(self)


@dataclass(frozen=True)
class ValidationReport:
    """validate 的结果：violations 为空即合法"""

    violations: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(structure: Structure, sig: Signature) -> ValidationReport:
    """检查结构是否属于 Fin_α

    Args:
        structure: 待检查的结构
        sig: 签名

    Returns:
        ValidationReport，逐条列出元数不符和零元数槽位非空的违例
    """
    violations = []
    for j, slot in enumerate(structure.relations, start=1):
        arity = sig.arity(j)
        if arity == 0:
            if slot:
                violations.append(f"slot {j} has arity 0 but holds {len(slot)} tuple(s)")
            continue
        for t in sorted(slot):
            if len(t) != arity:
                violations.append(f"slot {j}: tuple {t} has {len(t)} component(s), expected {arity}")
    return ValidationReport(tuple(violations))


def ensure_valid(structure: Structure, sig: Signature, context: str = '') -> Structure:
    """validate 的抛异常版本

    Raises:
        StructureError: 存在任何违例时
    """
    report = validate(structure, sig)
    if not report.ok:
        raise StructureError(report.violations, context)
    return structure


def relabel(structure: Structure, rho: Mapping[int, int]) -> Structure:
    """按单射 rho 重标号定义域元素

    Args:
        structure: 原结构
        rho: 定义域到整数的映射，须覆盖整个定义域且在其上为单射

    Returns:
        每个分量 a 替换为 rho(a) 的新结构

    Raises:
        RelabelError: rho 缺少定义域元素或把两个元素映到同一值
    """
    domain = structure.domain()
    missing = sorted(a for a in domain if a not in rho)
    if missing:
        raise RelabelError(f"relabeling undefined on domain element(s) {missing}")
    images: Dict[int, int] = {}
    for a in sorted(domain):
        b = rho[a]
        if b in images:
            raise RelabelError(f"relabeling not injective: {images[b]} and {a} both map to {b}")
        images[b] = a
    return structure.map_ids(rho)


def domain_of(structure: Structure) -> FrozenSet[int]:
    return structure.domain()


def _encode_tuple(t: Sequence) -> str:
    return '(' + ','.join(str(a) for a in t) + ')'


def encode(structure: Structure) -> str:
    """确定性文本编码 `{j:[(a,b);(c,d)];...}`

    槽位按 j 递增，槽位内元组按整数分量字典序排列，空槽位省略。
    """
    parts = []
    for j, slot in enumerate(structure.relations, start=1):
        if slot:
            parts.append(f"{j}:[" + ';'.join(_encode_tuple(t) for t in sorted(slot)) + ']')
    return '{' + ';'.join(parts) + '}'


def parse_structure(text: str) -> Structure:
    """encode 的逆运算

    Raises:
        FormatError: 文本不符合编码语法
    """
    text = text.strip()
    if not _STRUCTURE_RE.fullmatch(text):
        raise FormatError(f"not a structure encoding: {text!r}")
    slots: Dict[int, List[Tup]] = {}
    for j_text, body in _SLOT_RE.findall(text):
        j = int(j_text)
        if j < 1 or j in slots:
            raise FormatError(f"bad or repeated slot index {j} in {text!r}")
        if not _TUPLES_RE.fullmatch(body):
            raise FormatError(f"bad tuple list {body!r} in {text!r}")
        tuples = []
        for inner in _TUPLE_RE.findall(body):
            try:
                tuples.append(tuple(int(c) for c in inner.split(',')) if inner else ())
            except ValueError:
                raise FormatError(f"non-integer component in ({inner}) of {text!r}")
        slots[j] = tuples
    return Structure.from_slots(slots)
