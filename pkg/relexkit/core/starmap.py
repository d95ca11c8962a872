"""
[0,1] 标号结构、倾向度 ν*、原子排序、星映射与往返校验

星映射把带实数标号的关系映到 R* 编码：原子 u_j 换成排名 j，
非原子标号按大小映到 0, -1, -2, ...（最大者为 0）。
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Hashable, List, Mapping, Optional, Sequence, Tuple, Union

from ..config import resolve
from .adapters import as_stream
from .canonical import RelSequence, canonical_form
from .errors import SimplexError, StructureError
from .simplex import RStarCode, SimplexPoint, Weight, dagger, sample_codes
from .structures import Signature, Structure, encode

logger = logging.getLogger(__name__)

LabelTuple = Tuple[float, ...]


@dataclass(frozen=True)
class LabeledStructure:
    """定义域元素带 [0,1] 实数标号的结构 TA"""

    relations: Tuple[FrozenSet[LabelTuple], ...]
    sig: Signature

    def __post_init__(self):
        slots = []
        violations = []
        for j, slot in enumerate(self.relations, start=1):
            arity = self.sig.arity(j)
            tuples = set()
            for t in slot:
                t = tuple(float(v) for v in t)
                if len(t) != arity:
                    violations.append(f"slot {j}: tuple {t} has {len(t)} component(s), expected {arity}")
                if any(not 0.0 <= v <= 1.0 for v in t):
                    violations.append(f"slot {j}: tuple {t} has a label outside [0,1]")
                tuples.add(t)
            slots.append(frozenset(tuples))
        if violations:
            raise StructureError(violations, 'labeled structure')
        while slots and not slots[-1]:
            slots.pop()
        object.__setattr__(self, 'relations', tuple(slots))

    def domain(self) -> FrozenSet[float]:
        return frozenset(v for slot in self.relations for t in slot for v in t)

    def substitute(self, mapping: Mapping[float, int]) -> Structure:
        """把标号替换为整数标号"""
        return Structure(tuple(frozenset(tuple(mapping[v] for v in t) for t in slot)
                               for slot in self.relations))


@dataclass(frozen=True)
class AtomOrdering:
    """原子序列 U = (u_1, u_2, ...) 及其倾向度，倾向度不增"""

    atoms: Tuple[Hashable, ...] = ()
    propensities: Tuple[Weight, ...] = ()
    _ranks: Dict[Hashable, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        atoms = tuple(self.atoms)
        propensities = tuple(self.propensities)
        if len(atoms) != len(propensities):
            raise SimplexError(f"{len(atoms)} atoms but {len(propensities)} propensities")
        if len(set(atoms)) != len(atoms):
            raise SimplexError("atoms of an ordering must be distinct")
        for earlier, later in zip(propensities, propensities[1:]):
            if later > earlier:
                raise SimplexError(f"propensities must be non-increasing, got {earlier} before {later}")
        object.__setattr__(self, 'atoms', atoms)
        object.__setattr__(self, 'propensities', propensities)
        object.__setattr__(self, '_ranks', {u: j for j, u in enumerate(atoms, start=1)})

    def rank(self, label) -> Optional[int]:
        """u_j 的排名 j；非原子返回 None"""
        return self._ranks.get(label)

    def __len__(self) -> int:
        return len(self.atoms)

    def __contains__(self, label) -> bool:
        return label in self._ranks


@dataclass(frozen=True)
class ShapeTemplate:
    """R 中成员的模板：结构形状（单项规范形式）加原子个数

    n_atoms 为 None 时只比较形状。
    """

    shape: Structure
    n_atoms: Optional[int] = None

    @classmethod
    def of(cls, structure: Structure) -> 'ShapeTemplate':
        """只按形状匹配的模板"""
        return cls(_canonical_shape(structure), None)

    def matches(self, other: 'ShapeTemplate') -> bool:
        if self.shape != other.shape:
            return False
        return self.n_atoms is None or other.n_atoms is None or self.n_atoms == other.n_atoms

    def __str__(self) -> str:
        suffix = '' if self.n_atoms is None else f"#{self.n_atoms}"
        return encode(self.shape) + suffix


def _ranked_structure(item) -> Structure:
    """按定义域元素大小映到 1..m 的整数结构"""
    mapping = {v: k for k, v in enumerate(sorted(item.domain()), start=1)}
    if isinstance(item, LabeledStructure):
        return item.substitute(mapping)
    structure = item.structure if isinstance(item, RStarCode) else item
    return structure.map_ids(mapping)


def _canonical_shape(item) -> Structure:
    structure = _ranked_structure(item)
    # 空槽位的元数不影响形状
    sig = Signature(tuple(len(next(iter(slot))) if slot else 1 for slot in structure.relations))
    return canonical_form(RelSequence((structure,), sig)).items[0]


def shape_template(item, atoms: Optional[Callable[[Hashable], bool]] = None) -> ShapeTemplate:
    """计算结构的模板

    Args:
        item: Structure、RStarCode 或 LabeledStructure
        atoms: 判断元素是否为原子的谓词；RStarCode 默认以正标号为原子

    Returns:
        ShapeTemplate；未给出原子判定时只含形状
    """
    shape = _canonical_shape(item)
    if atoms is None and isinstance(item, RStarCode):
        atoms = lambda a: a > 0  # noqa: E731
    if atoms is None:
        return ShapeTemplate(shape, None)
    return ShapeTemplate(shape, sum(1 for v in item.domain() if atoms(v)))


def enumerate_templates(templates) -> List[ShapeTemplate]:
    """模板的固定枚举顺序：按编码文本排序，去重"""
    return sorted(set(templates), key=str)


def attach_uniform_labels(x, rng=None) -> List[LabeledStructure]:
    """给 x 的每个定义域元素附上独立 Uniform[0,1] 标号

    元素按整数大小依次取标号；与已用标号相同的抽样重抽，保证互不相同。
    """
    stream = as_stream(rng)
    elements = sorted(x.domain())
    draws = stream.uniform(len(elements)) if elements else []
    labels: Dict[int, float] = {}
    used = set()
    redraws = 0
    for element, value in zip(elements, draws):
        value = float(value)
        while value in used:
            value = float(stream.uniform())
            redraws += 1
        used.add(value)
        labels[element] = value
    if redraws:
        logger.debug("attach_uniform_labels: %d collision redraw(s)", redraws)
    return [LabeledStructure(tuple(frozenset(tuple(labels[a] for a in t) for t in slot)
                                   for slot in item.relations), x.sig)
            for item in x.items]


def _zero_like(f: SimplexPoint) -> Weight:
    return Fraction(0) if f.is_exact else 0.0


def propensity(f: SimplexPoint, atom: int) -> Weight:
    """ν*(atom)：单次抽取的编码含该原子的概率"""
    return sum((w for code, w in f.support if atom in code.structure.domain()), _zero_like(f))


def propensity_given(f: SimplexPoint, atom: int, template: Union[ShapeTemplate, RStarCode, Structure]) -> Weight:
    """ν*(atom; A)：与模板一致且含该原子的编码的质量，仅用于排序时打破并列

    Args:
        f: 单纯形点
        atom: 原子排名
        template: ShapeTemplate；RStarCode 按形状与原子数匹配，Structure 只按形状匹配
    """
    if isinstance(template, RStarCode):
        template = shape_template(template)
    elif isinstance(template, Structure):
        template = ShapeTemplate.of(template)
    total = _zero_like(f)
    for code, w in f.support:
        if atom in code.structure.domain() and template.matches(shape_template(code)):
            total += w
    return total


def rank_recurring(items: Sequence, threshold: int, tie_value: Callable[[Hashable], object]) -> AtomOrdering:
    """在 items 中出现于至少 threshold 个位置的元素上建立原子排序

    排序键依次为：经验倾向度降序；沿模板枚举顺序比较经验 ν*(·; A)，较大者优先；
    最后按 tie_value 升序。
    """
    n = len(items)
    counts: Counter = Counter()
    for item in items:
        counts.update(item.domain())
    recurring = {u for u, c in counts.items() if c >= threshold}
    if not recurring:
        return AtomOrdering()

    profile: Dict[Hashable, Dict[int, int]] = defaultdict(dict)
    tied = Counter(counts[u] for u in recurring)
    if any(k > 1 for k in tied.values()):
        # 只有倾向度并列时才需要模板画像
        templates = [shape_template(item, recurring.__contains__) for item in items]
        enumeration = {t: k for k, t in enumerate(enumerate_templates(templates))}
        for item, template in zip(items, templates):
            index = enumeration[template]
            for u in item.domain():
                if u in recurring and tied[counts[u]] > 1:
                    profile[u][index] = profile[u].get(index, 0) + 1
        width = len(enumeration)
    else:
        width = 0

    def key(u):
        row = profile.get(u, {})
        return (-counts[u], tuple(-row.get(k, 0) for k in range(width)), tie_value(u))

    order = sorted(recurring, key=key)
    return AtomOrdering(tuple(order), tuple(Fraction(counts[u], n) for u in order))


def atom_order(labeled: Sequence[LabeledStructure], recurrence_threshold: Optional[int] = None) -> AtomOrdering:
    """由有限标号序列确定原子排序，最终并列按标号值递增"""
    threshold = resolve(recurrence_threshold, 'get_recurrence_threshold')
    ordering = rank_recurring(labeled, threshold, lambda u: u)
    logger.debug("atom_order: %d position(s), %d atom(s)", len(labeled), len(ordering))
    return ordering


def star(labeled: LabeledStructure, ordering: AtomOrdering) -> RStarCode:
    """星映射 (TA)*：u_j ↦ j，非原子标号按大小保序映到 0, -1, ..."""
    mapping: Dict[float, int] = {}
    blips = sorted((v for v in labeled.domain() if v not in ordering), reverse=True)
    for z, v in enumerate(blips):
        mapping[v] = -z
    for v in labeled.domain():
        if v in ordering:
            mapping[v] = ordering.rank(v)
    return RStarCode(labeled.substitute(mapping), labeled.sig)


def roundtrip_check(x, rng=None) -> bool:
    """有限 n 上的往返校验：((θx)*)† 的规范形式是否等于 x 的规范形式"""
    stream = as_stream(rng)
    labeled = attach_uniform_labels(x, stream)
    ordering = atom_order(labeled, 2)
    codes = [star(item, ordering) for item in labeled]
    recovered = canonical_form(dagger(codes, x.sig))
    expected = canonical_form(x)
    ok = recovered.items == expected.items
    if not ok:
        logger.warning("roundtrip_check failed: %s != %s", recovered.encode(), expected.encode())
    return ok


@dataclass(frozen=True)
class LabeledDraw:
    """ν_f 构造的一次抽样：编码、对应的标号结构以及原子标号"""

    codes: Tuple[RStarCode, ...]
    labeled: Tuple[LabeledStructure, ...]
    atom_labels: Mapping[int, float]


def _fresh_label(stream, used: set) -> float:
    value = float(stream.uniform())
    while value in used:
        value = float(stream.uniform())
    used.add(value)
    return value


def sample_nu_f(f: SimplexPoint, n: int, rng=None, atom_labels: Optional[Mapping[int, float]] = None) -> LabeledDraw:
    """ν_f 构造：原子排名共用同一个 Uniform 标号，blip 每次抽取取新标号

    Args:
        f: 单纯形点
        n: 抽取次数
        rng: 种子或 RandomStream
        atom_labels: 原子排名到标号的映射，默认随机抽取
    """
    stream = as_stream(rng)
    atoms = sorted({a for code in f.codes() for a in code.atoms()})
    used: set = set()
    if atom_labels is None:
        atom_labels = {a: _fresh_label(stream, used) for a in atoms}
    else:
        missing = [a for a in atoms if a not in atom_labels]
        if missing:
            raise SimplexError(f"no label given for atom(s) {missing}")
        used.update(atom_labels.values())
    codes = sample_codes(f, n, stream)
    labeled = []
    for code in codes:
        mapping: Dict[int, float] = {a: atom_labels[a] for a in code.atoms()}
        for b in sorted((a for a in code.structure.domain() if a <= 0), reverse=True):
            mapping[b] = _fresh_label(stream, used)
        labeled.append(LabeledStructure(tuple(frozenset(tuple(mapping[a] for a in t) for t in slot)
                                              for slot in code.structure.relations), f.sig))
    return LabeledDraw(tuple(codes), tuple(labeled), dict(atom_labels))


def ordering_from_simplex(f: SimplexPoint, atom_labels: Mapping[int, float]) -> AtomOrdering:
    """f 的原子排名所诱导的标号排序，倾向度取真实 ν*

    Raises:
        SimplexError: f 的原子排名与倾向度不一致
    """
    atoms = sorted({a for code in f.codes() for a in code.atoms()})
    return AtomOrdering(tuple(atom_labels[a] for a in atoms), tuple(propensity(f, a) for a in atoms))
