"""
R-单纯形 F_R 上的有限支撑点、R* 编码的 i.i.d. 抽样、dagger 变换与 ε_f / ε_φ
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

from ..config import resolve
from .adapters import RandomStream, as_stream
from .canonical import CanonicalSequence, RelSequence, canonical_form
from .errors import CodeError, SequenceMismatchError, SignatureError, SimplexError
from .structures import Signature, Structure, encode, ensure_valid, parse_structure

logger = logging.getLogger(__name__)

Weight = Union[Fraction, float]


def as_weight(value) -> Weight:
    """整数、Fraction 与 'p/q' 文本按精确有理数处理，浮点数保持浮点"""
    if isinstance(value, bool):
        raise SimplexError(f"not a weight: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise SimplexError(f"not a weight: {value!r}")
    raise SimplexError(f"not a weight: {value!r}")


def format_weight(value: Weight):
    """精确权重写成 'p/q' 文本，浮点权重原样返回"""
    if isinstance(value, Fraction):
        return str(value)
    return float(value)


def code_violations(structure: Structure) -> List[str]:
    """R* 编码的非正标号必须恰为 {0, -1, ..., -k}"""
    nonpos = sorted((a for a in structure.domain() if a <= 0), reverse=True)
    if nonpos and nonpos != list(range(0, -len(nonpos), -1)):
        return [f"non-positive ids {nonpos} are not consecutive from 0"]
    return []


@dataclass(frozen=True)
class RStarCode:
    """R* 中的编码：正标号为原子排名，非正标号 0, -1, ... 为本关系内的 blip"""

    structure: Structure
    sig: Signature

    def __post_init__(self):
        ensure_valid(self.structure, self.sig, 'code')
        problems = code_violations(self.structure)
        if problems:
            raise CodeError(f"{encode(self.structure)}: {problems[0]}")

    @classmethod
    def from_text(cls, text: str, sig: Signature) -> 'RStarCode':
        return cls(parse_structure(text), sig)

    def encode(self) -> str:
        return encode(self.structure)

    def domain(self) -> FrozenSet[int]:
        return self.structure.domain()

    def atoms(self) -> Tuple[int, ...]:
        return tuple(sorted(a for a in self.structure.domain() if a > 0))

    @property
    def n_blips(self) -> int:
        return sum(1 for a in self.structure.domain() if a <= 0)

    def __str__(self) -> str:
        return self.encode()


@dataclass(frozen=True)
class SimplexPoint:
    """F_R 中的有限支撑点 f

    support 按编码文本排序（即 R 的固定枚举顺序）；全部权重为 Fraction 时精确归一，
    否则在 float_tolerance 内归一。
    """

    support: Tuple[Tuple[RStarCode, Weight], ...]
    sig: Signature
    _index: Dict[RStarCode, Weight] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        pairs = []
        seen = set()
        for code, weight in self.support:
            if not isinstance(code, RStarCode):
                code = RStarCode(code if isinstance(code, Structure) else parse_structure(code), self.sig)
            if code.sig != self.sig:
                raise SimplexError(f"code {code} has signature {code.sig.to_list()}, expected {self.sig.to_list()}")
            if code in seen:
                raise SimplexError(f"code {code} listed twice")
            seen.add(code)
            weight = as_weight(weight)
            if not weight > 0:
                raise SimplexError(f"weight of {code} must be positive, got {weight}")
            pairs.append((code, weight))
        if not pairs:
            raise SimplexError("simplex point needs a non-empty support")
        pairs.sort(key=lambda pair: pair[0].encode())
        total = sum(w for _, w in pairs)
        if all(isinstance(w, Fraction) for _, w in pairs):
            if total != 1:
                raise SimplexError(f"weights sum to {total}, expected 1")
        elif abs(float(total) - 1.0) > resolve(None, 'get_float_tolerance'):
            raise SimplexError(f"weights sum to {float(total)!r}, expected 1")
        object.__setattr__(self, 'support', tuple(pairs))
        object.__setattr__(self, '_index', dict(pairs))

    @classmethod
    def from_mapping(cls, weights: Mapping, sig: Signature) -> 'SimplexPoint':
        """从 {编码(文本/Structure/RStarCode): 权重} 构造"""
        return cls(tuple(weights.items()), sig)

    @classmethod
    def degenerate(cls, code, sig: Signature) -> 'SimplexPoint':
        return cls(((code, Fraction(1)),), sig)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(w, Fraction) for _, w in self.support)

    def codes(self) -> Tuple[RStarCode, ...]:
        return tuple(code for code, _ in self.support)

    def weights(self) -> Tuple[Weight, ...]:
        return tuple(w for _, w in self.support)

    def weight(self, code) -> Weight:
        if not isinstance(code, RStarCode):
            code = RStarCode(code if isinstance(code, Structure) else parse_structure(code), self.sig)
        return self._index.get(code, Fraction(0) if self.is_exact else 0.0)

    def as_dict(self) -> Dict[str, Weight]:
        return {code.encode(): w for code, w in self.support}

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class MixingMeasure:
    """混合测度 φ：有限加权组合，或每次调用返回一个 SimplexPoint 的生成器"""

    components: Tuple[Tuple[Weight, SimplexPoint], ...] = ()
    generator: Optional[Callable[[RandomStream], SimplexPoint]] = field(default=None, compare=False)

    def __post_init__(self):
        components = tuple((as_weight(w), f) for w, f in self.components)
        if self.generator is not None:
            if components:
                raise SimplexError("mixing measure takes either components or a generator, not both")
            return
        if not components:
            raise SimplexError("mixing measure needs at least one component")
        for w, f in components:
            if not w > 0:
                raise SimplexError(f"component weight must be positive, got {w}")
            if f.sig != components[0][1].sig:
                raise SimplexError("mixture components must share one signature")
        total = sum(w for w, _ in components)
        if all(isinstance(w, Fraction) for w, _ in components):
            if total != 1:
                raise SimplexError(f"component weights sum to {total}, expected 1")
        elif abs(float(total) - 1.0) > resolve(None, 'get_float_tolerance'):
            raise SimplexError(f"component weights sum to {float(total)!r}, expected 1")
        object.__setattr__(self, 'components', components)

    @classmethod
    def of(cls, f: SimplexPoint) -> 'MixingMeasure':
        return cls(((Fraction(1), f),))

    @property
    def sig(self) -> Optional[Signature]:
        return self.components[0][1].sig if self.components else None

    def draw(self, rng=None) -> SimplexPoint:
        """从 φ 抽取一个 f"""
        stream = as_stream(rng)
        if self.generator is not None:
            return self.generator(stream)
        if len(self.components) == 1:
            return self.components[0][1]
        index = int(stream.categorical([float(w) for w, _ in self.components], 1)[0])
        return self.components[index][1]


def simplex_distance(f: SimplexPoint, g: SimplexPoint) -> Weight:
    """d_F(f, g) = Σ_B |f_B - g_B|

    Raises:
        SequenceMismatchError: 签名不一致
    """
    if f.sig != g.sig:
        raise SequenceMismatchError(f"signature mismatch: {f.sig.to_list()} vs {g.sig.to_list()}")
    codes = set(f.codes()) | set(g.codes())
    return sum((abs(f.weight(c) - g.weight(c)) for c in codes), Fraction(0) if f.is_exact and g.is_exact else 0.0)


def sample_codes(f: SimplexPoint, n: int, rng=None) -> List[RStarCode]:
    """按 P(X_i = B | f) = f_B 独立抽取 n 个编码"""
    if n < 0:
        raise SimplexError(f"sample size must be non-negative, got {n}")
    if n == 0:
        return []
    codes = f.codes()
    indices = as_stream(rng).categorical([float(w) for w in f.weights()], n)
    return [codes[int(i)] for i in indices]


def dagger(codes: Sequence[Union[RStarCode, Structure]], sig: Optional[Signature] = None) -> RelSequence:
    """dagger 变换：把每项内部的 blip 编号改写为全局互不相同的非正标号

    m_0 = 0；第 n 项无非正标号时原样保留（规则 (i)）；
    有 0, ..., -k 时把 -i 换成 m_{n-1} - i，并令 m_n = m_{n-1} - k - 1（规则 (ii)）。

    Raises:
        CodeError: 某项的非正标号不是从 0 开始的连续整数
        SignatureError: 未给出 sig 且无法从 RStarCode 推断
    """
    if sig is None:
        if not codes or not all(isinstance(code, RStarCode) for code in codes):
            raise SignatureError("dagger needs an explicit signature unless every item is an RStarCode")
        sig = codes[0].sig
    m = 0
    out = []
    for position, code in enumerate(codes, start=1):
        structure = code.structure if isinstance(code, RStarCode) else code
        nonpos = [a for a in structure.domain() if a <= 0]
        if not nonpos:
            out.append(structure)
            continue
        problems = code_violations(structure)
        if problems:
            raise CodeError(f"item {position}: {problems[0]}")
        shift = {a: (m + a if a <= 0 else a) for a in structure.domain()}
        out.append(structure.map_ids(shift))
        m -= len(nonpos)
    return RelSequence(tuple(out), sig)


def sample_epsilon_f(f: SimplexPoint, n: int, rng=None) -> CanonicalSequence:
    """ε_f 的前 n 项：canonical_form(dagger(sample_codes(f, n)))"""
    return canonical_form(dagger(sample_codes(f, n, rng), f.sig))


def sample_epsilon_phi(phi: MixingMeasure, n: int, rng=None) -> CanonicalSequence:
    """ε_φ：先从 φ 抽 f，再抽 ε_f"""
    stream = as_stream(rng)
    f = phi.draw(stream)
    return sample_epsilon_f(f, n, stream)


def sample_positional(points: Sequence[SimplexPoint], rng=None) -> CanonicalSequence:
    """位置相关（不可交换）的抽样：第 i 项来自 points[i]

    Raises:
        SimplexError: points 为空或签名不一致
    """
    if not points:
        raise SimplexError("positional law needs at least one point")
    sig = points[0].sig
    if any(p.sig != sig for p in points):
        raise SimplexError("positional points must share one signature")
    stream = as_stream(rng)
    codes = [sample_codes(p, 1, stream)[0] for p in points]
    return canonical_form(dagger(codes, sig))


def blip_representative(code: RStarCode) -> RStarCode:
    """同一关系内 blip 重新排名得到的编码类的代表元（编码文本最大者）"""
    blips = sorted((a for a in code.structure.domain() if a <= 0), reverse=True)
    if len(blips) < 2:
        return code
    best = code
    best_text = code.encode()
    for image in itertools.permutations(blips):
        mapping = {a: a for a in code.structure.domain() if a > 0}
        mapping.update(zip(blips, image))
        candidate = code.structure.map_ids(mapping)
        text = encode(candidate)
        if text > best_text:
            best, best_text = RStarCode(candidate, code.sig), text
    return best
