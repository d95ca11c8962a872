"""
关系标号结构 x≅ 的规范代表元、限制 R_n、位置置换与度量 d
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import SequenceMismatchError
from .structures import Signature, Structure, encode, ensure_valid, relabel

logger = logging.getLogger(__name__)

SEQUENCE_SEPARATOR = '|'


@dataclass(frozen=True)
class RelSequence:
    """结构序列 x: [n] -> R，所有项共享同一签名"""

    items: Tuple[Structure, ...]
    sig: Signature

    def __post_init__(self):
        items = tuple(self.items)
        for i, item in enumerate(items, start=1):
            ensure_valid(item, self.sig, f"item {i}")
        object.__setattr__(self, 'items', items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Structure]:
        return iter(self.items)

    def __getitem__(self, index):
        return self.items[index]

    def domain(self) -> FrozenSet[int]:
        return frozenset(a for item in self.items for a in item.domain())

    def relabel(self, rho: Mapping[int, int]) -> 'RelSequence':
        """用同一个全局双射重标号每一项"""
        return RelSequence(tuple(relabel(item, rho) for item in self.items), self.sig)

    def encode(self) -> str:
        return encode_sequence(self.items)


@dataclass(frozen=True)
class CanonicalSequence:
    """x≅ 的规范代表元

    witness 记录原标号到规范标号的映射，不参与相等比较。
    """

    items: Tuple[Structure, ...]
    sig: Signature
    witness: Mapping[int, int] = field(default_factory=dict, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Structure]:
        return iter(self.items)

    def __getitem__(self, index):
        return self.items[index]

    def domain(self) -> FrozenSet[int]:
        return frozenset(a for item in self.items for a in item.domain())

    def encode(self) -> str:
        return encode_sequence(self.items)

    def as_sequence(self) -> RelSequence:
        return RelSequence(self.items, self.sig)


def encode_sequence(items: Sequence[Structure]) -> str:
    """序列编码：各项 encode 以 '|' 连接"""
    return SEQUENCE_SEPARATOR.join(encode(item) for item in items)


def _image_key(item: Structure, lookup: Callable[[int], int]) -> Tuple:
    return tuple(tuple(sorted(tuple(lookup(a) for a in t) for t in slot)) for slot in item.relations)


def canonical_form(x) -> CanonicalSequence:
    """按首次出现扫描计算规范代表元

    逐项处理：已标号元素沿用标号，新元素取连续的新标号 c, c+1, ...，
    在所有分配中取使该项按整数分量字典序最小者。并列的分配全部保留，
    只有在之后仍会出现的元素上的映射不同时才算不同候选，因此结果只依赖于等价类。

    Args:
        x: RelSequence 或 CanonicalSequence

    Returns:
        CanonicalSequence
    """
    items = tuple(x.items)
    last_seen: Dict[int, int] = {}
    for i, item in enumerate(items):
        for a in item.domain():
            last_seen[a] = i

    # 候选 = (仍活跃元素的映射, 已结束元素的映射链表)
    candidates: List[Tuple[Dict[int, int], Optional[tuple]]] = [({}, None)]
    counter = 1
    out: List[Structure] = []
    widest = 1
    for i, item in enumerate(items):
        best_key = None
        best: List[Tuple[int, Dict[int, int]]] = []
        n_fresh = 0
        for index, (alive, _) in enumerate(candidates):
            fresh = sorted(a for a in item.domain() if a not in alive)
            n_fresh = len(fresh)
            for ids in itertools.permutations(range(counter, counter + n_fresh)):
                ext = dict(zip(fresh, ids))
                key = _image_key(item, lambda a: ext[a] if a in ext else alive[a])
                if best_key is None or key < best_key:
                    best_key, best = key, [(index, ext)]
                elif key == best_key:
                    best.append((index, ext))
        counter += n_fresh

        ending = [a for a in item.domain() if last_seen[a] == i]
        if len(best) == 1:
            index, ext = best[0]
            alive, log = candidates[index]
            alive.update(ext)
            for a in ending:
                log = (a, alive.pop(a), log)
            candidates = [(alive, log)]
        else:
            survivors = []
            projections = set()
            for index, ext in best:
                alive, log = candidates[index]
                merged = dict(alive)
                merged.update(ext)
                for a in ending:
                    log = (a, merged.pop(a), log)
                projection = frozenset(merged.items())
                if projection in projections:
                    continue
                projections.add(projection)
                survivors.append((merged, log))
            candidates = survivors
            widest = max(widest, len(candidates))

        out.append(Structure(tuple(frozenset(slot) for slot in best_key)))

    alive, log = candidates[0]
    witness = dict(alive)
    while log is not None:
        a, c, log = log
        witness[a] = c
    if widest > 1:
        logger.debug("canonical_form: n=%d, widest tie beam %d", len(items), widest)
    return CanonicalSequence(tuple(out), x.sig, witness)


def are_equivalent(x, y) -> bool:
    """x 与 y 是否由同一个全局双射 ρ 相联系

    Raises:
        SequenceMismatchError: 签名或长度不一致
    """
    if x.sig != y.sig:
        raise SequenceMismatchError(f"signature mismatch: {x.sig.to_list()} vs {y.sig.to_list()}")
    if len(x.items) != len(y.items):
        raise SequenceMismatchError(f"length mismatch: {len(x.items)} vs {len(y.items)}")
    return canonical_form(x).items == canonical_form(y).items


def restrict(x, n: int) -> CanonicalSequence:
    """限制 R_n：前 n 项的规范形式

    Raises:
        SequenceMismatchError: n 不在 [0, len(x)] 内
    """
    if not 0 <= n <= len(x.items):
        raise SequenceMismatchError(f"restriction length {n} out of range 0..{len(x.items)}")
    return canonical_form(RelSequence(tuple(x.items[:n]), x.sig))


def check_permutation(sigma: Sequence[int], n: int) -> Tuple[int, ...]:
    """检查 sigma 是 {1..n} 上的双射（sigma[i-1] = σ(i)）"""
    sigma = tuple(sigma)
    if len(sigma) != n or sorted(sigma) != list(range(1, n + 1)):
        raise SequenceMismatchError(f"not a permutation of 1..{n}: {list(sigma)}")
    return sigma


def inverse_permutation(sigma: Sequence[int]) -> Tuple[int, ...]:
    inverse = [0] * len(sigma)
    for i, s in enumerate(sigma, start=1):
        inverse[s - 1] = i
    return tuple(inverse)


def permute(x, sigma: Sequence[int]) -> CanonicalSequence:
    """按位置置换 σ 重排：i ↦ x(σ(i))，再取规范形式"""
    sigma = check_permutation(sigma, len(x.items))
    return canonical_form(RelSequence(tuple(x.items[s - 1] for s in sigma), x.sig))


def distance(x, y, depth: Optional[int] = None) -> Fraction:
    """有限深度下的度量 d = 1/(1+s)

    s 为 depth 以内使 R_n x = R_n y 成立的最大 n；在整个深度上都相等时返回 0。
    规范形式的前 n 项就是前 n 项的规范形式，所以 s 即规范项序列的公共前缀长度。

    Args:
        x, y: 同签名的序列
        depth: 比较深度，默认取两者长度的较小值

    Raises:
        SequenceMismatchError: 签名不一致或 depth 超出长度
    """
    if x.sig != y.sig:
        raise SequenceMismatchError(f"signature mismatch: {x.sig.to_list()} vs {y.sig.to_list()}")
    limit = min(len(x.items), len(y.items))
    depth = limit if depth is None else depth
    if not 0 <= depth <= limit:
        raise SequenceMismatchError(f"comparison depth {depth} out of range 0..{limit}")
    cx = canonical_form(RelSequence(tuple(x.items[:depth]), x.sig)).items
    cy = canonical_form(RelSequence(tuple(y.items[:depth]), y.sig)).items
    s = 0
    while s < depth and cx[s] == cy[s]:
        s += 1
    if s == depth:
        return Fraction(0)
    return Fraction(1, 1 + s)
