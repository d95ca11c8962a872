from typing import List, Optional, Sequence, Union

import numpy as np


class RandomStream:
    """numpy 随机数生成器适配器

    封装 numpy.random.Generator，所有抽样操作都通过它完成；
    相同种子产生相同的抽样结果，spawn 生成互相独立的子流
    """

    def __init__(self, seed: Optional[Union[int, np.random.SeedSequence]] = None):
        """初始化随机流

        Args:
            seed: 整数种子或 SeedSequence，None 时从系统熵取种子
        """
        if isinstance(seed, np.random.SeedSequence):
            self._seed_seq = seed
        else:
            self._seed_seq = np.random.SeedSequence(seed)
        self._generator = np.random.default_rng(self._seed_seq)

    @property
    def seed(self):
        """根种子（entropy）"""
        return self._seed_seq.entropy

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def categorical(self, probs: Sequence[float], size: int) -> np.ndarray:
        """按概率向量独立抽取 size 个下标"""
        p = np.asarray(probs, dtype=float)
        total = p.sum()
        if total <= 0:
            raise ValueError("categorical probabilities must have positive mass")
        return self._generator.choice(len(p), size=size, p=p / total)

    def uniform(self, size: Optional[int] = None):
        """Uniform[0,1) 抽样"""
        return self._generator.random(size)

    def beta(self, a: float, b: float) -> float:
        return float(self._generator.beta(a, b))

    def integers(self, low: int, high: int, size: Optional[int] = None):
        """[low, high) 上的均匀整数"""
        return self._generator.integers(low, high, size=size)

    def permutation(self, n: int) -> List[int]:
        """{1..n} 的均匀随机置换"""
        return [int(v) + 1 for v in self._generator.permutation(n)]

    def spawn(self, k: int) -> List['RandomStream']:
        """派生 k 个独立子流"""
        return [RandomStream(child) for child in self._seed_seq.spawn(k)]


def as_stream(rng: Optional[Union[int, RandomStream]] = None) -> RandomStream:
    """把整数种子或 None 统一为 RandomStream"""
    if isinstance(rng, RandomStream):
        return rng
    return RandomStream(rng)
