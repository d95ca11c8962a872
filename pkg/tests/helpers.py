"""测试用的序列构造函数"""

from relexkit.core.canonical import RelSequence
from relexkit.core.structures import Signature, Structure


def pair_sequence(*pairs) -> RelSequence:
    """由若干有序对构造 α=(2) 序列"""
    return RelSequence(tuple(Structure.of([p]) for p in pairs), Signature((2,)))


def singleton_sequence(*ids) -> RelSequence:
    """由若干单点构造 α=(1) 序列"""
    return RelSequence(tuple(Structure.of([(a,)]) for a in ids), Signature((1,)))
