"""共享 fixtures：常用签名、序列、单纯形点与配置恢复"""

import json
from fractions import Fraction

import pytest

from relexkit.config import RelexConfig
from relexkit.core.factory import FamilyFactory, make_pair_code, make_paintbox
from relexkit.core.simplex import SimplexPoint
from relexkit.core.structures import Signature

from helpers import pair_sequence, singleton_sequence


@pytest.fixture(autouse=True)
def restore_config():
    """每个用例结束后恢复默认配置并清理工厂缓存"""
    yield
    RelexConfig().reload_config()
    FamilyFactory.clear_cache()


@pytest.fixture
def pair_sig():
    return Signature((2,))


@pytest.fixture
def partition_sig():
    return Signature((1,))


@pytest.fixture
def calls():
    """四次通话 (a,b) (c,a) (d,e) (a,c)，a=7 b=9 c=2 d=8 e=4"""
    return pair_sequence((7, 9), (2, 7), (8, 4), (7, 2))


@pytest.fixture
def calls_canonical():
    return pair_sequence((1, 2), (3, 1), (4, 5), (1, 3))


@pytest.fixture
def partition_trace():
    """dagger 之后的划分序列 {4},{0},{2},{-1},{2},{2},{-2}"""
    return singleton_sequence(4, 0, 2, -1, 2, 2, -2)


@pytest.fixture
def partition_canonical():
    return singleton_sequence(1, 2, 3, 4, 3, 3, 5)


@pytest.fixture
def paintbox():
    """油漆盒 (1/2, 3/10, 1/5)，无 dust"""
    return make_paintbox(0, [Fraction(1, 2), Fraction(3, 10), Fraction(1, 5)])


@pytest.fixture
def coin():
    """{1}: 1/2, {0}: 1/2"""
    return make_paintbox(Fraction(1, 2), [Fraction(1, 2)])


@pytest.fixture
def pair_point(pair_sig):
    """有序对上的三编码单纯形点，原子倾向度 4/5 > 1/2"""
    return SimplexPoint.from_mapping({make_pair_code(1, 2): Fraction(1, 2),
                                      make_pair_code(1, 0): Fraction(3, 10),
                                      make_pair_code(0, -1): Fraction(1, 5)}, pair_sig)


@pytest.fixture
def config_file(tmp_path):
    """写一份临时配置文件，返回写入函数"""
    def write(**overrides):
        values = RelexConfig().get_all()
        values.update(overrides)
        path = tmp_path / 'relex_test.json'
        path.write_text(json.dumps(values), encoding='utf-8')
        return str(path)
    return write
