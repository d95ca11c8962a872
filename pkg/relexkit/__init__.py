# RelexKit - 关系可交换随机结构工具包
# 基于策略模式和工厂模式的编码族，模板方法模式的命令流水线

__version__ = "1.0.0"
__author__ = "RelexKit Team"
__description__ = "关系可交换随机结构：规范形式、R-单纯形表示、抽样、估计与可交换性检验"

# 配置管理
from .config import RelexConfig

# 异常
from .core.errors import (AbsentElementError, BudgetExceededError, CodeError, EmptySequenceError, FormatError,
                          RelabelError, RelexError, SampleSizeError, SequenceMismatchError, SignatureError,
                          SimplexError, StructureError)

# 结构与规范形式
from .core.structures import Signature, Structure, ValidationReport, encode, parse_structure, relabel, validate
from .core.canonical import (CanonicalSequence, RelSequence, are_equivalent, canonical_form, distance, permute,
                             restrict)

# 单纯形与抽样
from .core.adapters import RandomStream
from .core.simplex import (MixingMeasure, RStarCode, SimplexPoint, dagger, sample_codes, sample_epsilon_f,
                           sample_epsilon_phi, sample_positional, simplex_distance)

# 编码族与工厂
from .core.factory import (FamilyFactory, make_pair_code, make_paintbox, make_path_code, make_set_code,
                           make_stick_breaking_mixture, random_simplex)
from .core.strategies.base import CodeFamily

# 星映射
from .core.starmap import (AtomOrdering, LabeledStructure, ShapeTemplate, atom_order, attach_uniform_labels,
                           ordering_from_simplex, propensity, propensity_given, roundtrip_check, sample_nu_f,
                           shape_template, star)

# 推断与检验
from .core.inference import (ChiSquareReport, ClassDistribution, ExchangeabilityReport, arrival_order,
                             empirical_propensity, estimate_f, exact_distribution, exact_mixture_distribution,
                             exact_positional_distribution, merge_blip_classes, partition_blocks,
                             test_exchangeability_exact, test_exchangeability_mc)

# 命令流水线与工具类
from .core.templates import PipelineTemplate
from .toolkit import RelationalToolkit

# 主要的公共API
__all__ = [
    # 配置管理
    'RelexConfig',

    # 异常
    'RelexError',
    'SignatureError',
    'StructureError',
    'RelabelError',
    'SequenceMismatchError',
    'EmptySequenceError',
    'AbsentElementError',
    'CodeError',
    'SimplexError',
    'BudgetExceededError',
    'SampleSizeError',
    'FormatError',

    # 结构与规范形式
    'Signature',
    'Structure',
    'ValidationReport',
    'validate',
    'relabel',
    'encode',
    'parse_structure',
    'RelSequence',
    'CanonicalSequence',
    'canonical_form',
    'are_equivalent',
    'restrict',
    'permute',
    'distance',

    # 单纯形与抽样
    'RandomStream',
    'RStarCode',
    'SimplexPoint',
    'MixingMeasure',
    'simplex_distance',
    'sample_codes',
    'dagger',
    'sample_epsilon_f',
    'sample_epsilon_phi',
    'sample_positional',

    # 编码族与工厂
    'CodeFamily',
    'FamilyFactory',
    'make_paintbox',
    'make_stick_breaking_mixture',
    'make_pair_code',
    'make_set_code',
    'make_path_code',
    'random_simplex',

    # 星映射
    'LabeledStructure',
    'AtomOrdering',
    'ShapeTemplate',
    'attach_uniform_labels',
    'propensity',
    'propensity_given',
    'shape_template',
    'atom_order',
    'star',
    'roundtrip_check',
    'sample_nu_f',
    'ordering_from_simplex',

    # 推断与检验
    'ClassDistribution',
    'ExchangeabilityReport',
    'ChiSquareReport',
    'estimate_f',
    'merge_blip_classes',
    'empirical_propensity',
    'exact_distribution',
    'exact_mixture_distribution',
    'exact_positional_distribution',
    'test_exchangeability_exact',
    'test_exchangeability_mc',
    'partition_blocks',
    'arrival_order',

    # 命令流水线与工具类
    'PipelineTemplate',
    'RelationalToolkit',
]
