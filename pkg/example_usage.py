#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
RelexKit 使用示例
展示结构编码、规范形式、抽样、星映射往返、估计与可交换性检验

包括：
1. 结构与规范形式 - 通话记录的首次出现规范标号
2. 油漆盒抽样与精确分布
3. 星映射往返与 f̂ 估计
4. 可交换性检验 - 精确全置换与 Monte Carlo 卡方
5. 文件读写与配置系统
"""

import os
from fractions import Fraction
from typing import Optional

from relexkit import (RelationalToolkit, RelexConfig, RelSequence, Signature, Structure, canonical_form, dagger,
                      encode, make_pair_code, make_paintbox, partition_blocks, sample_positional)
from relexkit.core.simplex import SimplexPoint
from relexkit.tools import format_table


def demo_canonical_form():
    """演示1：结构编码与规范形式"""
    print("=" * 60)
    print("演示1：结构编码与规范形式")
    print("=" * 60)

    # 四次通话 (7,9) (2,7) (8,4) (7,2)
    calls = RelSequence(tuple(Structure.of([edge]) for edge in [(7, 9), (2, 7), (8, 4), (7, 2)]), Signature((2,)))
    c = canonical_form(calls)
    print(f"  原始序列: {calls.encode()}")
    print(f"  规范形式: {c.encode()}")
    print(f"  标号映射: {dict(sorted(c.witness.items()))}")

    # dagger 变换的划分轨迹
    codes = [Structure.of([(a,)]) for a in (4, 0, 2, 0, 2, 2, 0)]
    x = dagger(codes, Signature((1,)))
    print(f"  dagger: {' '.join(encode(item) for item in x)}")
    print(f"  划分块: {partition_blocks(x)}")
    return c


def demo_paintbox(toolkit: RelationalToolkit):
    """演示2：油漆盒抽样与精确分布"""
    print("\n" + "=" * 60)
    print("演示2：油漆盒抽样与精确分布")
    print("=" * 60)

    f = make_paintbox(0, [Fraction(1, 2), Fraction(3, 10), Fraction(1, 5)])
    x = toolkit.sample(f, 12)
    print(f"  ε_f 前 12 项: {x.encode()}")

    dist = toolkit.distribution(f, 2)
    print(format_table(dist.items()))
    return dist


def demo_roundtrip_and_estimate(toolkit: RelationalToolkit):
    """演示3：星映射往返与 f̂ 估计"""
    print("\n" + "=" * 60)
    print("演示3：星映射往返与 f̂ 估计")
    print("=" * 60)

    f = SimplexPoint.from_mapping({make_pair_code(1, 2): Fraction(1, 2),
                                   make_pair_code(1, 0): Fraction(3, 10),
                                   make_pair_code(0, -1): Fraction(1, 5)}, Signature((2,)))
    x = toolkit.sample(f, 40)
    print(f"  往返校验: {toolkit.roundtrip(x)}")
    f_hat = toolkit.estimate(x)
    print(format_table(sorted(f_hat.as_dict().items()), ('code', 'weight')))
    return f_hat


def demo_exchangeability(toolkit: RelationalToolkit):
    """演示4：可交换性检验"""
    print("\n" + "=" * 60)
    print("演示4：可交换性检验")
    print("=" * 60)

    f = make_paintbox(Fraction(1, 4), [Fraction(1, 2), Fraction(1, 4)])
    report = toolkit.check_exchangeability(f, 3)
    print(f"  ε_f 精确检验 max TV = {report.max_tv}")

    # 位置相关的对照：前两项共享原子 1，第三项为 blip
    sig = Signature((1,))
    atom, blip = SimplexPoint.degenerate('{1:[(1)]}', sig), SimplexPoint.degenerate('{1:[(0)]}', sig)
    points = [atom, atom, blip]
    adversarial = toolkit.check_exchangeability(points)
    print(f"  位置相关对照 max TV = {adversarial.max_tv}")
    print(f"  对照抽样: {sample_positional(points, toolkit.stream).encode()}")
    return report, adversarial


def demo_files_and_config(toolkit: RelationalToolkit, output_dir: str):
    """演示5：文件读写与配置系统"""
    print("\n" + "=" * 60)
    print("演示5：文件读写与配置系统")
    print("=" * 60)

    os.makedirs(output_dir, exist_ok=True)
    f = make_paintbox(Fraction(1, 5), [Fraction(1, 2), Fraction(3, 10)])
    model_path = os.path.join(output_dir, 'paintbox.json')
    sequence_path = os.path.join(output_dir, 'paintbox.jsonl')
    toolkit.save_model(f, model_path)
    toolkit.save_sequence(toolkit.sample(toolkit.load_model(model_path), 10), sequence_path)
    x = toolkit.load_sequence(sequence_path)
    print(f"  ✓ 保存文件: {model_path}")
    print(f"  ✓ 保存文件: {sequence_path} ({len(x)} 项)")

    config = RelexConfig()
    for key, value in sorted(config.get_all().items()):
        print(f"  {key}: {value}")
    return x


def main(output_dir: Optional[str] = None):
    """运行全部演示"""
    output_dir = output_dir or 'output'
    toolkit = RelationalToolkit(seed=2024)
    demo_canonical_form()
    demo_paintbox(toolkit)
    demo_roundtrip_and_estimate(toolkit)
    demo_exchangeability(toolkit)
    demo_files_and_config(toolkit, output_dir)
    print("\n演示完成")


if __name__ == "__main__":
    main()
