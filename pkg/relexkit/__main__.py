"""
relexkit 命令行入口

    relexkit sample --model m.json --n 50 --seed 1 --out seq.jsonl
    relexkit canon --in seq.jsonl --out canon.jsonl
    relexkit estimate --in canon.jsonl --threshold 2 --out fhat.json
    relexkit test-exch --model m.json --n 4 --mode exact
    relexkit roundtrip --in canon.jsonl --seed 1
    relexkit restrict --in canon.jsonl --n 3
    relexkit dist --a x.jsonl --b y.jsonl --depth 5
    relexkit ingest --edges calls.txt --out seq.jsonl

失败时以 JSON {"error": ..., "message": ...} 写到标准错误并以非零码退出。
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from . import __version__
from .core.errors import RelexError, UsageError
from .core.templates import (EXIT_ERROR, CanonCommand, DistCommand, EstimateCommand, IngestCommand,
                             RestrictCommand, RoundTripCommand, SampleCommand, TestExchCommand)

logger = logging.getLogger(__name__)

COMMANDS = {
    'sample': SampleCommand,
    'canon': CanonCommand,
    'estimate': EstimateCommand,
    'test-exch': TestExchCommand,
    'roundtrip': RoundTripCommand,
    'restrict': RestrictCommand,
    'dist': DistCommand,
    'ingest': IngestCommand,
}


def _permutation(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated permutation: {text!r}")


class CommandParser(argparse.ArgumentParser):
    """参数错误抛出 UsageError，由 main 统一写成 JSON 错误"""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = CommandParser(prog='relexkit', description='关系可交换随机结构工具')
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--verbose', '-v', action='store_true', help='输出调试日志')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('sample', help='按模型抽取 ε_f / ε_φ 规范序列')
    p.add_argument('--model', required=True, help='模型文件 (JSON)')
    p.add_argument('--n', type=int, required=True, help='序列长度')
    p.add_argument('--seed', type=int, default=None, help='随机种子，默认读配置')
    p.add_argument('--out', default=None, help='输出序列文件，默认标准输出')
    p.add_argument('--summary', action='store_true', help='打印编码频率表')

    p = sub.add_parser('canon', help='规范形式')
    p.add_argument('--in', dest='source', required=True)
    p.add_argument('--out', default=None)

    p = sub.add_parser('estimate', help='估计 f̂')
    p.add_argument('--in', dest='source', required=True)
    p.add_argument('--threshold', type=int, default=None, help='原子判定阈值，默认读配置')
    p.add_argument('--out', default=None, help='输出模型文件，默认标准输出')
    p.add_argument('--summary', action='store_true', help='打印编码权重表')

    p = sub.add_parser('test-exch', help='关系可交换性检验')
    p.add_argument('--model', required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--mode', choices=('exact', 'mc'), default='exact')
    p.add_argument('--samples', type=int, default=None, help='Monte Carlo 每组样本数')
    p.add_argument('--sigma', type=_permutation, default=None, help='置换，如 2,3,4,1（默认循环移位）')
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--out', default=None, help='报告文件，默认标准输出')
    p.add_argument('--summary', action='store_true', help='打印规范类概率表（exact 模式）')

    p = sub.add_parser('roundtrip', help='星映射往返校验，成功退出码为 0')
    p.add_argument('--in', dest='source', required=True)
    p.add_argument('--seed', type=int, default=None)

    p = sub.add_parser('restrict', help='限制到前 K 项')
    p.add_argument('--in', dest='source', required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--out', default=None)

    p = sub.add_parser('dist', help='序列距离 d')
    p.add_argument('--a', required=True)
    p.add_argument('--b', required=True)
    p.add_argument('--depth', type=int, default=None)

    p = sub.add_parser('ingest', help='原始交互数据转换为序列文件')
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--edges', help='每行 "src dst"')
    group.add_argument('--hyperedges', help='每行一个成员集合')
    group.add_argument('--paths', help='每行一条路径')
    p.add_argument('--undirected', action='store_true', help='边表按无向边存储两个方向')
    p.add_argument('--max-size', type=int, default=None, help='超边 / 路径签名的最大元数')
    p.add_argument('--canonical', action='store_true', help='输出规范形式')
    p.add_argument('--out', default=None)

    return parser


def _error(exc: BaseException) -> int:
    sys.stderr.write(json.dumps({'error': type(exc).__name__, 'message': str(exc)}, ensure_ascii=False) + '\n')
    return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        return _error(e)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    options = {k: v for k, v in vars(args).items() if k not in ('command', 'verbose')}
    try:
        return COMMANDS[args.command]().run(**options)
    except (RelexError, OSError) as e:
        logger.debug("command %s failed", args.command, exc_info=True)
        return _error(e)


if __name__ == '__main__':
    sys.exit(main())
