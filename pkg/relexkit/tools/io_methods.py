"""
文件格式：JSON-lines 序列文件、模型文件、原始交互数据（边表 / 超边表 / 路径表）以及报告输出
"""

import json
import logging
import sys
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from ..config import RelexConfig
from ..core.canonical import RelSequence
from ..core.errors import CodeError, FormatError, RelexError, StructureError
from ..core.factory import FamilyFactory, make_stick_breaking_mixture
from ..core.simplex import MixingMeasure, SimplexPoint, Weight, as_weight, format_weight
from ..core.structures import Signature, Structure, ensure_valid

logger = logging.getLogger(__name__)

Model = Union[SimplexPoint, MixingMeasure]


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(',', ':'), ensure_ascii=False)


def _format_version() -> int:
    return RelexConfig().get_format_version()


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _lines(path: str) -> Iterator[Tuple[int, str]]:
    """逐行读取，跳过空行与 # 注释，行号从 1 开始"""
    with open(path, 'r', encoding='utf-8') as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if line and not line.startswith('#'):
                yield lineno, line


def format_sequence(x) -> str:
    """JSON-lines 序列文本

    首行为 {"format":1,"sig":[...],"n":N}，之后每行一项 {"i":k,"rels":[[...],...]}；
    rels 覆盖签名的全部槽位，元组按 encode 的顺序排列。
    """
    slots = max(x.sig.length, max((item.r for item in x.items), default=0))
    lines = [_dumps({'format': _format_version(), 'sig': x.sig.to_list(), 'n': len(x.items)})]
    for i, item in enumerate(x.items, start=1):
        rels = [[list(t) for t in sorted(item.slot(j))] for j in range(1, slots + 1)]
        lines.append(_dumps({'i': i, 'rels': rels}))
    return '\n'.join(lines) + '\n'


def write_sequence(x, path: str):
    """写出 JSON-lines 序列文件"""
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_sequence(x))
    logger.debug("write_sequence: %d item(s) -> %s", len(x.items), path)


def _parse_header(obj: Any, lineno: int, path: str) -> Tuple[Signature, int]:
    if not isinstance(obj, dict) or 'sig' not in obj or 'n' not in obj:
        raise FormatError('header must be an object with "sig" and "n"', lineno, path)
    version = obj.get('format', _format_version())
    if version != _format_version():
        raise FormatError(f"unsupported format version {version!r}", lineno, path)
    sig_list, n = obj['sig'], obj['n']
    if not isinstance(sig_list, list) or not _is_int(n) or n < 0:
        raise FormatError('header "sig" must be a list and "n" a non-negative integer', lineno, path)
    try:
        return Signature(tuple(sig_list)), n
    except RelexError as e:
        raise FormatError(str(e), lineno, path)


def _parse_item(obj: Any, position: int, sig: Signature, lineno: int, path: str) -> Structure:
    if not isinstance(obj, dict) or 'i' not in obj or 'rels' not in obj:
        raise FormatError('item must be an object with "i" and "rels"', lineno, path)
    if obj['i'] != position:
        raise FormatError(f"expected position {position}, got {obj['i']!r}", lineno, path)
    rels = obj['rels']
    if not isinstance(rels, list) or not all(isinstance(slot, list) for slot in rels):
        raise FormatError('"rels" must be a list of tuple lists', lineno, path)
    slots = []
    for slot in rels:
        tuples = []
        for t in slot:
            if not isinstance(t, list) or not all(_is_int(a) for a in t):
                raise FormatError(f"tuple {t!r} is not an integer array", lineno, path)
            tuples.append(tuple(t))
        slots.append(tuples)
    structure = Structure.of(*slots)
    try:
        ensure_valid(structure, sig)
    except StructureError as e:
        raise FormatError('; '.join(e.violations), lineno, path)
    return structure


def parse_sequence(path: str) -> RelSequence:
    """读取 JSON-lines 序列文件

    Raises:
        FormatError: 头部或某一项不合法（带行号），位置不连续，或项数与 n 不符
    """
    sig: Optional[Signature] = None
    n = 0
    items: List[Structure] = []
    for lineno, line in _lines(path):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise FormatError(f"invalid JSON: {e.msg}", lineno, path)
        if sig is None:
            sig, n = _parse_header(obj, lineno, path)
            continue
        if len(items) >= n:
            raise FormatError(f"more items than the declared n={n}", lineno, path)
        items.append(_parse_item(obj, len(items) + 1, sig, lineno, path))
    if sig is None:
        raise FormatError('missing header line', None, path)
    if len(items) != n:
        raise FormatError(f"declared n={n} but found {len(items)} item(s)", None, path)
    logger.debug("parse_sequence: %d item(s) from %s", n, path)
    return RelSequence(tuple(items), sig)


def _parse_ids(line: str, lineno: int, path: str) -> List[int]:
    try:
        return [int(token) for token in line.split()]
    except ValueError:
        raise FormatError(f"non-integer id in {line!r}", lineno, path)


def _ingest(path: str, family: str, build) -> List[Structure]:
    items = []
    for lineno, line in _lines(path):
        ids = _parse_ids(line, lineno, path)
        try:
            items.append(build(FamilyFactory.create_family(family), ids, lineno))
        except StructureError as e:
            raise StructureError(e.violations, f"{path}:{lineno}")
        except CodeError as e:
            raise FormatError(str(e), lineno, path)
    return items


def parse_edge_list(path: str, directed: bool = True) -> RelSequence:
    """每行 "src dst" 为一次交互，按记录顺序构成有序对序列

    Raises:
        FormatError: 行格式错误或 id 非正
        StructureError: 自环
    """
    def build(family, ids, lineno):
        if len(ids) != 2:
            raise FormatError(f"expected 'src dst', got {len(ids)} field(s)", lineno, path)
        return family.build('structure', src=ids[0], dst=ids[1], directed=directed)

    items = _ingest(path, 'pairs', build)
    return RelSequence(tuple(items), Signature((2,)))


def parse_hyperedge_list(path: str, max_size: Optional[int] = None) -> RelSequence:
    """每行一个成员集合（合著者集合），签名为 (1, 2, ..., K)"""
    items = _ingest(path, 'hyperedges', lambda family, ids, _: family.build('structure', members=ids))
    return RelSequence(tuple(items), _identity_sig(items, max_size, path))


def parse_path_list(path: str, max_size: Optional[int] = None) -> RelSequence:
    """每行一条路径（节点不重复），签名为 (1, 2, ..., K)"""
    items = _ingest(path, 'paths', lambda family, ids, _: family.build('structure', nodes=ids))
    return RelSequence(tuple(items), _identity_sig(items, max_size, path))


def _identity_sig(items: Sequence[Structure], max_size: Optional[int], path: str) -> Signature:
    longest = max((item.r for item in items), default=1)
    if max_size is not None and max_size < longest:
        raise FormatError(f"relation of size {longest} exceeds max_size {max_size}", None, path)
    return Signature.identity(max_size or longest)


def _support_json(f: SimplexPoint) -> Dict[str, Any]:
    return {code.encode(): format_weight(w) for code, w in f.support}


def model_to_json(model: Model) -> Dict[str, Any]:
    """SimplexPoint 或有限混合测度的 JSON 对象"""
    if isinstance(model, SimplexPoint):
        return {'format': _format_version(), 'sig': model.sig.to_list(), 'support': _support_json(model)}
    if model.generator is not None:
        raise FormatError('programmatic mixing measures cannot be serialized')
    return {
        'format': _format_version(),
        'sig': model.sig.to_list(),
        'components': [{'weight': format_weight(w), 'support': _support_json(f)} for w, f in model.components],
    }


def _point_from_json(support: Any, sig: Signature, path: Optional[str]) -> SimplexPoint:
    if isinstance(support, dict):
        pairs = list(support.items())
    elif isinstance(support, list):
        if not all(isinstance(e, dict) and 'code' in e and 'weight' in e for e in support):
            raise FormatError('support entries must be objects with "code" and "weight"', None, path)
        pairs = [(e['code'], e['weight']) for e in support]
    else:
        raise FormatError('"support" must be an object or a list', None, path)
    try:
        return SimplexPoint(tuple((code, as_weight(w)) for code, w in pairs), sig)
    except RelexError as e:
        raise FormatError(str(e), None, path)


def _component_point(component: Dict[str, Any], sig: Optional[Signature], path: Optional[str]) -> SimplexPoint:
    """混合分量：内联 support 字段，或 model 字段中嵌套的完整模型对象

    sig 为 None 时取嵌套模型自身的签名；内联 support 此时无从解析。
    """
    if 'support' in component:
        if sig is None:
            raise FormatError('an inline component "support" needs a top-level "sig" field', None, path)
        return _point_from_json(component['support'], sig, path)
    inner = model_from_json(component['model'], path)
    if not isinstance(inner, SimplexPoint):
        raise FormatError('a mixture component must be a single simplex point', None, path)
    if sig is not None and inner.sig != sig:
        raise FormatError(f"component signature {inner.sig.to_list()} differs from {sig.to_list()}", None, path)
    return inner


def model_from_json(obj: Any, path: Optional[str] = None) -> Model:
    """解析模型 JSON

    三种形式：{"sig", "support"} 为单个 f；{"sig", "components"} 为有限混合 φ；
    混合的顶层 sig 可省略，此时各分量须以 model 字段嵌套完整模型；
    {"generator": {"kind": "stick_breaking", ...}} 为截断 stick-breaking 混合。

    Raises:
        FormatError: 结构不合法、编码无法解析或权重未归一
    """
    if not isinstance(obj, dict):
        raise FormatError('model must be a JSON object', None, path)
    version = obj.get('format', _format_version())
    if version != _format_version():
        raise FormatError(f"unsupported format version {version!r}", None, path)

    if 'generator' in obj:
        generator = obj['generator']
        if not isinstance(generator, dict) or generator.get('kind') != 'stick_breaking':
            raise FormatError('generator must be {"kind": "stick_breaking", ...}', None, path)
        try:
            return make_stick_breaking_mixture(float(generator.get('alpha', 1.0)),
                                               float(generator.get('discount', 0.0)),
                                               int(generator.get('truncation', 50)))
        except (RelexError, TypeError, ValueError) as e:
            raise FormatError(str(e), None, path)

    sig: Optional[Signature] = None
    if 'sig' in obj:
        try:
            sig = Signature(tuple(obj['sig']))
        except (RelexError, TypeError) as e:
            raise FormatError(str(e), None, path)
    elif 'components' not in obj:
        raise FormatError('model needs a "sig" field', None, path)

    if 'support' in obj and sig is not None:
        return _point_from_json(obj['support'], sig, path)
    if 'components' in obj:
        components = obj['components']
        if not isinstance(components, list) or not all(isinstance(c, dict) and 'weight' in c
                                                       and ('support' in c or 'model' in c) for c in components):
            raise FormatError('components must be objects with "weight" and "support" (or "model")', None, path)
        try:
            weighted = []
            for c in components:
                point = _component_point(c, sig, path)
                # 无顶层 sig 时以第一个嵌套模型的签名为准
                sig = sig or point.sig
                weighted.append((as_weight(c['weight']), point))
            return MixingMeasure(tuple(weighted))
        except FormatError:
            raise
        except RelexError as e:
            raise FormatError(str(e), None, path)
    raise FormatError('model needs "support", "components" or "generator"', None, path)


def load_model(path: str) -> Model:
    with open(path, 'r', encoding='utf-8') as f:
        try:
            obj = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f"invalid JSON: {e.msg}", e.lineno, path)
    return model_from_json(obj, path)


def dump_model(model: Model, path: str):
    """写出模型文件；精确权重写成 "p/q" 文本"""
    with open(path, 'w', encoding='utf-8') as f:
        f.write(json.dumps(model_to_json(model), indent=2, ensure_ascii=False) + '\n')


def write_report(report: Dict[str, Any], path: Optional[str] = None):
    """报告写成一行 JSON；path 为空时写到标准输出"""
    text = _dumps(report) + '\n'
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)


def format_table(rows: Sequence[Tuple[str, Weight]], header: Tuple[str, str] = ('class', 'probability'),
                 limit: Optional[int] = 20) -> str:
    """频率表的纯文本形式（--summary 输出）"""
    shown = list(rows if limit is None else rows[:limit])
    cells = [(key if key else '(empty)', str(format_weight(w))) for key, w in shown]
    width = max([len(header[0])] + [len(k) for k, _ in cells])
    lines = [f"{header[0]:<{width}}  {header[1]}", f"{'-' * width}  {'-' * len(header[1])}"]
    lines += [f"{k:<{width}}  {v}" for k, v in cells]
    if limit is not None and len(rows) > limit:
        lines.append(f"... {len(rows) - limit} more row(s)")
    return '\n'.join(lines)
