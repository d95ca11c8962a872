import json
import logging
import sys
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, TextIO

from ..config.defaults import RelexConfig
from ..tools.io_methods import (dump_model, format_sequence, format_table, load_model, model_to_json,
                                parse_edge_list, parse_hyperedge_list, parse_path_list, parse_sequence,
                                write_report, write_sequence)
from .adapters import RandomStream
from .canonical import canonical_form, distance, restrict
from .errors import RelexError
from .inference import (epsilon_f_sampler, epsilon_phi_sampler, estimate_f, exact_distribution,
                        exact_mixture_distribution, test_exchangeability_exact, test_exchangeability_mc)
from .simplex import SimplexPoint, format_weight, sample_epsilon_f, sample_epsilon_phi
from .starmap import roundtrip_check

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ROUNDTRIP_FAILED = 2


class PipelineTemplate(ABC):
    """命令流水线抽象基类

    实现模板方法模式，定义每个子命令的标准流程：读入、计算、输出、收尾
    """

    def __init__(self, config_manager: Optional[RelexConfig] = None, stdout: Optional[TextIO] = None):
        """初始化流水线

        Args:
            config_manager: 配置管理器对象
            stdout: 报告与摘要的输出流，默认 sys.stdout
        """
        self.config = config_manager or RelexConfig()
        self.stdout = stdout or sys.stdout

    def run(self, **kwargs) -> int:
        """执行命令 - 模板方法

        Returns:
            进程退出码
        """
        # 1. 读入数据
        inputs = self._load_inputs(**kwargs)

        # 2. 计算
        result = self._execute(inputs, **kwargs)

        # 3. 输出结果
        self._emit(result, **kwargs)

        # 4. 收尾
        return self._finalize(result, **kwargs)

    @abstractmethod
    def _load_inputs(self, **kwargs) -> Any:
        """读入数据 - 抽象方法，必须由子类实现"""
        pass

    @abstractmethod
    def _execute(self, inputs: Any, **kwargs) -> Dict[str, Any]:
        """计算 - 抽象方法，必须由子类实现"""
        pass

    def _emit(self, result: Dict[str, Any], out: Optional[str] = None, **kwargs):
        """输出结果 - 默认把 report 写成一行 JSON"""
        if 'report' in result:
            if out is None:
                self._print(_json_line(result['report']))
            else:
                write_report(result['report'], out)

    def _finalize(self, result: Dict[str, Any], **kwargs) -> int:
        """收尾 - 默认返回成功"""
        return EXIT_OK

    def _print(self, text: str):
        self.stdout.write(text if text.endswith('\n') else text + '\n')

    def _write_sequence(self, x, out: Optional[str]):
        if out is None:
            self.stdout.write(format_sequence(x))
        else:
            write_sequence(x, out)

    def _stream(self, seed: Optional[int]) -> RandomStream:
        return RandomStream(self.config.get_default_seed() if seed is None else seed)


def _json_line(report: Dict[str, Any]) -> str:
    return json.dumps(report, separators=(',', ':'), ensure_ascii=False)


class SampleCommand(PipelineTemplate):
    """按模型抽取一条 ε_f（或 ε_φ）规范序列，同一种子结果逐字节相同"""

    def _load_inputs(self, model: str, **kwargs):
        return load_model(model)

    def _execute(self, law, n: int, seed: Optional[int] = None, **kwargs):
        stream = self._stream(seed)
        if isinstance(law, SimplexPoint):
            x = sample_epsilon_f(law, n, stream)
        else:
            x = sample_epsilon_phi(law, n, stream)
        return {'sequence': x}

    def _emit(self, result, out: Optional[str] = None, summary: bool = False, **kwargs):
        x = result['sequence']
        self._write_sequence(x, out)
        if summary and len(x):
            self._print(format_table(list(estimate_f(x).as_dict().items()), ('code', 'frequency')))


class CanonCommand(PipelineTemplate):
    """把序列文件换成规范形式"""

    def _load_inputs(self, source: str, **kwargs):
        return parse_sequence(source)

    def _execute(self, x, **kwargs):
        return {'sequence': canonical_form(x)}

    def _emit(self, result, out: Optional[str] = None, **kwargs):
        self._write_sequence(result['sequence'], out)


class EstimateCommand(PipelineTemplate):
    """由观测序列估计 f̂，输出模型文件"""

    def _load_inputs(self, source: str, **kwargs):
        return parse_sequence(source)

    def _execute(self, x, threshold: Optional[int] = None, **kwargs):
        return {'model': estimate_f(x, threshold)}

    def _emit(self, result, out: Optional[str] = None, summary: bool = False, **kwargs):
        f = result['model']
        if out is None:
            self._print(_json_line(model_to_json(f)))
        else:
            dump_model(f, out)
        if summary:
            rows = sorted(f.support, key=lambda cw: (-cw[1], cw[0].encode()))
            self._print(format_table([(code.encode(), w) for code, w in rows], ('code', 'weight')))


class TestExchCommand(PipelineTemplate):
    """关系可交换性检验：exact 为全置换精确枚举，mc 为单个 σ 的卡方检验"""

    __test__ = False

    def _load_inputs(self, model: str, **kwargs):
        return load_model(model)

    def _execute(self, law, n: int, mode: str = 'exact', samples: Optional[int] = None,
                 seed: Optional[int] = None, sigma=None, summary: bool = False, **kwargs):
        if mode == 'exact':
            result = {'report': test_exchangeability_exact(law, n).to_json()}
            if summary:
                if isinstance(law, SimplexPoint):
                    result['classes'] = exact_distribution(law, n).items()
                else:
                    result['classes'] = exact_mixture_distribution(law, n).items()
            return result
        if mode == 'mc':
            sigma = tuple(sigma) if sigma else tuple(range(2, n + 1)) + (1,)
            samples = self.config.get_mc_min_samples() if samples is None else samples
            sampler = epsilon_f_sampler(law) if isinstance(law, SimplexPoint) else epsilon_phi_sampler(law)
            report = test_exchangeability_mc(sampler, n, sigma, samples, self._stream(seed))
            payload = report.to_json()
            payload['sigma'] = list(sigma)
            payload['flagged'] = report.flagged()
            return {'report': payload}
        raise RelexError(f"unknown test mode {mode!r}, expected 'exact' or 'mc'")

    def _emit(self, result, out: Optional[str] = None, summary: bool = False, **kwargs):
        super()._emit(result, out=out)
        if summary and 'classes' in result:
            self._print(format_table(result['classes']))


class RoundTripCommand(PipelineTemplate):
    """星映射与 dagger 的往返校验，失败时退出码为 2"""

    def _load_inputs(self, source: str, **kwargs):
        return parse_sequence(source)

    def _execute(self, x, seed: Optional[int] = None, **kwargs):
        ok = roundtrip_check(x, self._stream(seed)) if len(x) else True
        return {'report': {'roundtrip': ok, 'n': len(x)}, 'ok': ok}

    def _finalize(self, result, **kwargs) -> int:
        return EXIT_OK if result['ok'] else EXIT_ROUNDTRIP_FAILED


class RestrictCommand(PipelineTemplate):
    """限制 R_k：前 k 项的规范形式"""

    def _load_inputs(self, source: str, **kwargs):
        return parse_sequence(source)

    def _execute(self, x, n: int, **kwargs):
        return {'sequence': restrict(x, n)}

    def _emit(self, result, out: Optional[str] = None, **kwargs):
        self._write_sequence(result['sequence'], out)


class DistCommand(PipelineTemplate):
    """两条序列在给定深度下的距离 d = 1/(1+s)"""

    def _load_inputs(self, a: str, b: str, **kwargs):
        return parse_sequence(a), parse_sequence(b)

    def _execute(self, inputs, depth: Optional[int] = None, **kwargs):
        x, y = inputs
        return {'report': {'distance': format_weight(distance(x, y, depth))}}


class IngestCommand(PipelineTemplate):
    """把原始交互数据（边表 / 超边表 / 路径表）转换成序列文件"""

    def _load_inputs(self, edges: Optional[str] = None, hyperedges: Optional[str] = None,
                     paths: Optional[str] = None, undirected: bool = False, max_size: Optional[int] = None,
                     **kwargs):
        if edges is not None:
            return parse_edge_list(edges, directed=not undirected)
        if hyperedges is not None:
            return parse_hyperedge_list(hyperedges, max_size)
        if paths is not None:
            return parse_path_list(paths, max_size)
        raise RelexError('ingest needs one of --edges, --hyperedges or --paths')

    def _execute(self, x, canonical: bool = False, **kwargs):
        return {'sequence': canonical_form(x) if canonical else x}

    def _emit(self, result, out: Optional[str] = None, **kwargs):
        self._write_sequence(result['sequence'], out)
