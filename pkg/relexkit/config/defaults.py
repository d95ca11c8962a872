import json
import os
from typing import Any, Dict, Optional

DEFAULT_CONFIG_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'relex_defaults.json')


class RelexConfig:
    """数值默认值配置管理类 - 单例模式"""

    _instance: Optional['RelexConfig'] = None
    _config: Optional[Dict[str, Any]] = None

    def __new__(cls, config_file: Optional[str] = None):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self, config_file: Optional[str] = None):
        if self._config is None:
            self._config = self._load_config(config_file or DEFAULT_CONFIG_FILE)

    def _load_config(self, config_file: str) -> Dict[str, Any]:
        """加载配置文件"""
        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                config = json.load(f)
        except FileNotFoundError:
            raise FileNotFoundError(f"Config file not found: {config_file}")
        except json.JSONDecodeError as e:
            raise ValueError(f"Malformed config file {config_file}: {e}")
        if not isinstance(config, dict):
            raise ValueError(f"Malformed config file {config_file}: top level must be an object")
        return config

    def get_enumeration_budget(self) -> int:
        """获取精确枚举的上限 |support|^n"""
        return int(self._config.get('enumeration_budget', 1_000_000))

    def get_recurrence_threshold(self) -> int:
        """获取原子判定阈值（出现的不同位置数）"""
        return int(self._config.get('recurrence_threshold', 2))

    def get_float_tolerance(self) -> float:
        """获取浮点权重归一化容差"""
        return float(self._config.get('float_tolerance', 1e-12))

    def get_chi2_min_expected(self) -> float:
        """获取卡方检验合并分箱的期望频数阈值"""
        return float(self._config.get('chi2_min_expected', 5.0))

    def get_mc_alpha(self) -> float:
        return float(self._config.get('mc_alpha', 0.001))

    def get_mc_min_samples(self) -> int:
        return int(self._config.get('mc_min_samples', 1000))

    def get_format_version(self) -> int:
        """获取文件格式版本号"""
        return int(self._config.get('format_version', 1))

    def get_default_seed(self) -> int:
        return int(self._config.get('default_seed', 0))

    def get_all(self) -> Dict[str, Any]:
        """获取全部配置的副本"""
        return dict(self._config)

    def reload_config(self, config_file: Optional[str] = None):
        """重新加载配置文件"""
        self._config = self._load_config(config_file or DEFAULT_CONFIG_FILE)


def resolve(value: Any, getter: str) -> Any:
    """显式参数优先，None 时读取配置默认值

    Args:
        value: 调用方传入的值
        getter: RelexConfig 上的 getter 名称

    Returns:
        最终使用的值
    """
    if value is not None:
        return value
    return getattr(RelexConfig(), getter)()
