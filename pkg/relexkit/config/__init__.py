# 配置管理模块 - 数值默认值与文件格式版本
from .defaults import RelexConfig, resolve

__all__ = ['RelexConfig', 'resolve']
