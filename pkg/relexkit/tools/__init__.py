#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
RelexKit Tools Package
工具包模块

包含序列文件、模型文件与原始交互数据的读写函数。
"""

from .io_methods import (dump_model, format_sequence, format_table, load_model, model_from_json,
                         model_to_json, parse_edge_list, parse_hyperedge_list, parse_path_list,
                         parse_sequence, write_report, write_sequence)

__all__ = [
    'parse_sequence',
    'write_sequence',
    'format_sequence',
    'parse_edge_list',
    'parse_hyperedge_list',
    'parse_path_list',
    'load_model',
    'dump_model',
    'model_from_json',
    'model_to_json',
    'write_report',
    'format_table',
]
