# 核心模块 - 结构、规范形式、单纯形、星映射、推断以及编码族策略
