# 策略组件模块 - 各编码族（划分、有序对、合著集合、路径）的具体实现
