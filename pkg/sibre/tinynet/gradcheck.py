"""
Central finite-difference gradients for checking backward passes
"""

from typing import Callable

import numpy as np

from .net import DenseNet, GradientSet


def numerical_gradients(
    net: DenseNet, loss_fn: Callable[[DenseNet], float], h: float = 1e-5
) -> GradientSet:
    grads = GradientSet.zeros_like(net)
    for param, grad in zip(net.parameters(), grads.arrays()):
        for index in np.ndindex(param.shape):
            original = param[index]
            param[index] = original + h
            plus = loss_fn(net)
            param[index] = original - h
            minus = loss_fn(net)
            param[index] = original
            grad[index] = (plus - minus) / (2 * h)
    return grads


def max_relative_error(
    analytic: GradientSet, numeric: GradientSet, floor: float = 1e-6
) -> float:
    worst = 0.0
    for a, n in zip(analytic.arrays(), numeric.arrays()):
        scale = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
        worst = max(worst, float(np.max(np.abs(a - n) / scale)))
    return worst
