"""
SGD and Adam parameter updates
"""

from dataclasses import dataclass, field
from typing import List, Union

import numpy as np

from ..errors import DimensionError
from .net import DenseNet, GradientSet


@dataclass
class SgdState:
    pass


@dataclass
class AdamState:
    m: List[np.ndarray] = field(default_factory=list)
    v: List[np.ndarray] = field(default_factory=list)
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def for_net(cls, net: DenseNet) -> "AdamState":
        return cls(
            m=[np.zeros_like(p) for p in net.parameters()],
            v=[np.zeros_like(p) for p in net.parameters()],
        )


OptimizerState = Union[SgdState, AdamState]


def make_optimizer_state(kind: str, net: DenseNet) -> OptimizerState:
    if kind == "adam":
        return AdamState.for_net(net)
    if kind == "sgd":
        return SgdState()
    raise ValueError(f"Unknown optimizer {kind!r}")


def optimizer_step(
    net: DenseNet,
    gradients: GradientSet,
    optimizer_state: OptimizerState,
    learning_rate: float,
) -> DenseNet:
    """Update `net` in place (and return it); Adam moments live in `optimizer_state`."""
    params = net.parameters()
    grads = gradients.arrays()
    if len(params) != len(grads) or any(p.shape != g.shape for p, g in zip(params, grads)):
        raise DimensionError("Gradient set is not shape-congruent with the network")

    if isinstance(optimizer_state, AdamState):
        state = optimizer_state
        state.t += 1
        correction1 = 1.0 - state.beta1**state.t
        correction2 = 1.0 - state.beta2**state.t
        for p, g, m, v in zip(params, grads, state.m, state.v):
            m *= state.beta1
            m += (1.0 - state.beta1) * g
            v *= state.beta2
            v += (1.0 - state.beta2) * g * g
            p -= learning_rate * (m / correction1) / (np.sqrt(v / correction2) + state.eps)
    else:
        for p, g in zip(params, grads):
            p -= learning_rate * g

    if net.log_std is not None:
        np.clip(net.log_std, *net.log_std_bounds, out=net.log_std)
    return net


def clip_gradients(gradients: GradientSet, max_norm: float) -> GradientSet:
    norm = gradients.global_norm()
    if max_norm <= 0 or norm <= max_norm:
        return gradients
    return gradients.scale(max_norm / norm)
