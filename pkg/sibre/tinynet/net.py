"""
Dense network with tanh/relu hidden layers and linear, softmax or Gaussian heads
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionError

ACTIVATIONS = ("tanh", "relu")
HEADS = ("linear", "softmax", "gaussian")
LOG_STD_BOUNDS = (-5.0, 2.0)


@dataclass
class DenseNet:
    """
    weights[i] has shape (layer_dims[i], layer_dims[i + 1]). A Gaussian head
    emits [mean, log_std] where log_std is a state-independent parameter.
    """

    layer_dims: List[int]
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    activation: str = "tanh"
    head: str = "linear"
    log_std: Optional[np.ndarray] = None
    log_std_bounds: Tuple[float, float] = LOG_STD_BOUNDS

    def __post_init__(self):
        if len(self.layer_dims) < 2:
            raise DimensionError("A network needs at least an input and an output layer")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"Unknown activation {self.activation!r}")
        if self.head not in HEADS:
            raise ValueError(f"Unknown head {self.head!r}")
        if len(self.weights) != len(self.layer_dims) - 1 or len(self.biases) != len(self.weights):
            raise DimensionError("Need one weight matrix and bias per layer transition")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (self.layer_dims[i], self.layer_dims[i + 1]):
                raise DimensionError(f"Layer {i} weight shape {w.shape} does not chain")
            if b.shape != (self.layer_dims[i + 1],):
                raise DimensionError(f"Layer {i} bias shape {b.shape} does not chain")
        if self.head == "gaussian":
            if self.log_std is None or self.log_std.shape != (self.layer_dims[-1],):
                raise DimensionError("Gaussian head needs one log_std per output dimension")
        elif self.log_std is not None:
            raise DimensionError("Only the Gaussian head carries log_std")

    @classmethod
    def create(
        cls,
        layer_dims: Sequence[int],
        rng: np.random.Generator,
        activation: str = "tanh",
        head: str = "linear",
        initial_log_std: float = 0.0,
        log_std_bounds: Tuple[float, float] = LOG_STD_BOUNDS,
    ) -> "DenseNet":
        weights, biases = [], []
        for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        log_std = np.full(layer_dims[-1], initial_log_std) if head == "gaussian" else None
        return cls(
            layer_dims=list(layer_dims),
            weights=weights,
            biases=biases,
            activation=activation,
            head=head,
            log_std=log_std,
            log_std_bounds=tuple(log_std_bounds),
        )

    @classmethod
    def identity(cls, dim: int) -> "DenseNet":
        return cls(layer_dims=[dim, dim], weights=[np.eye(dim)], biases=[np.zeros(dim)])

    @property
    def input_dim(self) -> int:
        return self.layer_dims[0]

    @property
    def output_dim(self) -> int:
        return 2 * self.layer_dims[-1] if self.head == "gaussian" else self.layer_dims[-1]

    def parameters(self) -> List[np.ndarray]:
        params = []
        for w, b in zip(self.weights, self.biases):
            params.extend([w, b])
        if self.log_std is not None:
            params.append(self.log_std)
        return params

    def parameter_names(self) -> List[str]:
        names = []
        for i in range(len(self.weights)):
            names.extend([f"W{i}", f"b{i}"])
        if self.log_std is not None:
            names.append("log_std")
        return names

    def copy(self) -> "DenseNet":
        return DenseNet(
            layer_dims=list(self.layer_dims),
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            activation=self.activation,
            head=self.head,
            log_std=None if self.log_std is None else self.log_std.copy(),
            log_std_bounds=self.log_std_bounds,
        )

    def load_from(self, other: "DenseNet") -> None:
        for mine, theirs in zip(self.parameters(), other.parameters()):
            mine[...] = theirs


@dataclass
class GradientSet:
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    log_std: Optional[np.ndarray] = None

    @classmethod
    def zeros_like(cls, net: DenseNet) -> "GradientSet":
        return cls(
            weights=[np.zeros_like(w) for w in net.weights],
            biases=[np.zeros_like(b) for b in net.biases],
            log_std=None if net.log_std is None else np.zeros_like(net.log_std),
        )

    def arrays(self) -> List[np.ndarray]:
        arrays = []
        for w, b in zip(self.weights, self.biases):
            arrays.extend([w, b])
        if self.log_std is not None:
            arrays.append(self.log_std)
        return arrays

    def __add__(self, other: "GradientSet") -> "GradientSet":
        return GradientSet(
            weights=[a + b for a, b in zip(self.weights, other.weights)],
            biases=[a + b for a, b in zip(self.biases, other.biases)],
            log_std=None if self.log_std is None else self.log_std + other.log_std,
        )

    def scale(self, factor: float) -> "GradientSet":
        return GradientSet(
            weights=[factor * w for w in self.weights],
            biases=[factor * b for b in self.biases],
            log_std=None if self.log_std is None else factor * self.log_std,
        )

    def global_norm(self) -> float:
        return float(np.sqrt(sum(np.sum(a * a) for a in self.arrays())))


def _activate(net: DenseNet, z: np.ndarray) -> np.ndarray:
    return np.tanh(z) if net.activation == "tanh" else np.maximum(z, 0.0)


def _activation_derivative(net: DenseNet, z: np.ndarray) -> np.ndarray:
    if net.activation == "tanh":
        return 1.0 - np.tanh(z) ** 2
    return (z > 0.0).astype(z.dtype)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def _as_batch(net: DenseNet, x) -> Tuple[np.ndarray, bool]:
    batch = np.asarray(x, dtype=np.float64)
    single = batch.ndim == 1
    batch = np.atleast_2d(batch)
    if batch.ndim != 2 or batch.shape[1] != net.input_dim:
        raise DimensionError(
            f"Input has shape {np.shape(x)}, network expects {net.input_dim} features"
        )
    return batch, single


def _forward_layers(net: DenseNet, batch: np.ndarray):
    inputs, pre_activations = [], []
    hidden = batch
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        inputs.append(hidden)
        z = hidden @ w + b
        pre_activations.append(z)
        hidden = z if i == last else _activate(net, z)
    return inputs, pre_activations


def clipped_log_std(net: DenseNet) -> np.ndarray:
    return np.clip(net.log_std, *net.log_std_bounds)


def forward(net: DenseNet, x) -> np.ndarray:
    batch, single = _as_batch(net, x)
    _, pre_activations = _forward_layers(net, batch)
    out = pre_activations[-1]
    if net.head == "softmax":
        out = softmax(out)
    elif net.head == "gaussian":
        log_std = np.broadcast_to(clipped_log_std(net), out.shape)
        out = np.concatenate([out, log_std], axis=1)
    return out[0] if single else out


def backward(net: DenseNet, x, upstream_gradient, through_head: bool = True) -> GradientSet:
    """
    Reverse-mode gradient of sum(upstream * forward(net, x)), summed over the batch.
    With through_head=False a softmax net takes the upstream gradient w.r.t. logits.
    """
    batch, _ = _as_batch(net, x)
    upstream = np.atleast_2d(np.asarray(upstream_gradient, dtype=np.float64))
    if upstream.shape != (batch.shape[0], net.output_dim):
        raise DimensionError(
            f"Upstream gradient has shape {np.shape(upstream_gradient)}, "
            f"expected ({batch.shape[0]}, {net.output_dim})"
        )
    inputs, pre_activations = _forward_layers(net, batch)
    grads = GradientSet.zeros_like(net)

    if net.head == "softmax" and through_head:
        probs = softmax(pre_activations[-1])
        delta = probs * (upstream - np.sum(upstream * probs, axis=1, keepdims=True))
    elif net.head == "gaussian":
        width = net.layer_dims[-1]
        delta = upstream[:, :width]
        low, high = net.log_std_bounds
        inside = (net.log_std > low) & (net.log_std < high)
        grads.log_std = upstream[:, width:].sum(axis=0) * inside
    else:
        delta = upstream

    for i in reversed(range(len(net.weights))):
        grads.weights[i] = inputs[i].T @ delta
        grads.biases[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ net.weights[i].T) * _activation_derivative(net, pre_activations[i - 1])
    return grads


def log_likelihood_logit_gradient(probabilities: np.ndarray, actions) -> np.ndarray:
    """Gradient of -log p[action] with respect to the logits: p - onehot(action)."""
    probabilities = np.atleast_2d(probabilities)
    grad = probabilities.copy()
    grad[np.arange(grad.shape[0]), np.atleast_1d(actions)] -= 1.0
    return grad
