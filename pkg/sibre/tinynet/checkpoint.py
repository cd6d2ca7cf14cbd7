"""
Plain-text CSV dump of network parameters
"""

import csv
from pathlib import Path
from typing import List, Union

import numpy as np

from .net import DenseNet


def net_to_rows(net: DenseNet) -> List[List[str]]:
    rows = [
        ["meta", "layer_dims", "|".join(str(d) for d in net.layer_dims)],
        ["meta", "activation", net.activation],
        ["meta", "head", net.head],
        ["meta", "log_std_bounds", "|".join(repr(b) for b in net.log_std_bounds)],
    ]
    for name, param in zip(net.parameter_names(), net.parameters()):
        shape = "x".join(str(d) for d in param.shape)
        rows.append([name, shape] + [repr(float(v)) for v in param.ravel()])
    return rows


def net_from_rows(rows: List[List[str]]) -> DenseNet:
    meta = {row[1]: row[2] for row in rows if row and row[0] == "meta"}
    arrays = {
        row[0]: np.array([float(v) for v in row[2:]]).reshape(
            tuple(int(d) for d in row[1].split("x"))
        )
        for row in rows
        if row and row[0] != "meta"
    }
    layer_dims = [int(d) for d in meta["layer_dims"].split("|")]
    num_layers = len(layer_dims) - 1
    return DenseNet(
        layer_dims=layer_dims,
        weights=[arrays[f"W{i}"] for i in range(num_layers)],
        biases=[arrays[f"b{i}"] for i in range(num_layers)],
        activation=meta["activation"],
        head=meta["head"],
        log_std=arrays.get("log_std"),
        log_std_bounds=tuple(float(b) for b in meta["log_std_bounds"].split("|")),
    )


def save_parameters_csv(net: DenseNet, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        csv.writer(f, lineterminator="\n").writerows(net_to_rows(net))
    return path


def load_parameters_csv(path: Union[str, Path]) -> DenseNet:
    with Path(path).open(newline="") as f:
        return net_from_rows(list(csv.reader(f)))
