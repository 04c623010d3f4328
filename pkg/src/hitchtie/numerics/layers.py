"""Parameter containers for the small networks used throughout the project.

Weights initialize uniform in +-sqrt(6/(fan_in+fan_out)) from a seeded
generator; biases start at zero.
"""

from __future__ import annotations

import numpy as np

from . import tensor as T


def glorot(rng, fan_in, fan_out, shape, dtype=np.float32):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape).astype(dtype)


class ParamStore:
    """Flat name -> Tensor registry; the unit of checkpointing."""

    def __init__(self):
        self.params: dict[str, T.Tensor] = {}

    def add(self, name, values):
        if name in self.params:
            raise ValueError(f"duplicate parameter {name!r}")
        t = T.Tensor(values, requires_grad=True, name=name)
        self.params[name] = t
        return t

    def named(self, prefix=""):
        return {k: v for k, v in self.params.items() if k.startswith(prefix)}

    def set_trainable(self, prefix, trainable):
        for k, v in self.params.items():
            if k.startswith(prefix):
                v.requires_grad = trainable

    def zero_grads(self):
        for v in self.params.values():
            v.grad = None


class Linear:
    def __init__(self, store: ParamStore, rng, name, d_in, d_out, bias=True):
        self.w = store.add(f"{name}.w", glorot(rng, d_in, d_out, (d_in, d_out)))
        self.b = store.add(f"{name}.b", np.zeros(d_out, dtype=np.float32)) if bias else None

    def __call__(self, x: T.Tensor) -> T.Tensor:
        out = T.matmul(x, self.w)
        if self.b is not None:
            out = T.add(out, self.b)
        return out


class MLP:
    """Stack of Linear+ReLU hidden layers and a linear output layer."""

    def __init__(self, store, rng, name, d_in, hidden, d_out):
        dims = [d_in] + list(hidden)
        self.hidden = [Linear(store, rng, f"{name}.h{i}", a, b) for i, (a, b) in enumerate(zip(dims[:-1], dims[1:]))]
        self.out = Linear(store, rng, f"{name}.out", dims[-1], d_out)

    def __call__(self, x: T.Tensor) -> T.Tensor:
        for layer in self.hidden:
            x = T.relu(layer(x))
        return self.out(x)


class Conv2d:
    def __init__(self, store, rng, name, c_in, c_out, k=3, stride=2, pad=1):
        fan_in = k * k * c_in
        fan_out = k * k * c_out
        self.kernel = store.add(f"{name}.k", glorot(rng, fan_in, fan_out, (k, k, c_in, c_out)))
        self.bias = store.add(f"{name}.b", np.zeros(c_out, dtype=np.float32))
        self.stride = stride
        self.pad = pad

    def __call__(self, x: T.Tensor) -> T.Tensor:
        return T.add(T.conv2d(x, self.kernel, stride=self.stride, pad=self.pad), self.bias)


class ConvTranspose2d:
    def __init__(self, store, rng, name, c_in, c_out, k=3, stride=2, pad=1, output_padding=1):
        fan_in = k * k * c_in
        fan_out = k * k * c_out
        self.kernel = store.add(f"{name}.k", glorot(rng, fan_in, fan_out, (k, k, c_in, c_out)))
        self.bias = store.add(f"{name}.b", np.zeros(c_out, dtype=np.float32))
        self.stride = stride
        self.pad = pad
        self.output_padding = output_padding

    def __call__(self, x: T.Tensor) -> T.Tensor:
        y = T.transpose_conv2d(
            x, self.kernel, stride=self.stride, pad=self.pad, output_padding=self.output_padding
        )
        return T.add(y, self.bias)
