"""Adam optimizer with bias correction."""

from __future__ import annotations

import numpy as np

from .tensor import ContractViolation


class AdamState:
    """Per-parameter first/second moment buffers and a shared step counter."""

    def __init__(self, params, beta1=0.9, beta2=0.999, eps=1e-8):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {name: np.zeros_like(p.values) for name, p in params.items()}
        self.v = {name: np.zeros_like(p.values) for name, p in params.items()}


def adam_step(params, state: AdamState, lr):
    """One Adam update over `params` (name -> Tensor with populated grads)."""
    for name, p in params.items():
        if p.grad is None:
            raise ContractViolation(f"adam_step: parameter {name!r} has no gradient")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    bc1 = 1.0 - b1 ** state.t
    bc2 = 1.0 - b2 ** state.t
    for name, p in params.items():
        g = p.grad
        m = state.m[name]
        v = state.v[name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        m_hat = m / bc1
        v_hat = v / bc2
        p.values -= (lr * m_hat / (np.sqrt(v_hat) + state.eps)).astype(p.values.dtype)
