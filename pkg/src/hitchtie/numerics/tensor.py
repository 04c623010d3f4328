"""Dense tensors with tape-based reverse-mode automatic differentiation.

Values are float32 by default; gradient-check tests run the same graphs at
float64 by constructing float64 leaves. The kernel set is closed: only the
primitives needed by the small conv/graph/attention networks in this project.
"""

from __future__ import annotations

import numpy as np

_OP_KINDS = (
    "matmul",
    "conv2d",
    "transpose_conv2d",
    "relu",
    "softmax_lastdim",
    "concat",
    "add",
    "mul",
    "mean",
    "reshape",
    "gather_rows",
    "log",
    "sigmoid",
)


class ContractViolation(ValueError):
    """An operation was called outside its contract (shape/argument errors)."""


class NumericError(FloatingPointError):
    """An operation produced a non-finite value."""


class Tensor:
    """A dense array plus autodiff bookkeeping.

    grad, when populated, always has the same shape as values.
    """

    __slots__ = ("values", "requires_grad", "grad", "name")

    def __init__(self, values, requires_grad=False, dtype=np.float32, name=None):
        arr = np.asarray(values, dtype=dtype)
        self.values = arr
        self.requires_grad = bool(requires_grad)
        self.grad = None
        self.name = name

    @property
    def shape(self):
        return self.values.shape

    @property
    def dtype(self):
        return self.values.dtype

    @property
    def size(self):
        return self.values.size

    def item(self):
        return float(self.values.reshape(-1)[0])

    def zero_grad(self):
        self.grad = None

    def __repr__(self):
        return f"Tensor(shape={self.values.shape}, requires_grad={self.requires_grad}, name={self.name})"


class _TapeEntry:
    __slots__ = ("inputs", "output", "backward_fn")

    def __init__(self, inputs, output, backward_fn):
        self.inputs = inputs
        self.output = output
        self.backward_fn = backward_fn


class ComputationTape:
    """Ordered record of primitive ops; replayed in reverse for adjoints."""

    def __init__(self):
        self.entries = []

    def record(self, inputs, output, backward_fn):
        self.entries.append(_TapeEntry(inputs, output, backward_fn))

    def clear(self):
        self.entries.clear()

    def __len__(self):
        return len(self.entries)


_ACTIVE_TAPE = ComputationTape()
_GRAD_ENABLED = True


def active_tape():
    return _ACTIVE_TAPE


class no_grad:
    """Context manager disabling tape recording (inference paths)."""

    def __enter__(self):
        global _GRAD_ENABLED
        self._prev = _GRAD_ENABLED
        _GRAD_ENABLED = False
        return self

    def __exit__(self, *exc):
        global _GRAD_ENABLED
        _GRAD_ENABLED = self._prev
        return False


def _check_finite(op_kind, arr):
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"{op_kind} produced non-finite values")


def _record(op_kind, inputs, out_values, backward_fn):
    _check_finite(op_kind, out_values)
    needs = _GRAD_ENABLED and any(t.requires_grad for t in inputs)
    out = Tensor(out_values, requires_grad=needs, dtype=out_values.dtype)
    if needs:
        _ACTIVE_TAPE.record(inputs, out, backward_fn)
    return out


def _accum(tensor, grad):
    if not tensor.requires_grad:
        return
    if tensor.grad is None:
        tensor.grad = np.array(grad, dtype=tensor.values.dtype, copy=True)
    else:
        tensor.grad += grad


def _unbroadcast(grad, shape):
    # Sum grad down to `shape` after numpy broadcasting in add/mul.
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for ax, n in enumerate(shape):
        if n == 1 and grad.shape[ax] != 1:
            grad = grad.sum(axis=ax, keepdims=True)
    return grad


# ---------------------------------------------------------------------------
# primitive kernels


def matmul(a: Tensor, b: Tensor, transpose_a=False, transpose_b=False) -> Tensor:
    av = a.values.T if transpose_a else a.values
    bv = b.values.T if transpose_b else b.values
    if av.ndim != 2 or bv.ndim != 2 or av.shape[1] != bv.shape[0]:
        raise ContractViolation(
            f"matmul: incompatible shapes {a.shape} x {b.shape} "
            f"(transpose_a={transpose_a}, transpose_b={transpose_b})"
        )
    out_values = av @ bv

    def backward(g, out):
        ga = g @ bv.T
        gb = av.T @ g
        _accum(a, ga.T if transpose_a else ga)
        _accum(b, gb.T if transpose_b else gb)

    return _record("matmul", (a, b), out_values, backward)


def relu(x: Tensor) -> Tensor:
    out_values = np.maximum(x.values, 0)

    def backward(g, out):
        _accum(x, g * (x.values > 0))

    return _record("relu", (x,), out_values, backward)


def sigmoid(x: Tensor) -> Tensor:
    v = x.values
    out_values = np.where(v >= 0, 1.0 / (1.0 + np.exp(-np.abs(v))), np.exp(-np.abs(v)) / (1.0 + np.exp(-np.abs(v))))
    out_values = out_values.astype(v.dtype)

    def backward(g, out):
        _accum(x, g * out.values * (1.0 - out.values))

    return _record("sigmoid", (x,), out_values, backward)


def log(x: Tensor, floor=None) -> Tensor:
    v = x.values
    if floor is not None:
        v = np.maximum(v, floor)
    out_values = np.log(v)

    def backward(g, out):
        gx = g / v
        if floor is not None:
            gx = gx * (x.values >= floor)
        _accum(x, gx)

    return _record("log", (x,), out_values, backward)


def softmax_lastdim(x: Tensor) -> Tensor:
    v = x.values
    shifted = v - v.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    out_values = e / e.sum(axis=-1, keepdims=True)

    def backward(g, out):
        s = out.values
        _accum(x, s * (g - (g * s).sum(axis=-1, keepdims=True)))

    return _record("softmax_lastdim", (x,), out_values, backward)


def add(a: Tensor, b: Tensor) -> Tensor:
    try:
        out_values = a.values + b.values
    except ValueError:
        raise ContractViolation(f"add: shapes {a.shape} and {b.shape} do not broadcast") from None

    def backward(g, out):
        _accum(a, _unbroadcast(g, a.shape))
        _accum(b, _unbroadcast(g, b.shape))

    return _record("add", (a, b), out_values, backward)


def mul(a: Tensor, b: Tensor) -> Tensor:
    try:
        out_values = a.values * b.values
    except ValueError:
        raise ContractViolation(f"mul: shapes {a.shape} and {b.shape} do not broadcast") from None

    def backward(g, out):
        _accum(a, _unbroadcast(g * b.values, a.shape))
        _accum(b, _unbroadcast(g * a.values, b.shape))

    return _record("mul", (a, b), out_values, backward)


def mean(x: Tensor, axis=None) -> Tensor:
    out_values = x.values.mean(axis=axis)

    def backward(g, out):
        if axis is None:
            _accum(x, np.full_like(x.values, 1.0 / x.size) * g)
        else:
            n = x.values.shape[axis]
            _accum(x, np.expand_dims(g, axis=axis) / n * np.ones_like(x.values))

    return _record("mean", (x,), np.asarray(out_values, dtype=x.dtype), backward)


def reshape(x: Tensor, shape) -> Tensor:
    try:
        out_values = x.values.reshape(shape)
    except ValueError:
        raise ContractViolation(f"reshape: cannot view {x.shape} as {shape}") from None

    def backward(g, out):
        _accum(x, g.reshape(x.shape))

    return _record("reshape", (x,), out_values, backward)


def concat(tensors, axis=0) -> Tensor:
    tensors = list(tensors)
    if not tensors:
        raise ContractViolation("concat: empty input list")
    out_values = np.concatenate([t.values for t in tensors], axis=axis)
    sizes = [t.values.shape[axis] for t in tensors]
    offsets = np.cumsum([0] + sizes)

    def backward(g, out):
        for t, lo, hi in zip(tensors, offsets[:-1], offsets[1:]):
            idx = [slice(None)] * g.ndim
            idx[axis] = slice(lo, hi)
            _accum(t, g[tuple(idx)])

    return _record("concat", tuple(tensors), out_values, backward)


def gather_rows(x: Tensor, indices) -> Tensor:
    idx = np.asarray(indices, dtype=np.int64)
    if idx.ndim != 1 or idx.min(initial=0) < 0 or (idx.size and idx.max() >= x.shape[0]):
        raise ContractViolation(f"gather_rows: bad indices for {x.shape[0]} rows")
    out_values = x.values[idx]

    def backward(g, out):
        gx = np.zeros_like(x.values)
        np.add.at(gx, idx, g)
        _accum(x, gx)

    return _record("gather_rows", (x,), out_values, backward)


def _im2col(v, kh, kw, stride, pad):
    # v: (H, W, C) -> (out_h*out_w, kh*kw*C)
    h, w, c = v.shape
    if pad:
        v = np.pad(v, ((pad, pad), (pad, pad), (0, 0)))
    ph, pw = v.shape[0], v.shape[1]
    out_h = (ph - kh) // stride + 1
    out_w = (pw - kw) // stride + 1
    s0, s1, s2 = v.strides
    cols = np.lib.stride_tricks.as_strided(
        v,
        shape=(out_h, out_w, kh, kw, c),
        strides=(s0 * stride, s1 * stride, s0, s1, s2),
        writeable=False,
    )
    return cols.reshape(out_h * out_w, kh * kw * c), out_h, out_w, v.shape


def conv2d(x: Tensor, kernel: Tensor, stride=1, pad=0) -> Tensor:
    """2D convolution, x: (H, W, Cin), kernel: (kh, kw, Cin, Cout)."""
    if x.values.ndim != 3 or kernel.values.ndim != 4 or x.shape[2] != kernel.shape[2]:
        raise ContractViolation(f"conv2d: bad shapes x={x.shape} kernel={kernel.shape}")
    kh, kw, cin, cout = kernel.shape
    cols, out_h, out_w, padded_shape = _im2col(x.values, kh, kw, stride, pad)
    kmat = kernel.values.reshape(kh * kw * cin, cout)
    out_values = (cols @ kmat).reshape(out_h, out_w, cout)

    def backward(g, out):
        gmat = g.reshape(out_h * out_w, cout)
        if kernel.requires_grad:
            _accum(kernel, (cols.T @ gmat).reshape(kernel.shape))
        if x.requires_grad:
            gcols = gmat @ kmat.T  # (oh*ow, kh*kw*cin)
            gpad = np.zeros(padded_shape, dtype=x.values.dtype)
            gcols = gcols.reshape(out_h, out_w, kh, kw, cin)
            for i in range(kh):
                for j in range(kw):
                    gpad[i : i + out_h * stride : stride, j : j + out_w * stride : stride] += gcols[:, :, i, j]
            if pad:
                gpad = gpad[pad:-pad, pad:-pad]
            _accum(x, gpad)

    return _record("conv2d", (x, kernel), out_values, backward)


def transpose_conv2d(x: Tensor, kernel: Tensor, stride=2, pad=0, output_padding=0) -> Tensor:
    """Transposed convolution, x: (H, W, Cin), kernel: (kh, kw, Cin, Cout).

    out_size = (in - 1) * stride + k - 2 * pad + output_padding
    """
    if x.values.ndim != 3 or kernel.values.ndim != 4 or x.shape[2] != kernel.shape[2]:
        raise ContractViolation(f"transpose_conv2d: bad shapes x={x.shape} kernel={kernel.shape}")
    h, w, cin = x.shape
    kh, kw, _, cout = kernel.shape
    full_h = (h - 1) * stride + kh
    full_w = (w - 1) * stride + kw
    out_h = full_h - 2 * pad + output_padding
    out_w = full_w - 2 * pad + output_padding
    if out_h <= 0 or out_w <= 0:
        raise ContractViolation("transpose_conv2d: non-positive output size")

    xmat = x.values.reshape(h * w, cin)
    full = np.zeros((full_h + output_padding, full_w + output_padding, cout), dtype=x.values.dtype)
    for i in range(kh):
        for j in range(kw):
            contrib = (xmat @ kernel.values[i, j]).reshape(h, w, cout)
            full[i : i + h * stride : stride, j : j + w * stride : stride] += contrib
    out_values = full[pad : pad + out_h, pad : pad + out_w]

    def backward(g, out):
        gfull = np.zeros_like(full)
        gfull[pad : pad + out_h, pad : pad + out_w] = g
        gk = np.zeros_like(kernel.values) if kernel.requires_grad else None
        gx = np.zeros_like(x.values) if x.requires_grad else None
        for i in range(kh):
            for j in range(kw):
                patch = gfull[i : i + h * stride : stride, j : j + w * stride : stride]
                pmat = patch.reshape(h * w, cout)
                if gk is not None:
                    gk[i, j] += xmat.T @ pmat
                if gx is not None:
                    gx += (pmat @ kernel.values[i, j].T).reshape(h, w, cin)
        if gk is not None:
            _accum(kernel, gk)
        if gx is not None:
            _accum(x, gx)

    return _record("transpose_conv2d", (x, kernel), out_values, backward)


_PRIMITIVES = {
    "matmul": matmul,
    "conv2d": conv2d,
    "transpose_conv2d": transpose_conv2d,
    "relu": relu,
    "softmax_lastdim": softmax_lastdim,
    "concat": concat,
    "add": add,
    "mul": mul,
    "mean": mean,
    "reshape": reshape,
    "gather_rows": gather_rows,
    "log": log,
    "sigmoid": sigmoid,
}


def primitive_forward(op_kind, *inputs, **attrs) -> Tensor:
    """Dispatch a primitive by name; used by contract tests and tooling."""
    if op_kind not in _PRIMITIVES:
        raise ContractViolation(f"unknown op_kind {op_kind!r}; known: {sorted(_PRIMITIVES)}")
    if op_kind == "concat":
        return concat(inputs, **attrs)
    return _PRIMITIVES[op_kind](*inputs, **attrs)


def backward(loss: Tensor, tape: ComputationTape | None = None):
    """Populate grad buffers of every requires_grad leaf reachable from loss.

    The tape is consumed (cleared) afterwards.
    """
    if loss.size != 1:
        raise ContractViolation(f"backward: loss must be scalar, got shape {loss.shape}")
    tape = tape if tape is not None else _ACTIVE_TAPE
    loss.grad = np.ones_like(loss.values)
    # Grad flows to entry outputs only; walk the record in reverse order.
    for entry in reversed(tape.entries):
        g = entry.output.grad
        if g is None:
            continue
        entry.backward_fn(g, entry.output)
    tape.clear()


def constant(values, dtype=np.float32) -> Tensor:
    return Tensor(values, requires_grad=False, dtype=dtype)
