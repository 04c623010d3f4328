from .tensor import (
    ComputationTape,
    ContractViolation,
    NumericError,
    Tensor,
    active_tape,
    add,
    backward,
    concat,
    constant,
    conv2d,
    gather_rows,
    log,
    matmul,
    mean,
    mul,
    no_grad,
    primitive_forward,
    relu,
    reshape,
    sigmoid,
    softmax_lastdim,
    transpose_conv2d,
)
from .layers import MLP, Conv2d, ConvTranspose2d, Linear, ParamStore, glorot
from .adam import AdamState, adam_step
from .checkpoint import architecture_hash, load_checkpoint, restore_into, save_checkpoint
