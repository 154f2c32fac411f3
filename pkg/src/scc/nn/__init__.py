"""Minimal tensor/layer library with explicit forward and backward passes."""

from .tensor import (NumericsError, Parameter, ShapeError, Tensor, add, concat,
                     conv2d, dense, grad_enabled, lstm_step, matmul, mean, mul,
                     narrow, no_grad, relu, reshape, sigmoid, softmax,
                     softmax_xent, stack, sub, sum_, take, tanh, transpose)
from .layers import (BiRNN, Conv2d, Dense, Embedding, LSTMCell, birnn_encode,
                     collect_named, glorot_uniform)
from .optim import Optimizer, OptimizerConfig, optimizer_step
from .gradcheck import GradCheckReport, gradient_check
from .checkpoint import (Checkpoint, CheckpointError, FORMAT_VERSION,
                         load_checkpoint, restore_parameters, save_checkpoint)

__all__ = [
    "Tensor", "Parameter", "ShapeError", "NumericsError", "no_grad",
    "grad_enabled", "add", "sub", "mul", "matmul", "concat", "stack", "take",
    "narrow", "reshape", "transpose", "sum_", "mean", "tanh", "sigmoid",
    "relu", "softmax", "softmax_xent", "dense", "conv2d", "lstm_step",
    "Dense", "Conv2d", "LSTMCell", "BiRNN", "Embedding", "birnn_encode",
    "glorot_uniform", "collect_named", "Optimizer", "OptimizerConfig",
    "optimizer_step", "GradCheckReport", "gradient_check", "Checkpoint",
    "CheckpointError", "FORMAT_VERSION", "load_checkpoint",
    "restore_parameters", "save_checkpoint",
]
