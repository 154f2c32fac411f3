"""Parameterized layers built on the tensor ops, plus initialization."""

from __future__ import annotations

import numpy as np

from .tensor import (Parameter, Tensor, ShapeError, concat, conv2d, dense,
                     lstm_step, stack, take)


def glorot_uniform(shape, fan_in: int, fan_out: int, rng: np.random.Generator):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class Dense:
    def __init__(self, in_dim: int, out_dim: int, name: str,
                 rng: np.random.Generator, zero_init: bool = False,
                 bias: bool = True):
        if zero_init:
            w = np.zeros((out_dim, in_dim))
        else:
            w = glorot_uniform((out_dim, in_dim), in_dim, out_dim, rng)
        self.w = Parameter(w, f"{name}.w")
        self.b = Parameter(np.zeros(out_dim), f"{name}.b") if bias else None

    def __call__(self, x: Tensor) -> Tensor:
        return dense(x, self.w, self.b)

    def parameters(self) -> list[Parameter]:
        return [self.w] + ([self.b] if self.b is not None else [])


class Conv2d:
    def __init__(self, in_channels: int, out_channels: int, name: str,
                 rng: np.random.Generator):
        fan_in, fan_out = in_channels * 9, out_channels * 9
        w = glorot_uniform((out_channels, in_channels, 3, 3), fan_in, fan_out, rng)
        self.w = Parameter(w, f"{name}.w")
        self.b = Parameter(np.zeros(out_channels), f"{name}.b")

    def __call__(self, x: Tensor) -> Tensor:
        return conv2d(x, self.w, self.b)

    def parameters(self) -> list[Parameter]:
        return [self.w, self.b]


class LSTMCell:
    """Single-sample LSTM cell; forget-gate bias starts at +1."""

    def __init__(self, in_dim: int, hidden_dim: int, name: str,
                 rng: np.random.Generator):
        self.hidden_dim = hidden_dim
        self.wx = Parameter(
            glorot_uniform((4 * hidden_dim, in_dim), in_dim, hidden_dim, rng),
            f"{name}.wx")
        self.wh = Parameter(
            glorot_uniform((4 * hidden_dim, hidden_dim), hidden_dim, hidden_dim, rng),
            f"{name}.wh")
        b = np.zeros(4 * hidden_dim)
        b[hidden_dim:2 * hidden_dim] = 1.0
        self.b = Parameter(b, f"{name}.b")

    def initial_state(self) -> tuple[Tensor, Tensor]:
        return (Tensor(np.zeros(self.hidden_dim)),
                Tensor(np.zeros(self.hidden_dim)))

    def step(self, x: Tensor, state: tuple[Tensor, Tensor]) -> tuple[Tensor, Tensor]:
        return lstm_step(x, state, self.wx, self.wh, self.b)

    def parameters(self) -> list[Parameter]:
        return [self.wx, self.wh, self.b]


class BiRNN:
    """Bi-directional LSTM encoder; concatenated states projected to out_dim."""

    def __init__(self, in_dim: int, out_dim: int, name: str,
                 rng: np.random.Generator):
        self.fwd = LSTMCell(in_dim, out_dim, f"{name}.fwd", rng)
        self.bwd = LSTMCell(in_dim, out_dim, f"{name}.bwd", rng)
        self.proj = Dense(2 * out_dim, out_dim, f"{name}.proj", rng)

    def encode(self, sequence: list[Tensor]) -> list[Tensor]:
        if not sequence:
            raise ShapeError("birnn_encode: empty sequence")
        fwd_states = []
        state = self.fwd.initial_state()
        for x in sequence:
            state = self.fwd.step(x, state)
            fwd_states.append(state[0])
        bwd_states = [None] * len(sequence)
        state = self.bwd.initial_state()
        for idx in range(len(sequence) - 1, -1, -1):
            state = self.bwd.step(sequence[idx], state)
            bwd_states[idx] = state[0]
        return [self.proj(concat([f, b]))
                for f, b in zip(fwd_states, bwd_states)]

    def parameters(self) -> list[Parameter]:
        return self.fwd.parameters() + self.bwd.parameters() + self.proj.parameters()


class Embedding:
    def __init__(self, vocab_size: int, dim: int, name: str,
                 rng: np.random.Generator):
        self.w = Parameter(
            rng.normal(0.0, 0.1, size=(vocab_size, dim)), f"{name}.w")

    def __call__(self, index):
        return take(self.w, index)

    def parameters(self) -> list[Parameter]:
        return [self.w]


def birnn_encode(rnn: BiRNN, sequence: list[Tensor]) -> list[Tensor]:
    """Functional alias for BiRNN.encode."""
    return rnn.encode(sequence)


def collect_named(params: list[Parameter]) -> dict[str, Parameter]:
    """Index parameters by name, rejecting duplicates."""
    named: dict[str, Parameter] = {}
    for p in params:
        if p.name in named:
            raise ValueError(f"duplicate parameter name: {p.name}")
        named[p.name] = p
    return named
