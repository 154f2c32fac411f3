"""Gradient-descent updates with global-norm clipping."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import NumericsError, Parameter


@dataclass
class OptimizerConfig:
    method: str = "adam"  # "adam" or "sgd_momentum"
    learning_rate: float = 1e-3
    momentum: float = 0.9
    betas: tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8
    gradient_clip_norm: float = 5.0

    def __post_init__(self):
        if self.method not in ("adam", "sgd_momentum"):
            raise ValueError(f"unknown optimizer method: {self.method!r}")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.gradient_clip_norm <= 0:
            raise ValueError("gradient_clip_norm must be > 0")


class Optimizer:
    """Updates parameters in place from accumulated gradients, then zeroes them."""

    def __init__(self, params: list[Parameter], config: OptimizerConfig):
        self.params = list(params)
        self.config = config
        self._vel = {id(p): np.zeros_like(p.data) for p in self.params}
        self._m = {id(p): np.zeros_like(p.data) for p in self.params}
        self._v = {id(p): np.zeros_like(p.data) for p in self.params}
        self._t = 0

    def step(self) -> None:
        cfg = self.config
        sq_norm = 0.0
        for p in self.params:
            g = p.grad
            if g is None:
                continue
            if not np.all(np.isfinite(g)):
                raise NumericsError(f"non-finite gradient in parameter {p.name!r}")
            sq_norm += float((g * g).sum())
        norm = np.sqrt(sq_norm)
        scale = cfg.gradient_clip_norm / norm if norm > cfg.gradient_clip_norm else 1.0

        self._t += 1
        for p in self.params:
            g = p.grad
            if g is None:
                continue
            if scale != 1.0:
                g = g * scale
            if cfg.method == "sgd_momentum":
                vel = self._vel[id(p)]
                vel *= cfg.momentum
                vel += g
                p.data -= cfg.learning_rate * vel
            else:
                b1, b2 = cfg.betas
                m = self._m[id(p)]
                v = self._v[id(p)]
                m *= b1
                m += (1 - b1) * g
                v *= b2
                v += (1 - b2) * g * g
                mhat = m / (1 - b1 ** self._t)
                vhat = v / (1 - b2 ** self._t)
                p.data -= cfg.learning_rate * mhat / (np.sqrt(vhat) + cfg.eps)
            p.zero_grad()


def optimizer_step(params: list[Parameter], config: OptimizerConfig,
                   optimizer: Optimizer | None = None) -> Optimizer:
    """One update step; returns the (possibly fresh) optimizer carrying state."""
    if optimizer is None:
        optimizer = Optimizer(params, config)
    optimizer.step()
    return optimizer
