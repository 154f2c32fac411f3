"""Dense float64 tensors with reverse-mode automatic differentiation.

Every operation defines an explicit forward pass and a hand-written backward
pass; gradients accumulate into `.grad` ndarrays when `backward()` runs on a
scalar result. Graph recording can be suspended with `no_grad()` for
inference paths.
"""

from __future__ import annotations

import contextlib
import threading
from typing import Callable, Iterable, Optional, Sequence

import numpy as np


class ShapeError(ValueError):
    """Operand shapes incompatible with the operation's contract."""


class NumericsError(ValueError):
    """Non-finite values where finite ones are required."""


# Graph recording is per thread so concurrent no_grad inference (e.g. the
# HTTP service) cannot disturb a training thread.
_STATE = threading.local()


@contextlib.contextmanager
def no_grad():
    """Suspend graph recording; forward values are still computed."""
    prev = grad_enabled()
    _STATE.enabled = False
    try:
        yield
    finally:
        _STATE.enabled = prev


def grad_enabled() -> bool:
    return getattr(_STATE, "enabled", True)


class Tensor:
    """A float64 array node; leaf values are checked finite on construction."""

    __slots__ = ("data", "grad", "requires_grad", "_backward", "_parents")

    def __init__(self, data, requires_grad: bool = False):
        arr = np.asarray(data, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise NumericsError("tensor construction from non-finite values")
        self.data = arr
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self._backward: Optional[Callable[[np.ndarray], None]] = None
        self._parents: tuple = ()

    @property
    def shape(self) -> tuple:
        return self.data.shape

    def item(self) -> float:
        return float(self.data)

    def detach(self) -> "Tensor":
        return _raw(self.data.copy())

    def backward(self, seed: Optional[np.ndarray] = None) -> None:
        if seed is None:
            if self.data.size != 1:
                raise ShapeError(
                    f"backward() needs a scalar, got shape {self.data.shape}")
            seed = np.ones_like(self.data)
        order: list[Tensor] = []
        seen = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if p.requires_grad and id(p) not in seen:
                    stack.append((p, False))
        _accumulate(self, seed)
        for node in reversed(order):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    # Operator sugar over the module-level ops.
    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return mul(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def __getitem__(self, key):
        return narrow(self, key)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"


class Parameter(Tensor):
    """A named, trainable tensor; its gradient buffer always exists."""

    __slots__ = ("name",)

    def __init__(self, data, name: str):
        super().__init__(data, requires_grad=True)
        self.name = name
        self.grad = np.zeros_like(self.data)

    def zero_grad(self) -> None:
        self.grad.fill(0.0)

    def __repr__(self) -> str:
        return f"Parameter({self.name!r}, shape={self.data.shape})"


def _raw(data: np.ndarray) -> Tensor:
    """Wrap an ndarray produced by an op, skipping the finite check."""
    t = Tensor.__new__(Tensor)
    t.data = data
    t.grad = None
    t.requires_grad = False
    t._backward = None
    t._parents = ()
    return t


def _as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _accumulate(t: Tensor, g: np.ndarray) -> None:
    if not t.requires_grad:
        return
    if t.grad is None:
        t.grad = np.array(g, dtype=np.float64, copy=True)
    else:
        t.grad += g


def _attach(out: Tensor, parents: Sequence[Tensor],
            backward: Callable[[np.ndarray], None]) -> Tensor:
    if grad_enabled() and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = tuple(parents)
        out._backward = backward
    return out


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


# -- arithmetic --------------------------------------------------------------

def add(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    out = _raw(a.data + b.data)

    def bwd(g):
        _accumulate(a, _unbroadcast(g, a.data.shape))
        _accumulate(b, _unbroadcast(g, b.data.shape))
    return _attach(out, (a, b), bwd)


def sub(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    out = _raw(a.data - b.data)

    def bwd(g):
        _accumulate(a, _unbroadcast(g, a.data.shape))
        _accumulate(b, _unbroadcast(-g, b.data.shape))
    return _attach(out, (a, b), bwd)


def mul(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    out = _raw(a.data * b.data)

    def bwd(g):
        _accumulate(a, _unbroadcast(g * b.data, a.data.shape))
        _accumulate(b, _unbroadcast(g * a.data, b.data.shape))
    return _attach(out, (a, b), bwd)


def matmul(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    ad, bd = a.data, b.data
    try:
        out = _raw(ad @ bd)
    except ValueError as exc:
        raise ShapeError(f"matmul: {ad.shape} @ {bd.shape}: {exc}") from None

    def bwd(g):
        if ad.ndim == 2 and bd.ndim == 2:
            _accumulate(a, g @ bd.T)
            _accumulate(b, ad.T @ g)
        elif ad.ndim == 2 and bd.ndim == 1:
            _accumulate(a, np.outer(g, bd))
            _accumulate(b, ad.T @ g)
        elif ad.ndim == 1 and bd.ndim == 2:
            _accumulate(a, bd @ g)
            _accumulate(b, np.outer(ad, g))
        else:  # 1-D dot
            _accumulate(a, g * bd)
            _accumulate(b, g * ad)
    return _attach(out, (a, b), bwd)


def transpose(a: Tensor) -> Tensor:
    if a.data.ndim != 2:
        raise ShapeError(f"transpose expects a matrix, got {a.data.shape}")
    out = _raw(a.data.T)

    def bwd(g):
        _accumulate(a, g.T)
    return _attach(out, (a,), bwd)


def reshape(a: Tensor, shape) -> Tensor:
    out = _raw(a.data.reshape(shape))

    def bwd(g):
        _accumulate(a, g.reshape(a.data.shape))
    return _attach(out, (a,), bwd)


def narrow(a: Tensor, key) -> Tensor:
    out = _raw(a.data[key])

    def bwd(g):
        full = np.zeros_like(a.data)
        np.add.at(full, key, g)
        _accumulate(a, full)
    return _attach(out, (a,), bwd)


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    tensors = [_as_tensor(t) for t in tensors]
    out = _raw(np.concatenate([t.data for t in tensors], axis=axis))
    sizes = [t.data.shape[axis] for t in tensors]

    def bwd(g):
        start = 0
        for t, size in zip(tensors, sizes):
            sl = [slice(None)] * g.ndim
            sl[axis] = slice(start, start + size)
            _accumulate(t, g[tuple(sl)])
            start += size
    return _attach(out, tensors, bwd)


def stack(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    tensors = [_as_tensor(t) for t in tensors]
    out = _raw(np.stack([t.data for t in tensors], axis=axis))

    def bwd(g):
        parts = np.moveaxis(g, axis, 0)
        for t, part in zip(tensors, parts):
            _accumulate(t, part)
    return _attach(out, tensors, bwd)


def take(a: Tensor, indices) -> Tensor:
    """Select rows (axis 0) by integer index array."""
    idx = np.asarray(indices, dtype=np.intp)
    out = _raw(a.data[idx])

    def bwd(g):
        full = np.zeros_like(a.data)
        np.add.at(full, idx, g)
        _accumulate(a, full)
    return _attach(out, (a,), bwd)


def sum_(a: Tensor) -> Tensor:
    out = _raw(np.asarray(a.data.sum()))

    def bwd(g):
        _accumulate(a, np.broadcast_to(g, a.data.shape))
    return _attach(out, (a,), bwd)


def mean(a: Tensor) -> Tensor:
    n = a.data.size
    out = _raw(np.asarray(a.data.mean()))

    def bwd(g):
        _accumulate(a, np.broadcast_to(g / n, a.data.shape))
    return _attach(out, (a,), bwd)


# -- nonlinearities ----------------------------------------------------------

def tanh(a: Tensor) -> Tensor:
    val = np.tanh(a.data)
    out = _raw(val)

    def bwd(g):
        _accumulate(a, g * (1.0 - val * val))
    return _attach(out, (a,), bwd)


def sigmoid(a: Tensor) -> Tensor:
    val = 1.0 / (1.0 + np.exp(-np.clip(a.data, -500, 500)))
    out = _raw(val)

    def bwd(g):
        _accumulate(a, g * val * (1.0 - val))
    return _attach(out, (a,), bwd)


def relu(a: Tensor) -> Tensor:
    val = np.maximum(a.data, 0.0)
    out = _raw(val)

    def bwd(g):
        _accumulate(a, g * (a.data > 0.0))
    return _attach(out, (a,), bwd)


def softmax(a: Tensor) -> Tensor:
    """Numerically stabilized softmax over a vector."""
    if a.data.ndim != 1:
        raise ShapeError(f"softmax expects a vector, got {a.data.shape}")
    z = a.data - a.data.max()
    e = np.exp(z)
    p = e / e.sum()
    out = _raw(p)

    def bwd(g):
        _accumulate(a, p * (g - float(g @ p)))
    return _attach(out, (a,), bwd)


def softmax_xent(logits: Tensor, target_index: int) -> tuple[np.ndarray, Tensor]:
    """Softmax probabilities plus cross-entropy loss against one target id."""
    if logits.data.ndim != 1:
        raise ShapeError(f"softmax_xent expects a vector, got {logits.data.shape}")
    k = logits.data.shape[0]
    if not 0 <= target_index < k:
        raise IndexError(f"target index {target_index} out of range for {k} classes")
    z = logits.data - logits.data.max()
    e = np.exp(z)
    s = e.sum()
    p = e / s
    loss_val = float(np.log(s) - z[target_index])
    out = _raw(np.asarray(loss_val))

    def bwd(g):
        d = p.copy()
        d[target_index] -= 1.0
        _accumulate(logits, d * float(g))
    return p.copy(), _attach(out, (logits,), bwd)


# -- fused layers ------------------------------------------------------------

def dense(x: Tensor, w: Tensor, b: Optional[Tensor] = None) -> Tensor:
    """Affine map w @ x (+ b); accepts a vector or a batch of row vectors."""
    xd, wd = x.data, w.data
    if wd.ndim != 2 or xd.shape[-1] != wd.shape[1]:
        raise ShapeError(
            f"dense: expected input [..,{wd.shape[1]}] for weights {wd.shape}, "
            f"got {xd.shape}")
    out_val = xd @ wd.T
    if b is not None:
        out_val = out_val + b.data
    out = _raw(out_val)

    def bwd(g):
        _accumulate(x, g @ wd)
        if xd.ndim == 1:
            _accumulate(w, np.outer(g, xd))
        else:
            _accumulate(w, g.reshape(-1, g.shape[-1]).T @ xd.reshape(-1, xd.shape[-1]))
        if b is not None:
            _accumulate(b, _unbroadcast(g, b.data.shape))
    parents = (x, w) if b is None else (x, w, b)
    return _attach(out, parents, bwd)


_CONV_OFFSETS = [(dr, dc) for dr in range(3) for dc in range(3)]


def conv2d(x: Tensor, w: Tensor, b: Optional[Tensor] = None) -> Tensor:
    """3x3 cross-correlation, stride 1, zero padding 1 (fixed geometry)."""
    xd = x.data
    single = xd.ndim == 3
    if single:
        xd = xd[None]
    if xd.ndim != 4:
        raise ShapeError(f"conv2d: expected [C,H,W] or [B,C,H,W], got {x.data.shape}")
    batch, cin, h, wdt = xd.shape
    if w.data.ndim != 4 or w.data.shape[1:] != (cin, 3, 3):
        raise ShapeError(
            f"conv2d: expected weights [Cout,{cin},3,3], got {w.data.shape}")
    cout = w.data.shape[0]

    xp = np.zeros((batch, cin, h + 2, wdt + 2), dtype=np.float64)
    xp[:, :, 1:-1, 1:-1] = xd
    patches = np.stack([xp[:, :, dr:dr + h, dc:dc + wdt]
                        for dr, dc in _CONV_OFFSETS], axis=2)
    cols = patches.reshape(batch, cin * 9, h * wdt).transpose(0, 2, 1)
    wmat = w.data.reshape(cout, cin * 9)
    out_val = cols @ wmat.T  # [B, HW, Cout]
    if b is not None:
        out_val = out_val + b.data
    out_val = out_val.transpose(0, 2, 1).reshape(batch, cout, h, wdt)
    if single:
        out_val = out_val[0]
    out = _raw(out_val)

    def bwd(g):
        gb = g[None] if single else g
        gmat = gb.reshape(batch, cout, h * wdt).transpose(0, 2, 1)  # [B,HW,Cout]
        dw = np.tensordot(gmat, cols, axes=([0, 1], [0, 1]))  # [Cout, Cin*9]
        _accumulate(w, dw.reshape(w.data.shape))
        if b is not None:
            _accumulate(b, gmat.sum(axis=(0, 1)))
        dcols = gmat @ wmat  # [B, HW, Cin*9]
        dstack = dcols.transpose(0, 2, 1).reshape(batch, cin, 9, h, wdt)
        dxp = np.zeros_like(xp)
        for k, (dr, dc) in enumerate(_CONV_OFFSETS):
            dxp[:, :, dr:dr + h, dc:dc + wdt] += dstack[:, :, k]
        dx = dxp[:, :, 1:-1, 1:-1]
        _accumulate(x, dx[0] if single else dx)
    parents = (x, w) if b is None else (x, w, b)
    return _attach(out, parents, bwd)


def lstm_step(x: Tensor, state: tuple[Tensor, Tensor], wx: Tensor, wh: Tensor,
              b: Tensor) -> tuple[Tensor, Tensor]:
    """One LSTM cell update; returns (h', c').

    Gate order along the stacked weight rows is input, forget, cell, output.
    """
    h, c = state
    hidden = h.data.shape[0]
    if x.data.ndim != 1 or wx.data.shape != (4 * hidden, x.data.shape[0]):
        raise ShapeError(
            f"lstm_step: input {x.data.shape} vs weights {wx.data.shape}")
    pre = wx.data @ x.data + wh.data @ h.data + b.data
    i = 1.0 / (1.0 + np.exp(-pre[:hidden]))
    f = 1.0 / (1.0 + np.exp(-pre[hidden:2 * hidden]))
    g2 = np.tanh(pre[2 * hidden:3 * hidden])
    o = 1.0 / (1.0 + np.exp(-pre[3 * hidden:]))
    c2 = f * c.data + i * g2
    t = np.tanh(c2)
    h2 = o * t
    out = _raw(np.concatenate([h2, c2]))

    def bwd(grad):
        dh = grad[:hidden]
        dc = grad[hidden:].copy()
        dc += dh * o * (1.0 - t * t)
        dpre = np.concatenate([
            dc * g2 * i * (1.0 - i),
            dc * c.data * f * (1.0 - f),
            dc * i * (1.0 - g2 * g2),
            dh * t * o * (1.0 - o),
        ])
        _accumulate(wx, np.outer(dpre, x.data))
        _accumulate(wh, np.outer(dpre, h.data))
        _accumulate(b, dpre)
        _accumulate(x, wx.data.T @ dpre)
        _accumulate(h, wh.data.T @ dpre)
        _accumulate(c, dc * f)
    hc = _attach(out, (x, h, c, wx, wh, b), bwd)
    return hc[:hidden], hc[hidden:]
