"""Dense float64 tensors with reverse-mode automatic differentiation.

Every tensor wraps a numpy array of 64-bit floats. Operations on tensors
that require gradients record a backward closure; calling ``backward`` on a
scalar result walks the recorded graph in reverse topological order and
accumulates gradients into every tensor with ``requires_grad`` set.

Broadcasting is deliberately narrow: elementwise ops need equal shapes, a
scalar (size-1) operand, or a bias row added to a matrix. Anything wider is
a shape error, not a silent broadcast.
"""

from __future__ import annotations

import contextlib

import numpy as np


class ShapeError(ValueError):
    pass


_grad_enabled = True


@contextlib.contextmanager
def no_grad():
    """Disable tape recording inside the block (used for decoding)."""
    global _grad_enabled
    prev = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = prev


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward", "name")

    def __init__(self, data, requires_grad=False, name=None):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self.requires_grad = requires_grad
        self._parents = ()
        self._backward = None
        self.name = name

    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self):
        return self.data.size

    def item(self):
        if self.data.size != 1:
            raise ShapeError(f"item() on tensor of shape {self.shape}")
        return float(self.data.reshape(-1)[0])

    def zero_grad(self):
        self.grad = None

    def _accumulate(self, g):
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += g

    def backward(self):
        """Reverse-mode sweep from a scalar result.

        Visits each recorded node exactly once, in reverse topological
        order, then drops the tape references so the graph can be freed.
        """
        if self.data.size != 1:
            raise ShapeError(f"backward() requires a scalar loss, got shape {self.shape}")
        topo = []
        seen = set()
        stack = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                topo.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen:
                    stack.append((p, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)
        for node in topo:
            node._parents = ()
            node._backward = None

    # operator sugar; the heavy lifting lives in the module-level ops
    def __add__(self, other):
        return add(self, _as_tensor(other))

    def __radd__(self, other):
        return add(_as_tensor(other), self)

    def __sub__(self, other):
        return sub(self, _as_tensor(other))

    def __mul__(self, other):
        return mul(self, _as_tensor(other))

    def __rmul__(self, other):
        return mul(_as_tensor(other), self)

    def __neg__(self):
        return scale(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def __repr__(self):
        tag = f" name={self.name}" if self.name else ""
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}{tag})"


def _as_tensor(x):
    return x if isinstance(x, Tensor) else Tensor(x)


def _make(data, parents, backward):
    out = Tensor(data)
    if _grad_enabled and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = tuple(parents)
        out._backward = backward
    return out


def _unbroadcast(g, shape):
    """Sum gradient ``g`` down to ``shape`` (inverse of numpy broadcasting)."""
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for ax, n in enumerate(shape):
        if n == 1 and g.shape[ax] != 1:
            g = g.sum(axis=ax, keepdims=True)
    return g.reshape(shape)


def _check_broadcastable(op, a, b):
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError(f"{op}: incompatible shapes {a.shape} and {b.shape}") from None
    # only equal shapes, scalars, and row-bias broadcasts are sanctioned
    if a.shape != b.shape and a.size != 1 and b.size != 1:
        small, big = (a, b) if a.size < b.size else (b, a)
        if not (big.data.ndim == 2 and small.data.reshape(-1).shape[0] == big.shape[-1]):
            raise ShapeError(f"{op}: unsupported broadcast {a.shape} vs {b.shape}")


def add(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    _check_broadcastable("add", a, b)
    out_data = a.data + b.data

    def bw(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(g, b.shape))

    return _make(out_data, (a, b), bw)


def sub(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    _check_broadcastable("sub", a, b)
    out_data = a.data - b.data

    def bw(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g, a.shape))
        if b.requires_grad:
            b._accumulate(-_unbroadcast(g, b.shape))

    return _make(out_data, (a, b), bw)


def mul(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    _check_broadcastable("mul", a, b)
    out_data = a.data * b.data

    def bw(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g * b.data, a.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(g * a.data, b.shape))

    return _make(out_data, (a, b), bw)


def scale(a, s: float):
    a = _as_tensor(a)
    out_data = a.data * s

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * s)

    return _make(out_data, (a,), bw)


def matmul(a, b):
    if a.data.ndim != 2 or b.data.ndim != 2:
        raise ShapeError(f"matmul: need 2-D operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: inner dims disagree, {a.shape} @ {b.shape}")
    out_data = a.data @ b.data

    def bw(g):
        if a.requires_grad:
            a._accumulate(g @ b.data.T)
        if b.requires_grad:
            b._accumulate(a.data.T @ g)

    return _make(out_data, (a, b), bw)


def transpose(a):
    out_data = a.data.T

    def bw(g):
        if a.requires_grad:
            a._accumulate(g.T)

    return _make(out_data, (a,), bw)


def concat(tensors, axis=0):
    tensors = [_as_tensor(t) for t in tensors]
    if not tensors:
        raise ShapeError("concat: empty input list")
    out_data = np.concatenate([t.data for t in tensors], axis=axis)
    sizes = [t.shape[axis] for t in tensors]

    def bw(g):
        offset = 0
        for t, n in zip(tensors, sizes):
            if t.requires_grad:
                idx = [slice(None)] * g.ndim
                idx[axis] = slice(offset, offset + n)
                t._accumulate(g[tuple(idx)])
            offset += n

    return _make(out_data, tensors, bw)


def slice_cols(a, start, stop):
    """Contiguous column slice of a 2-D tensor."""
    if a.data.ndim != 2:
        raise ShapeError(f"slice_cols: need 2-D input, got {a.shape}")
    out_data = a.data[:, start:stop]

    def bw(g):
        if a.requires_grad:
            full = np.zeros_like(a.data)
            full[:, start:stop] = g
            a._accumulate(full)

    return _make(out_data, (a,), bw)


def take_rows(a, indices):
    """Gather rows of a 2-D tensor; gradient scatter-adds back."""
    idx = np.asarray(indices, dtype=np.intp)
    out_data = a.data[idx]

    def bw(g):
        if a.requires_grad:
            full = np.zeros_like(a.data)
            np.add.at(full, idx, g)
            a._accumulate(full)

    return _make(out_data, (a,), bw)


def tile_rows(a, n):
    """Repeat a single-row tensor n times; gradient sums over the copies."""
    if a.data.ndim != 2 or a.shape[0] != 1:
        raise ShapeError(f"tile_rows: need a (1, d) tensor, got {a.shape}")
    out_data = np.repeat(a.data, n, axis=0)

    def bw(g):
        if a.requires_grad:
            a._accumulate(g.sum(axis=0, keepdims=True))

    return _make(out_data, (a,), bw)


def tanh(a):
    out_data = np.tanh(a.data)

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * (1.0 - out_data**2))

    return _make(out_data, (a,), bw)


def sigmoid(a):
    out_data = 1.0 / (1.0 + np.exp(-a.data))

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * out_data * (1.0 - out_data))

    return _make(out_data, (a,), bw)


def relu(a):
    out_data = np.maximum(a.data, 0.0)

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * (a.data > 0.0))

    return _make(out_data, (a,), bw)


def log(a):
    out_data = np.log(a.data)

    def bw(g):
        if a.requires_grad:
            a._accumulate(g / a.data)

    return _make(out_data, (a,), bw)


def softmax(a, axis=-1):
    shifted = a.data - a.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    out_data = e / e.sum(axis=axis, keepdims=True)

    def bw(g):
        if a.requires_grad:
            inner = (g * out_data).sum(axis=axis, keepdims=True)
            a._accumulate(out_data * (g - inner))

    return _make(out_data, (a,), bw)


def sum_all(a):
    out_data = np.asarray(a.data.sum())

    def bw(g):
        if a.requires_grad:
            a._accumulate(np.full_like(a.data, float(g)))

    return _make(out_data, (a,), bw)


def max_over(a, axis):
    """Max reduction; gradient flows only to the first argmax per slice."""
    out_data = a.data.max(axis=axis)
    arg = a.data.argmax(axis=axis)  # numpy argmax takes the first on ties

    def bw(g):
        if a.requires_grad:
            full = np.zeros_like(a.data)
            grid = np.indices(out_data.shape)
            idx = list(grid)
            idx.insert(axis if axis >= 0 else a.data.ndim + axis, arg)
            full[tuple(idx)] = g
            a._accumulate(full)

    return _make(out_data, (a,), bw)


def mask_fill(a, mask, value):
    """Replace entries where ``mask`` is true by a constant; no gradient there."""
    m = np.asarray(mask, dtype=bool)
    if m.shape != a.shape:
        raise ShapeError(f"mask_fill: mask shape {m.shape} != tensor shape {a.shape}")
    out_data = np.where(m, value, a.data)

    def bw(g):
        if a.requires_grad:
            a._accumulate(np.where(m, 0.0, g))

    return _make(out_data, (a,), bw)


def embedding_lookup(table, ids):
    """Rows of an embedding table for integer ids; same mechanics as take_rows."""
    return take_rows(table, ids)


def dropout(a, rate, training, rng):
    """Inverted dropout: scale survivors by 1/(1-rate); identity at inference."""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if not training or rate == 0.0:
        return a
    keep = 1.0 - rate
    mask = (rng.random(a.shape) < keep) / keep
    out_data = a.data * mask

    def bw(g):
        if a.requires_grad:
            a._accumulate(g * mask)

    return _make(out_data, (a,), bw)
