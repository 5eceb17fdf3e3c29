#
# Copyright (c) 2026 The uattn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at:
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# -*- coding: utf-8 -*-
"""
The Tensor class: a dense numpy array that records how it was computed, so that
backward() can push gradients from a scalar output to every leaf that requires them.

Tensors are immutable once created. Only the grad buffers of leaves change, and they
accumulate across backward() calls until the caller resets them with zero_grad().
"""
import logging
import numpy as np

from uattn.errors import GraphError, NonFiniteError, ShapeError

logger = logging.getLogger("uattn.tensor")
logger.addHandler(logging.NullHandler())

DTYPES = (np.float32, np.float64)


def _unbroadcast(grad, shape):
    """Sum `grad` down to `shape`, undoing numpy broadcasting."""
    if grad.shape == tuple(shape):
        return grad
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Tensor:
    """A node in a reverse-mode autodiff graph.

    Leaves are created by the user, optionally with requires_grad=True. Every op returns
    a new Tensor whose backward function maps the output gradient to one gradient per
    parent (or None for parents that need none).
    """

    def __init__(self, data, requires_grad=False, name=None, dtype=None):
        array = np.asarray(data, dtype=dtype)
        if array.dtype not in DTYPES:
            array = array.astype(np.float64 if dtype is None else dtype)
        self.data = array
        self.requires_grad = bool(requires_grad)
        self.grad = None
        self.name = name
        self.op = "leaf"
        self._parents = ()
        self._backward = None

    @classmethod
    def from_op(cls, data, parents, backward, op):
        """Create the result of an op. Raises NonFiniteError if the op produced NaN/Inf,
        naming the op so that training aborts with a useful diagnostic."""
        data = np.asarray(data)
        if not np.all(np.isfinite(data)):
            raise NonFiniteError(f"{op} produced non-finite values")
        out = cls(data, dtype=data.dtype)
        out.op = op
        if any(p.requires_grad for p in parents):
            out.requires_grad = True
            out._parents = tuple(parents)
            out._backward = backward
        return out

    @property
    def shape(self):
        """The extents of this tensor."""
        return self.data.shape

    @property
    def dtype(self):
        """The numpy dtype of this tensor."""
        return self.data.dtype

    @property
    def ndim(self):
        """The rank of this tensor."""
        return self.data.ndim

    @property
    def size(self):
        """The number of elements of this tensor."""
        return self.data.size

    @property
    def is_leaf(self):
        """Returns True if this tensor was not produced by an op."""
        return self._backward is None

    def numpy(self):
        """Return the underlying array (not a copy)."""
        return self.data

    def item(self):
        """Return the value of a one-element tensor as a Python float."""
        if self.data.size != 1:
            raise ShapeError(f"item() on a tensor of shape {self.shape}")
        return float(self.data.reshape(()))

    def detach(self):
        """Return a leaf sharing this tensor's data, cut from the graph."""
        return Tensor(self.data, dtype=self.data.dtype)

    def astype(self, dtype):
        """Return a leaf copy in the given precision, keeping requires_grad."""
        return Tensor(
            self.data.astype(dtype), requires_grad=self.requires_grad, name=self.name
        )

    def zero_grad(self):
        """Reset the gradient buffer of this leaf."""
        self.grad = None

    def __repr__(self):
        return f"Tensor(shape={self.shape}, dtype={self.dtype}, op={self.op})"

    ## Graph traversal

    def _graph_order(self):
        """Return the nodes reachable from self in an order where every node comes
        after all of its consumers (Kahn's algorithm on the reversed graph)."""
        consumers = {id(self): 0}
        nodes = {id(self): self}
        stack = [self]
        while stack:
            node = stack.pop()
            for parent in node._parents:
                if not parent.requires_grad:
                    continue
                key = id(parent)
                if key not in nodes:
                    nodes[key] = parent
                    consumers[key] = 0
                    stack.append(parent)
                consumers[key] += 1

        order = []
        ready = [self]
        while ready:
            node = ready.pop()
            order.append(node)
            for parent in node._parents:
                if not parent.requires_grad:
                    continue
                key = id(parent)
                consumers[key] -= 1
                if consumers[key] == 0:
                    ready.append(parent)

        if len(order) != len(nodes):
            raise GraphError("graph node visited before its dependents")
        return order

    def backward(self):
        """Populate .grad on every leaf that requires it with d(self)/d(leaf). The output
        must hold exactly one element. Leaf gradients accumulate."""
        if self.data.size != 1:
            raise GraphError(f"backward() on non-scalar tensor of shape {self.shape}")
        if not self.requires_grad:
            raise GraphError("backward() on a tensor that does not require grad")

        grads = {id(self): np.ones_like(self.data)}
        for node in self._graph_order():
            grad = grads.pop(id(node), None)
            if grad is None:
                continue
            if node.is_leaf:
                if not np.all(np.isfinite(grad)):
                    raise NonFiniteError(f"gradient of {node.name or 'leaf'} is not finite")
                node.grad = grad.copy() if node.grad is None else node.grad + grad
                continue
            parent_grads = node._backward(grad)
            for parent, pgrad in zip(node._parents, parent_grads):
                if pgrad is None or not parent.requires_grad:
                    continue
                pgrad = _unbroadcast(np.asarray(pgrad, dtype=parent.dtype), parent.shape)
                key = id(parent)
                if key in grads:
                    grads[key] = grads[key] + pgrad
                else:
                    grads[key] = pgrad

    ## Arithmetic

    def _lift(self, other):
        if isinstance(other, Tensor):
            return other
        return Tensor(np.asarray(other, dtype=self.dtype))

    def __add__(self, other):
        other = self._lift(other)
        return Tensor.from_op(
            self.data + other.data,
            (self, other),
            lambda g: (g, g),
            "add",
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return Tensor.from_op(
            self.data - other.data,
            (self, other),
            lambda g: (g, -g),
            "sub",
        )

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        a, b = self.data, other.data
        return Tensor.from_op(a * b, (self, other), lambda g: (g * b, g * a), "mul")

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        a, b = self.data, other.data
        return Tensor.from_op(
            a / b,
            (self, other),
            lambda g: (g / b, -g * a / (b * b)),
            "div",
        )

    def __neg__(self):
        return Tensor.from_op(-self.data, (self,), lambda g: (-g,), "neg")

    def __getitem__(self, index):
        shape, dtype = self.shape, self.dtype

        def backward(g):
            full = np.zeros(shape, dtype=dtype)
            np.add.at(full, index, g)
            return (full,)

        return Tensor.from_op(self.data[index], (self,), backward, "slice")

    ## Reductions and reshaping

    def sum(self, axis=None, keepdims=False):
        """Sum over the given axes."""
        shape = self.shape

        def backward(g):
            if axis is not None and not keepdims:
                g = np.expand_dims(g, axis)
            return (np.broadcast_to(g, shape),)

        return Tensor.from_op(
            np.asarray(self.data.sum(axis=axis, keepdims=keepdims)),
            (self,),
            backward,
            "sum",
        )

    def mean(self, axis=None, keepdims=False):
        """Arithmetic mean over the given axes."""
        if axis is None:
            count = self.size
        else:
            axes = (axis,) if isinstance(axis, int) else axis
            count = int(np.prod([self.shape[a] for a in axes]))
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    def abs(self):
        """Elementwise absolute value; the subgradient at 0 is 0."""
        a = self.data
        return Tensor.from_op(np.abs(a), (self,), lambda g: (g * np.sign(a),), "abs")

    def reshape(self, *shape):
        """Return a tensor with the same data and a new shape."""
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        old = self.shape
        return Tensor.from_op(
            self.data.reshape(shape),
            (self,),
            lambda g: (g.reshape(old),),
            "reshape",
        )

    def transpose(self, *axes):
        """Permute axes (all axes must be given)."""
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        inverse = tuple(np.argsort(axes))
        return Tensor.from_op(
            np.transpose(self.data, axes),
            (self,),
            lambda g: (np.transpose(g, inverse),),
            "transpose",
        )


def tensor(data, requires_grad=False, dtype=np.float32, name=None):
    """Create a leaf tensor of the given precision."""
    return Tensor(data, requires_grad=requires_grad, name=name, dtype=dtype)


def concat(tensors, axis=0):
    """Concatenate tensors along an existing axis."""
    tensors = list(tensors)
    sizes = [t.shape[axis] for t in tensors]
    bounds = np.cumsum([0] + sizes)

    def backward(g):
        return tuple(
            np.take(g, np.arange(bounds[i], bounds[i + 1]), axis=axis)
            for i in range(len(tensors))
        )

    try:
        data = np.concatenate([t.data for t in tensors], axis=axis)
    except ValueError as err:
        raise ShapeError(f"cannot concatenate: {err}") from err
    return Tensor.from_op(data, tensors, backward, "concat")


def stack(tensors, axis=0):
    """Stack equally shaped tensors along a new axis."""
    tensors = list(tensors)

    def backward(g):
        return tuple(np.take(g, i, axis=axis) for i in range(len(tensors)))

    try:
        data = np.stack([t.data for t in tensors], axis=axis)
    except ValueError as err:
        raise ShapeError(f"cannot stack: {err}") from err
    return Tensor.from_op(data, tensors, backward, "stack")
