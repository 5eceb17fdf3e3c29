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
Differentiable ops needed by the generator, the discriminator and the losses:
convolutions (2D and 3D), bilinear 2x upsampling, matmul, row softmax, pointwise
nonlinearities and per-location channel layer normalization.

Convolutions are computed by shifting the padded input once per kernel offset and
contracting the channel axis with one BLAS call per offset; the backward pass
scatters the same slices, which is the column-to-image step without materializing
the column matrix.
"""
import itertools
import numpy as np

from uattn.errors import NonFiniteError, ShapeError
from .autodiff import Tensor

LEAKY_SLOPE = 0.2


def _conv(x, weight, bias, stride, pad, op):
    spatial = weight.ndim - 2
    if x.ndim != spatial + 2:
        raise ShapeError(f"{op}: input rank {x.ndim} does not match weight rank {weight.ndim}")
    if x.shape[1] != weight.shape[1]:
        raise ShapeError(
            f"{op}: input has {x.shape[1]} channels, weight expects {weight.shape[1]}"
        )
    if bias is not None and bias.shape != (weight.shape[0],):
        raise ShapeError(f"{op}: bias shape {bias.shape} does not match {weight.shape[0]} outputs")
    kernel = weight.shape[2:]
    if min(stride) < 1:
        raise ShapeError(f"{op}: stride must be at least 1, got {stride}")
    out_ext = []
    for extent, k, s, p in zip(x.shape[2:], kernel, stride, pad):
        if extent + 2 * p < k:
            raise ShapeError(f"{op}: zero-size output for extent {extent}, kernel {k}, pad {p}")
        out_ext.append((extent + 2 * p - k) // s + 1)
    out_ext = tuple(out_ext)

    xd, wd = x.data, weight.data
    xp = np.pad(xd, [(0, 0), (0, 0)] + [(p, p) for p in pad])
    offsets = list(itertools.product(*[range(k) for k in kernel]))

    def window(offset):
        return (slice(None), slice(None)) + tuple(
            slice(o, o + s * (e - 1) + 1, s) for o, s, e in zip(offset, stride, out_ext)
        )

    out = np.zeros((wd.shape[0], xd.shape[0]) + out_ext, dtype=xd.dtype)
    for offset in offsets:
        tap = wd[(slice(None), slice(None)) + offset]
        out += np.tensordot(tap, xp[window(offset)], axes=([1], [1]))
    out = np.moveaxis(out, 0, 1)
    if bias is not None:
        out = out + bias.data.reshape((1, -1) + (1,) * spatial)

    def backward(g):
        gt = np.moveaxis(g, 1, 0)
        red = tuple(range(1, gt.ndim))
        gxp = np.zeros_like(xp) if x.requires_grad else None
        gw = np.zeros_like(wd) if weight.requires_grad else None
        for offset in offsets:
            win = window(offset)
            if gw is not None:
                gw[(slice(None), slice(None)) + offset] = np.tensordot(
                    gt, xp[win], axes=(red, (0,) + tuple(range(2, gt.ndim)))
                )
            if gxp is not None:
                tap = wd[(slice(None), slice(None)) + offset]
                gxp[win] += np.moveaxis(np.tensordot(tap, gt, axes=([0], [0])), 0, 1)
        gx = None
        if gxp is not None:
            gx = gxp[(slice(None), slice(None)) + tuple(
                slice(p, p + e) for p, e in zip(pad, xd.shape[2:])
            )]
        gb = None
        if bias is not None and bias.requires_grad:
            gb = g.sum(axis=(0,) + tuple(range(2, g.ndim)))
        return gx, gw, gb

    parents = (x, weight) if bias is None else (x, weight, bias)

    def backward_parents(g):
        return backward(g)[: len(parents)]

    return Tensor.from_op(out, parents, backward_parents, op)


def conv2d(x, weight, bias=None, stride=1, pad=0):
    """2D convolution of x [N,C,H,W] with weight [Co,C,k,k]; output extent is
    floor((H + 2*pad - k) / stride) + 1."""
    if weight.ndim != 4:
        raise ShapeError(f"conv2d: weight must be rank 4, got shape {weight.shape}")
    return _conv(x, weight, bias, (stride, stride), (pad, pad), "conv2d")


def conv3d(x, weight, bias=None, stride=(1, 1, 1), pad=1):
    """3D convolution of x [N,C,T,H,W] with weight [Co,C,kt,kh,kw]."""
    if weight.ndim != 5:
        raise ShapeError(f"conv3d: weight must be rank 5, got shape {weight.shape}")
    if isinstance(stride, int):
        stride = (stride,) * 3
    if isinstance(pad, int):
        pad = (pad,) * 3
    return _conv(x, weight, bias, tuple(stride), tuple(pad), "conv3d")


def interpolation_matrix(src, dst, dtype=np.float64):
    """Return the [dst, src] matrix of half-pixel-center bilinear weights: output
    sample i reads input coordinate (i + 0.5) * src / dst - 0.5, clamped to the border."""
    pos = (np.arange(dst, dtype=np.float64) + 0.5) * (src / dst) - 0.5
    pos = np.clip(pos, 0.0, src - 1)
    lo = np.floor(pos).astype(np.int64)
    hi = np.minimum(lo + 1, src - 1)
    frac = pos - lo
    matrix = np.zeros((dst, src), dtype=np.float64)
    rows = np.arange(dst)
    np.add.at(matrix, (rows, lo), 1.0 - frac)
    np.add.at(matrix, (rows, hi), frac)
    return matrix.astype(dtype)


def bilinear_upsample_2x(x):
    """Bilinear 2x upsampling of x [N,C,H,W] with the half-pixel-center convention."""
    if x.ndim != 4:
        raise ShapeError(f"bilinear_upsample_2x: expected rank 4, got shape {x.shape}")
    height, width = x.shape[2:]
    if height < 2 or width < 2:
        raise ShapeError(f"bilinear_upsample_2x: extents must be >= 2, got {height}x{width}")
    rows = interpolation_matrix(height, 2 * height, x.dtype)
    cols = interpolation_matrix(width, 2 * width, x.dtype)
    out = np.matmul(np.matmul(rows, x.data), cols.T)

    def backward(g):
        return (np.matmul(np.matmul(rows.T, g), cols),)

    return Tensor.from_op(out, (x,), backward, "bilinear_upsample_2x")


def matmul(a, b):
    """Matrix product over the last two axes (leading axes are batch axes)."""
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul: incompatible shapes {a.shape} and {b.shape}")
    ad, bd = a.data, b.data

    def backward(g):
        ga = np.matmul(g, np.swapaxes(bd, -1, -2)) if a.requires_grad else None
        gb = np.matmul(np.swapaxes(ad, -1, -2), g) if b.requires_grad else None
        return ga, gb

    return Tensor.from_op(np.matmul(ad, bd), (a, b), backward, "matmul")


def softmax_rows(x):
    """Softmax over the last axis, stabilized by subtracting the row maximum."""
    if np.isnan(x.data).any():
        raise NonFiniteError("softmax_rows: NaN input")
    shifted = x.data - x.data.max(axis=-1, keepdims=True)
    expd = np.exp(shifted)
    out = expd / expd.sum(axis=-1, keepdims=True)

    def backward(g):
        return (out * (g - (g * out).sum(axis=-1, keepdims=True)),)

    return Tensor.from_op(out, (x,), backward, "softmax_rows")


def leaky_relu(x, alpha=LEAKY_SLOPE):
    """max(x, alpha*x) for alpha < 1; the derivative at exactly 0 is 1."""
    xd = x.data
    positive = xd >= 0
    out = np.where(positive, xd, xd * np.asarray(alpha, dtype=xd.dtype))
    slope = np.where(positive, 1.0, alpha).astype(xd.dtype)
    return Tensor.from_op(out, (x,), lambda g: (g * slope,), "leaky_relu")


def relu(x):
    """max(x, 0)."""
    xd = x.data
    mask = (xd > 0).astype(xd.dtype)
    return Tensor.from_op(xd * mask, (x,), lambda g: (g * mask,), "relu")


def tanh(x):
    """Hyperbolic tangent."""
    out = np.tanh(x.data)
    return Tensor.from_op(out, (x,), lambda g: (g * (1.0 - out * out),), "tanh")


def pointwise(x, kind, alpha=LEAKY_SLOPE):
    """Apply the named elementwise nonlinearity: 'leaky_relu', 'relu' or 'tanh'."""
    if kind == "leaky_relu":
        return leaky_relu(x, alpha)
    if kind == "relu":
        return relu(x)
    if kind == "tanh":
        return tanh(x)
    raise ValueError(f"unknown pointwise kind {kind}")


def layer_norm_channels(x, gain, bias, eps=1e-5):
    """Normalize the channel vector (axis 1) at every location of x [N,C,...] to mean 0
    and variance 1, then apply the per-channel affine gain/bias."""
    channels = x.shape[1]
    if gain.shape != (channels,) or bias.shape != (channels,):
        raise ShapeError(
            f"layer_norm_channels: gain/bias {gain.shape}/{bias.shape} for {channels} channels"
        )
    if eps <= 0:
        raise ValueError("layer_norm_channels: eps must be positive")
    bshape = (1, channels) + (1,) * (x.ndim - 2)
    xd = x.data
    centered = xd - xd.mean(axis=1, keepdims=True)
    inv_std = 1.0 / np.sqrt((centered * centered).mean(axis=1, keepdims=True) + eps)
    xhat = centered * inv_std
    gd = gain.data.reshape(bshape)
    out = xhat * gd + bias.data.reshape(bshape)
    others = (0,) + tuple(range(2, x.ndim))

    def backward(g):
        gx = None
        if x.requires_grad:
            gxhat = g * gd
            gx = inv_std * (
                gxhat
                - gxhat.mean(axis=1, keepdims=True)
                - xhat * (gxhat * xhat).mean(axis=1, keepdims=True)
            )
        ggain = (g * xhat).sum(axis=others) if gain.requires_grad else None
        gbias = g.sum(axis=others) if bias.requires_grad else None
        return gx, ggain, gbias

    return Tensor.from_op(out, (x, gain, bias), backward, "layer_norm_channels")
