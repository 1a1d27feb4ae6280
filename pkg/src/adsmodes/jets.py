"""Truncated Taylor arithmetic.

A :class:`Jet` holds the Taylor coefficients of a function about a point,
``f(r + h) = sum_j c[j] h**j`` for ``j <= order``.  Coefficients may be
arrays, so one jet can carry a whole grid of expansion points.  Profiles
written with ordinary arithmetic plus the functions below produce exact
derivatives (up to rounding) without finite differences.
"""

from __future__ import annotations

import math

import numpy as np


class Jet:
    __slots__ = ("c",)
    __array_priority__ = 1000

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs)

    @classmethod
    def variable(cls, x, order):
        x = np.asarray(x, dtype=float)
        c = np.zeros((order + 1,) + x.shape)
        c[0] = x
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order, shape=()):
        value = np.asarray(value)
        c = np.zeros((order + 1,) + np.broadcast_shapes(shape, value.shape), dtype=np.result_type(value, float))
        c[0] = value
        return cls(c)

    @property
    def order(self):
        return self.c.shape[0] - 1

    @property
    def value(self):
        return self.c[0]

    def derivative_values(self):
        """Array whose k-th entry is the k-th derivative at the expansion point."""
        fact = np.array([math.factorial(k) for k in range(self.order + 1)], dtype=float)
        return self.c * fact.reshape((-1,) + (1,) * (self.c.ndim - 1))

    def diff(self):
        """Jet of the derivative (one order lower)."""
        k = np.arange(1, self.order + 1, dtype=float).reshape((-1,) + (1,) * (self.c.ndim - 1))
        return Jet(self.c[1:] * k)

    def truncate(self, order):
        return Jet(self.c[: order + 1])

    def _coerce(self, other):
        n = min(self.order, other.order)
        return self.c[: n + 1], other.c[: n + 1]

    def __add__(self, other):
        if isinstance(other, Jet):
            a, b = self._coerce(other)
            return Jet(a + b)
        other = np.asarray(other)
        shape = (self.c.shape[0],) + np.broadcast_shapes(self.c.shape[1:], other.shape)
        c = np.array(np.broadcast_to(self.c, shape), dtype=np.result_type(self.c, other, float))
        c[0] = c[0] + other
        return Jet(c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            a, b = self._coerce(other)
            n = a.shape[0]
            out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
            for k in range(n):
                acc = a[0] * b[k]
                for j in range(1, k + 1):
                    acc = acc + a[j] * b[k - j]
                out[k] = acc
            return Jet(out)
        return Jet(self.c * np.asarray(other))

    __rmul__ = __mul__

    def reciprocal(self):
        a = self.c
        n = a.shape[0]
        q = np.zeros_like(a, dtype=np.result_type(a, float))
        q[0] = 1.0 / a[0]
        for k in range(1, n):
            acc = 0.0
            for j in range(1, k + 1):
                acc = acc + a[j] * q[k - j]
            q[k] = -acc / a[0]
        return Jet(q)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.c / np.asarray(other))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        return power(self, p)

    def __repr__(self):
        return f"Jet(order={self.order}, value={self.value!r})"


def _generic(u: Jet, v0, dv: Jet):
    """Coefficients of v = F(u) given v0 = F(u0) and the jet of F'(u)."""
    n = u.order
    shape = (n + 1,) + np.broadcast_shapes(u.c.shape[1:], dv.c.shape[1:])
    out = np.zeros(shape, dtype=np.result_type(u.c, dv.c, v0))
    out[0] = v0
    for k in range(1, n + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + j * u.c[j] * dv.c[k - j]
        out[k] = acc / k
    return Jet(out)


def power(x, p):
    if not isinstance(x, Jet):
        return np.power(x, p)
    if p == 0:
        return Jet.constant(1.0, x.order, x.c.shape[1:])
    if isinstance(p, (int, np.integer)) and 0 < p <= 8:
        out = x
        for _ in range(p - 1):
            out = out * x
        return out
    u = x.c
    n = u.shape[0]
    v = np.zeros_like(u, dtype=np.result_type(u, float))
    v[0] = np.power(u[0], p)
    for k in range(1, n):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + (p * j - (k - j)) * u[j] * v[k - j]
        v[k] = acc / (k * u[0])
    return Jet(v)


def exp(x):
    if not isinstance(x, Jet):
        return np.exp(x)
    u = x.c
    v = np.zeros_like(u, dtype=np.result_type(u, float))
    v[0] = np.exp(u[0])
    for k in range(1, u.shape[0]):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + j * u[j] * v[k - j]
        v[k] = acc / k
    return Jet(v)


def log(x):
    if not isinstance(x, Jet):
        return np.log(x)
    if x.order == 0:
        return Jet(np.log(x.c))
    return _generic(x, np.log(x.c[0]), 1.0 / x.truncate(x.order - 1))


def sincos(x):
    if not isinstance(x, Jet):
        return np.sin(x), np.cos(x)
    u = x.c
    s = np.zeros_like(u, dtype=np.result_type(u, float))
    c = np.zeros_like(s)
    s[0] = np.sin(u[0])
    c[0] = np.cos(u[0])
    for k in range(1, u.shape[0]):
        acc_s = 0.0
        acc_c = 0.0
        for j in range(1, k + 1):
            acc_s = acc_s + j * u[j] * c[k - j]
            acc_c = acc_c + j * u[j] * s[k - j]
        s[k] = acc_s / k
        c[k] = -acc_c / k
    return Jet(s), Jet(c)


def sin(x):
    return sincos(x)[0]


def cos(x):
    return sincos(x)[1]


def atanh(x):
    if not isinstance(x, Jet):
        return np.arctanh(x)
    if x.order == 0:
        return Jet(np.arctanh(x.c))
    xt = x.truncate(x.order - 1)
    return _generic(x, np.arctanh(x.c[0]), 1.0 / (1.0 - xt * xt))


def value(x):
    return x.value if isinstance(x, Jet) else x
