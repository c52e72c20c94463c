"""Scalar quaternion arithmetic and vectorized component-array helpers.

A quaternion q = x0 + x1*i + x2*j + x3*k is stored in component order
(x0, x1, x2, x3) with the multiplication signs

    i*i = j*j = k*k = -1,   i*j = -j*i = k,   j*k = -k*j = i,   k*i = -i*k = j.

The module-level helpers operate on float arrays whose trailing axis has
length 4 and broadcast like ordinary numpy ufuncs; everything heavier in
this package is built on top of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivisionByZero

# |q| at or below this cutoff is treated as zero when inverting.
INV_EPS = 1e-300

_CONJ_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


def qmul(a, b):
    """Hamilton product of component arrays shaped (..., 4), broadcasting."""
    a0, a1, a2, a3 = np.moveaxis(np.asarray(a, float), -1, 0)
    b0, b1, b2, b3 = np.moveaxis(np.asarray(b, float), -1, 0)
    # term order keeps the cancelling pairs of q * conj(q) adjacent, so its
    # imaginary components vanish exactly in floating point
    return np.stack(
        (
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 + a2 * b0 + a3 * b1 - a1 * b3,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
        ),
        axis=-1,
    )


def qconj(a):
    """Conjugate: negate the three imaginary components."""
    return np.asarray(a, float) * _CONJ_SIGNS


def qabs2(a):
    """Squared Euclidean magnitude; the trailing component axis is contracted."""
    a = np.asarray(a, float)
    return np.sum(a * a, axis=-1)


def qabs(a):
    """Euclidean magnitude; the trailing component axis is contracted."""
    return np.sqrt(qabs2(a))


@dataclass(frozen=True)
class Quaternion:
    """An element of the real quaternion algebra, all components finite."""

    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    def __post_init__(self):
        for name in ("x0", "x1", "x2", "x3"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"non-finite quaternion component {name}={value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        x0, x1, x2, x3 = np.asarray(arr, float).reshape(4)
        return cls(x0, x1, x2, x3)

    def to_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3])

    def to_list(self) -> list:
        return [self.x0, self.x1, self.x2, self.x3]

    @property
    def imag_norm(self) -> float:
        return math.sqrt(self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3)

    def mul(self, other: "Quaternion") -> "Quaternion":
        a, b = self, other
        # same term order as qmul(): q * conj(q) cancels exactly
        return Quaternion(
            a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
            a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
            a.x0 * b.x2 + a.x2 * b.x0 + a.x3 * b.x1 - a.x1 * b.x3,
            a.x0 * b.x3 + a.x3 * b.x0 + a.x1 * b.x2 - a.x2 * b.x1,
        )

    def conj(self) -> "Quaternion":
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def inv(self, eps: float = INV_EPS) -> "Quaternion":
        n2 = self.x0**2 + self.x1**2 + self.x2**2 + self.x3**2
        if math.sqrt(n2) <= eps:
            raise DivisionByZero(f"cannot invert quaternion of magnitude {math.sqrt(n2)!r}")
        return Quaternion(self.x0 / n2, -self.x1 / n2, -self.x2 / n2, -self.x3 / n2)

    def __abs__(self) -> float:
        return math.sqrt(self.x0**2 + self.x1**2 + self.x2**2 + self.x3**2)

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.x0 + other.x0, self.x1 + other.x1,
                          self.x2 + other.x2, self.x3 + other.x3)

    def __sub__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.x0 - other.x0, self.x1 - other.x1,
                          self.x2 - other.x2, self.x3 - other.x3)

    def __neg__(self):
        return Quaternion(-self.x0, -self.x1, -self.x2, -self.x3)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return self.mul(other)
        if isinstance(other, (int, float)):
            s = float(other)
            return Quaternion(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
        return NotImplemented

    def __rmul__(self, other):
        # reals commute with everything, so real * q == q * real
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return NotImplemented


ZERO = Quaternion()
ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
