"""Quaternion arithmetic and the Cayley-Dickson doubling form.

A quaternion ``p = x + yi + zj + uk`` is stored as four doubles.  The doubling
form writes the same number as ``p = a + b*j`` with complex ``a = x + yi`` and
``b = z + ui``; complex constituents use Python's built-in ``complex``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .errors import DomainError

Real = Union[int, float]


@dataclass(frozen=True, slots=True)
class Quaternion:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    u: float = 0.0

    @classmethod
    def real(cls, value: Real) -> "Quaternion":
        return cls(float(value), 0.0, 0.0, 0.0)

    @classmethod
    def from_complex(cls, value: complex) -> "Quaternion":
        return cls(value.real, value.imag, 0.0, 0.0)

    @classmethod
    def from_doubling(cls, a: complex, b: complex) -> "Quaternion":
        return cls(a.real, a.imag, b.real, b.imag)

    @property
    def a(self) -> complex:
        return complex(self.x, self.y)

    @property
    def b(self) -> complex:
        return complex(self.z, self.u)

    def components(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.z, self.u)

    def to_doubling(self) -> "DoublingForm":
        return DoublingForm(self.a, self.b)

    def __add__(self, other: Union["Quaternion", Real]) -> "Quaternion":
        if isinstance(other, Quaternion):
            return Quaternion(self.x + other.x, self.y + other.y, self.z + other.z, self.u + other.u)
        if isinstance(other, (int, float)):
            return Quaternion(self.x + other, self.y, self.z, self.u)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: Union["Quaternion", Real]) -> "Quaternion":
        if isinstance(other, Quaternion):
            return Quaternion(self.x - other.x, self.y - other.y, self.z - other.z, self.u - other.u)
        if isinstance(other, (int, float)):
            return Quaternion(self.x - other, self.y, self.z, self.u)
        return NotImplemented

    def __rsub__(self, other: Real) -> "Quaternion":
        return (-self) + other

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.x, -self.y, -self.z, -self.u)

    def __mul__(self, other: Union["Quaternion", Real]) -> "Quaternion":
        if isinstance(other, Quaternion):
            return hamilton_mul(self, other)
        if isinstance(other, (int, float)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: Real) -> "Quaternion":
        if isinstance(other, (int, float)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: float) -> "Quaternion":
        return Quaternion(c * self.x, c * self.y, c * self.z, c * self.u)

    def conj(self) -> "Quaternion":
        return conj(self)

    def norm(self) -> float:
        return norm(self)

    def inverse(self) -> "Quaternion":
        return inverse(self)

    def vector_norm(self) -> float:
        return math.hypot(self.y, self.z, self.u)

    def __abs__(self) -> float:
        return norm(self)

    def __str__(self) -> str:
        return f"({self.x!r}, {self.y!r}, {self.z!r}, {self.u!r})"


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True, slots=True)
class DoublingForm:
    """``a + b*j`` with complex ``a`` and ``b``."""

    a: complex
    b: complex

    def to_quaternion(self) -> Quaternion:
        return Quaternion.from_doubling(self.a, self.b)

    def conj(self) -> "DoublingForm":
        # conj(a + b j) = conj(a) - b j
        return DoublingForm(self.a.conjugate(), -self.b)


@dataclass(frozen=True, slots=True)
class PolarForm:
    """``p = x + v*r`` with ``r`` a pure unit quaternion.

    ``r`` is ``None`` on the real axis (``v == 0``), where no direction exists.
    """

    x: float
    v: float
    r: Optional[Quaternion]
    theta: float

    @property
    def on_real_axis(self) -> bool:
        return self.r is None


def hamilton_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product with ``ij = k``, ``jk = i``, ``ki = j``.

    Each component is summed as two pairs; the grouping matches the pairs that
    complex multiplication forms in the doubling-form product.
    """
    x1, y1, z1, u1 = p.x, p.y, p.z, p.u
    x2, y2, z2, u2 = q.x, q.y, q.z, q.u
    return Quaternion(
        (x1 * x2 - y1 * y2) - (z1 * z2 + u1 * u2),
        (x1 * y2 + y1 * x2) - (u1 * z2 - z1 * u2),
        (z1 * x2 + u1 * y2) + (x1 * z2 - y1 * u2),
        (u1 * x2 - z1 * y2) + (x1 * u2 + y1 * z2),
    )


def doubling_mul(f: DoublingForm, g: DoublingForm) -> DoublingForm:
    """Product of two doubling forms.

    ``(f1 + f2 j)(g1 + g2 j) = (f1 g1 - f2 conj(g2)) + (f2 conj(g1) + f1 g2) j``,
    which follows from ``j * alpha = conj(alpha) * j`` for complex alpha.
    """
    f1, f2 = f.a, f.b
    g1, g2 = g.a, g.b
    return DoublingForm(f1 * g1 - f2 * g2.conjugate(), f2 * g1.conjugate() + f1 * g2)


def conj(p: Quaternion) -> Quaternion:
    return Quaternion(p.x, -p.y, -p.z, -p.u)


def norm(p: Quaternion) -> float:
    return math.hypot(p.x, p.y, p.z, p.u)


def norm_sq(p: Quaternion) -> float:
    return p.x * p.x + p.y * p.y + p.z * p.z + p.u * p.u


def inverse(p: Quaternion) -> Quaternion:
    """``conj(p) / |p|^2``."""
    s = max(abs(c) for c in p.components())
    if s == 0.0:
        raise DomainError("inverse of the zero quaternion")
    n2 = norm_sq(p)
    if not (1e-290 < n2 < math.inf):
        # |p|^2 under- or overflowed: invert p / s, then divide by s again
        q = Quaternion(p.x / s, p.y / s, p.z / s, p.u / s)
        m2 = norm_sq(q)
        return Quaternion(q.x / m2 / s, -q.y / m2 / s, -q.z / m2 / s, -q.u / m2 / s)
    return Quaternion(p.x / n2, -p.y / n2, -p.z / n2, -p.u / n2)


def to_polar(p: Quaternion) -> PolarForm:
    v = p.vector_norm()
    theta = math.atan2(v, p.x) if (v > 0.0 or p.x != 0.0) else 0.0
    if v == 0.0:
        # real axis: the argument is 0 for x >= 0 and pi for x < 0
        return PolarForm(p.x, 0.0, None, theta)
    if v > 1e-290:
        r = Quaternion(0.0, p.y / v, p.z / v, p.u / v)
    else:
        # v has too few significant bits; normalize a rescaled copy instead
        m = max(abs(p.y), abs(p.z), abs(p.u))
        y, z, u = p.y / m, p.z / m, p.u / m
        n = math.sqrt(y * y + z * z + u * u)
        r = Quaternion(0.0, y / n, z / n, u / n)
    return PolarForm(p.x, v, r, theta)


def from_polar(f: PolarForm) -> Quaternion:
    if f.r is None:
        return Quaternion(f.x, 0.0, 0.0, 0.0)
    return Quaternion(f.x, f.v * f.r.y, f.v * f.r.z, f.v * f.r.u)


def distance(p: Quaternion, q: Quaternion) -> float:
    return norm(p - q)
