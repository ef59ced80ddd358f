"""Expression trees for functions of one quaternion variable ``p``.

Catalog builtins (exp, ln, sin, cos) are built from their complex analogues by
writing ``p = x + v*r`` with ``v = |vector part|`` and ``r`` the unit vector
part, then substituting ``xi = x + v*i`` and ``i -> r`` into the complex
formula.  The result always has the form ``A + B*r``, so every catalog tree
maps ``p`` into the complex slice spanned by ``1`` and ``r``.

Raw-mode trees may also contain quaternion constants (:class:`QuatConst`) and
side-tagged products; those are kept for demonstrating non-commutative
arithmetic and are refused by anything that relies on holomorphy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import BranchCutError, DomainError, UnsupportedNode
from .quaternion import Quaternion, hamilton_mul, inverse, norm, to_polar

# below this |vector part| the sinc-type kernels use their Taylor series
SERIES_CUTOFF = 1e-4


def sinc(v: float) -> float:
    """``sin(v)/v`` with the removable singularity filled in."""
    if v < SERIES_CUTOFF:
        v2 = v * v
        # 6 terms of sum (-1)^n v^(2n) / (2n+1)!
        return 1.0 - v2 / 6.0 * (1.0 - v2 / 20.0 * (1.0 - v2 / 42.0 * (1.0 - v2 / 72.0 * (1.0 - v2 / 110.0))))
    return math.sin(v) / v


def sinhc(v: float) -> float:
    """``sinh(v)/v`` with the removable singularity filled in."""
    if v < SERIES_CUTOFF:
        v2 = v * v
        return 1.0 + v2 / 6.0 * (1.0 + v2 / 20.0 * (1.0 + v2 / 42.0 * (1.0 + v2 / 72.0 * (1.0 + v2 / 110.0))))
    return math.sinh(v) / v


def _lift(p: Quaternion, scalar: float, coef: float) -> Quaternion:
    # scalar + B*r with B*r = coef * (y, z, u), i.e. coef = B / v
    return Quaternion(scalar, coef * p.y, coef * p.z, coef * p.u)


def q_exp(p: Quaternion) -> Quaternion:
    """``e^x (cos v + r sin v)``."""
    v = p.vector_norm()
    ex = math.exp(p.x)
    return _lift(p, ex * math.cos(v), ex * sinc(v))


def q_ln(p: Quaternion) -> Quaternion:
    """Principal logarithm ``ln|p| + r*theta`` with ``theta`` in ``[0, pi)``.

    ``theta`` is the angle whose cosine is ``x/|p|``.  The closed negative
    real axis (``v == 0``, ``x <= 0``) is excluded.
    """
    v = p.vector_norm()
    if v == 0.0:
        if p.x == 0.0:
            raise DomainError("ln is singular at p = 0")
        if p.x < 0.0:
            raise BranchCutError(f"ln is cut along the negative real axis (p = {p.x!r})")
        return Quaternion(math.log(p.x), 0.0, 0.0, 0.0)
    # theta / v overflows for tiny v, so scale the unit direction instead
    polar = to_polar(p)
    return Quaternion(math.log(norm(p)), 0.0, 0.0, 0.0) + polar.r.scale(polar.theta)


def q_sin(p: Quaternion) -> Quaternion:
    """``sin x cosh v + r cos x sinh v``."""
    v = p.vector_norm()
    return _lift(p, math.sin(p.x) * math.cosh(v), math.cos(p.x) * sinhc(v))


def q_cos(p: Quaternion) -> Quaternion:
    """``cos x cosh v - r sin x sinh v``."""
    v = p.vector_norm()
    return _lift(p, math.cos(p.x) * math.cosh(v), -math.sin(p.x) * sinhc(v))


def q_recip(p: Quaternion) -> Quaternion:
    try:
        r = inverse(p)
    except DomainError:
        raise DomainError("reciprocal is singular at p = 0") from None
    if not all(math.isfinite(c) for c in r.components()):
        raise DomainError(f"reciprocal overflows at p = {p}")
    return r


def q_powi(p: Quaternion, n: int) -> Quaternion:
    if n < 0:
        return q_powi(q_recip(p), -n)
    result = Quaternion(1.0, 0.0, 0.0, 0.0)
    base = p
    while n:
        if n & 1:
            result = hamilton_mul(result, base)
        n >>= 1
        if n:
            base = hamilton_mul(base, base)
    return result


@dataclass(frozen=True, slots=True)
class EvalResult:
    """A function value together with its doubling-form split ``phi1 + phi2*j``."""

    value: Quaternion
    phi1: complex
    phi2: complex

    @classmethod
    def of(cls, value: Quaternion) -> "EvalResult":
        return cls(value, value.a, value.b)


class QFunction:
    """Base class of expression-tree nodes.  Nodes are immutable."""

    __slots__ = ()

    def children(self) -> tuple["QFunction", ...]:
        return ()

    def walk(self) -> Iterator["QFunction"]:
        yield self
        for c in self.children():
            yield from c.walk()

    def value_at(self, p: Quaternion) -> Quaternion:
        raise NotImplementedError

    def __call__(self, p: Quaternion) -> EvalResult:
        return evaluate(self, p)


@dataclass(frozen=True, slots=True)
class Var(QFunction):
    def value_at(self, p):
        return p


@dataclass(frozen=True, slots=True)
class RealConst(QFunction):
    c: float

    def value_at(self, p):
        return Quaternion(self.c, 0.0, 0.0, 0.0)


@dataclass(frozen=True, slots=True)
class QuatConst(QFunction):
    """Quaternion constant; raw mode only."""

    q: Quaternion

    def value_at(self, p):
        return self.q


@dataclass(frozen=True, slots=True)
class Add(QFunction):
    left: QFunction
    right: QFunction

    def children(self):
        return (self.left, self.right)

    def value_at(self, p):
        return self.left.value_at(p) + self.right.value_at(p)


@dataclass(frozen=True, slots=True)
class Sub(QFunction):
    left: QFunction
    right: QFunction

    def children(self):
        return (self.left, self.right)

    def value_at(self, p):
        return self.left.value_at(p) - self.right.value_at(p)


@dataclass(frozen=True, slots=True)
class Neg(QFunction):
    arg: QFunction

    def children(self):
        return (self.arg,)

    def value_at(self, p):
        return -self.arg.value_at(p)


@dataclass(frozen=True, slots=True)
class Mul(QFunction):
    """Ordered product ``left * right``.

    ``side`` is ``None`` for catalog products.  In raw mode it records which
    operand is a quaternion constant: ``"left"`` for ``q * f`` and ``"right"``
    for ``f * q``.
    """

    left: QFunction
    right: QFunction
    side: Optional[str] = None

    def children(self):
        return (self.left, self.right)

    def value_at(self, p):
        return hamilton_mul(self.left.value_at(p), self.right.value_at(p))


@dataclass(frozen=True, slots=True)
class PowInt(QFunction):
    base: QFunction
    n: int

    def children(self):
        return (self.base,)

    def value_at(self, p):
        return q_powi(self.base.value_at(p), self.n)


@dataclass(frozen=True, slots=True)
class Recip(QFunction):
    arg: QFunction

    def children(self):
        return (self.arg,)

    def value_at(self, p):
        return q_recip(self.arg.value_at(p))


@dataclass(frozen=True, slots=True)
class Exp(QFunction):
    arg: QFunction

    def children(self):
        return (self.arg,)

    def value_at(self, p):
        return q_exp(self.arg.value_at(p))


@dataclass(frozen=True, slots=True)
class Ln(QFunction):
    arg: QFunction

    def children(self):
        return (self.arg,)

    def value_at(self, p):
        return q_ln(self.arg.value_at(p))


@dataclass(frozen=True, slots=True)
class Sin(QFunction):
    arg: QFunction

    def children(self):
        return (self.arg,)

    def value_at(self, p):
        return q_sin(self.arg.value_at(p))


@dataclass(frozen=True, slots=True)
class Cos(QFunction):
    arg: QFunction

    def children(self):
        return (self.arg,)

    def value_at(self, p):
        return q_cos(self.arg.value_at(p))


UNARY_BUILTINS: dict[str, type] = {
    "exp": Exp,
    "ln": Ln,
    "sin": Sin,
    "cos": Cos,
    "recip": Recip,
}
BUILTIN_NAMES: dict[type, str] = {cls: name for name, cls in UNARY_BUILTINS.items()}

P = Var()


def evaluate(f: QFunction, p: Quaternion) -> EvalResult:
    """Evaluate ``f`` at ``p`` and split the value into ``phi1 + phi2*j``.

    Raises :class:`DomainError` (or :class:`BranchCutError`) on the singular set.
    """
    return EvalResult.of(f.value_at(p))


def is_catalog_holomorphic(f: QFunction) -> bool:
    for node in f.walk():
        if isinstance(node, QuatConst):
            return False
        if isinstance(node, Mul) and node.side is not None:
            return False
    return True


def require_catalog(f: QFunction) -> None:
    if not is_catalog_holomorphic(f):
        raise UnsupportedNode("expression contains quaternion constants or side-tagged products (raw mode)")


# Builtin constructors ------------------------------------------------------


def builtin_exp() -> QFunction:
    return Exp(P)


def builtin_ln() -> QFunction:
    return Ln(P)


def builtin_powi(n: int) -> QFunction:
    return PowInt(P, int(n))


def builtin_recip() -> QFunction:
    return Recip(P)


def builtin_sin() -> QFunction:
    return Sin(P)


def builtin_cos() -> QFunction:
    return Cos(P)


def polynomial(coefficients: list[float]) -> QFunction:
    """Real-coefficient polynomial ``c0 + c1 p + c2 p^2 + ...``."""
    terms: QFunction = RealConst(0.0)
    for n, c in enumerate(coefficients):
        if c == 0:
            continue
        term = RealConst(float(c)) if n == 0 else mul(RealConst(float(c)), powi(P, n))
        terms = add(terms, term)
    return terms


def raw_conj() -> QFunction:
    """Quaternion conjugation as a raw tree: ``-(p + i p i + j p j + k p k) / 2``."""
    from .quaternion import I, J, K

    def sandwich(q: Quaternion) -> QFunction:
        c = QuatConst(q)
        return Mul(Mul(c, P, "left"), c, "right")

    body = Add(Add(Add(P, sandwich(I)), sandwich(J)), sandwich(K))
    return Mul(Neg(RealConst(0.5)), body)


def raw_product(left: QFunction, right: QFunction) -> Mul:
    """Ordered product carrying the raw side tag when a constant operand is present."""
    side = None
    if isinstance(left, QuatConst):
        side = "left"
    elif isinstance(right, QuatConst):
        side = "right"
    return Mul(left, right, side)


# Light-weight smart constructors used by differentiation ---------------------


def _const(f: QFunction) -> Optional[float]:
    return f.c if isinstance(f, RealConst) else None


def add(a: QFunction, b: QFunction) -> QFunction:
    ca, cb = _const(a), _const(b)
    if ca is not None and cb is not None:
        return RealConst(ca + cb)
    if ca == 0:
        return b
    if cb == 0:
        return a
    return Add(a, b)


def sub(a: QFunction, b: QFunction) -> QFunction:
    ca, cb = _const(a), _const(b)
    if ca is not None and cb is not None:
        return RealConst(ca - cb)
    if cb == 0:
        return a
    if ca == 0:
        return neg(b)
    return Add(a, neg(b))


def neg(a: QFunction) -> QFunction:
    ca = _const(a)
    if ca is not None:
        return RealConst(-ca)
    if isinstance(a, Neg):
        return a.arg
    if isinstance(a, Mul) and _const(a.left) is not None:
        return mul(RealConst(-a.left.c), a.right)
    return Neg(a)


def mul(a: QFunction, b: QFunction) -> QFunction:
    """Catalog product with real-constant folding.  Real constants commute, so they move left."""
    ca, cb = _const(a), _const(b)
    if ca is not None and cb is not None:
        return RealConst(ca * cb)
    if cb is not None:
        a, b, ca, cb = b, a, cb, ca
    if ca is not None:
        if ca == 0:
            return RealConst(0.0)
        if ca == 1:
            return b
        if isinstance(b, Neg):
            return mul(RealConst(-ca), b.arg)
        if isinstance(b, Mul) and b.side is None and _const(b.left) is not None:
            return mul(RealConst(ca * b.left.c), b.right)
        return Mul(RealConst(ca), b)
    if isinstance(b, Mul) and b.side is None and _const(b.left) is not None:
        # x * (c * y) -> c * (x * y)
        return mul(b.left, mul(a, b.right))
    return Mul(a, b)


def powi(a: QFunction, n: int) -> QFunction:
    if n == 0:
        return RealConst(1.0)
    if n == 1:
        return a
    ca = _const(a)
    if ca is not None and (ca != 0 or n > 0):
        return RealConst(float(ca) ** n)
    if isinstance(a, PowInt):
        return powi(a.base, a.n * n)
    return PowInt(a, n)


# Differentiation ------------------------------------------------------------


def substitute(f: QFunction, inner: QFunction) -> QFunction:
    """Composition ``f(inner(p))``: every occurrence of ``p`` in ``f`` is replaced by ``inner``."""
    if isinstance(f, Var):
        return inner
    if isinstance(f, (RealConst, QuatConst)):
        return f
    if isinstance(f, (Add, Sub)):
        return type(f)(substitute(f.left, inner), substitute(f.right, inner))
    if isinstance(f, Mul):
        return Mul(substitute(f.left, inner), substitute(f.right, inner), f.side)
    if isinstance(f, PowInt):
        return PowInt(substitute(f.base, inner), f.n)
    if isinstance(f, Neg):
        return Neg(substitute(f.arg, inner))
    if isinstance(f, tuple(UNARY_BUILTINS.values())):
        return type(f)(substitute(f.arg, inner))
    raise UnsupportedNode(f"cannot substitute into {type(f).__name__}")


def _d(f: QFunction) -> QFunction:
    if isinstance(f, Var):
        return RealConst(1.0)
    if isinstance(f, RealConst):
        return RealConst(0.0)
    if isinstance(f, QuatConst):
        raise UnsupportedNode("quaternion constants are raw-mode only")
    if isinstance(f, Add):
        return add(_d(f.left), _d(f.right))
    if isinstance(f, Sub):
        return sub(_d(f.left), _d(f.right))
    if isinstance(f, Neg):
        return neg(_d(f.arg))
    if isinstance(f, Mul):
        if f.side is not None:
            raise UnsupportedNode("side-tagged products are raw-mode only")
        return add(mul(_d(f.left), f.right), mul(f.left, _d(f.right)))
    if isinstance(f, PowInt):
        if f.n == 0:
            return RealConst(0.0)
        return mul(mul(RealConst(float(f.n)), powi(f.base, f.n - 1)), _d(f.base))
    inner = _d(f.arg)
    if isinstance(f, Exp):
        outer = f
    elif isinstance(f, Ln):
        outer = Recip(f.arg)
    elif isinstance(f, Sin):
        outer = Cos(f.arg)
    elif isinstance(f, Cos):
        outer = neg(Sin(f.arg))
    elif isinstance(f, Recip):
        outer = neg(powi(f.arg, -2))
    else:
        raise UnsupportedNode(f"no derivative rule for {type(f).__name__}")
    return mul(outer, inner)


def analytic_derivative(f: QFunction, order: int = 1) -> QFunction:
    """Full derivative of a catalog tree, using the complex differentiation table.

    Sum, product (``f'g + fg'``) and chain rules are applied structurally;
    the result is again a catalog tree.
    """
    require_catalog(f)
    for _ in range(order):
        f = _d(f)
    return f


def restrict_to_complex(f: QFunction, xi: complex) -> complex:
    """Evaluate ``f`` on the complex plane ``z = u = 0`` and return ``phi1``."""
    require_catalog(f)
    r = evaluate(f, Quaternion.from_complex(complex(xi)))
    if r.phi2 != 0:
        raise AssertionError(f"catalog function left the complex plane: phi2 = {r.phi2!r}")
    return r.phi1


# the seven functions used by the pairwise property checks
CATALOG: dict[str, QFunction] = {
    "p^2": PowInt(P, 2),
    "p^3": PowInt(P, 3),
    "exp": Exp(P),
    "ln": Ln(P),
    "p^-1": PowInt(P, -1),
    "sin": Sin(P),
    "cos": Cos(P),
}
