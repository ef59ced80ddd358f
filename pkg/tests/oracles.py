"""Reference implementations used as test oracles.

None of these import from ``holoq`` beyond the value type; they are written
from the textbook definitions so a shared bug cannot hide.
"""

from __future__ import annotations

import cmath
import random
from fractions import Fraction

import numpy as np

from holoq.expr import (
    UNARY_BUILTINS,
    Add,
    Neg,
    PowInt,
    QFunction,
    QuatConst,
    RealConst,
    Recip,
    Var,
    raw_product,
)
from holoq.quaternion import I, J, K, Quaternion


def left_matrix(p) -> np.ndarray:
    """Matrix of ``q -> p q`` acting on ``(x, y, z, u)``, from i^2 = j^2 = k^2 = ijk = -1."""
    x, y, z, u = p
    return np.array(
        [
            [x, -y, -z, -u],
            [y, x, -u, z],
            [z, u, x, -y],
            [u, -z, y, x],
        ],
        dtype=object if isinstance(x, Fraction) else float,
    )


def exact_product(p, q) -> tuple[Fraction, ...]:
    """Hamilton product over rationals (no rounding at all)."""
    pf = [Fraction(c) for c in p]
    qf = [Fraction(c) for c in q]
    return tuple(left_matrix(pf).dot(np.array(qf, dtype=object)))


def matrix_product(p: Quaternion, q: Quaternion) -> Quaternion:
    return Quaternion(*(float(c) for c in left_matrix(p.components()) @ np.array(q.components())))


# standard complex analogues of the catalog functions
COMPLEX_REFERENCE = {
    "p^2": lambda z: z * z,
    "p^3": lambda z: z * z * z,
    "exp": cmath.exp,
    "ln": cmath.log,
    "p^-1": lambda z: 1 / z,
    "sin": cmath.sin,
    "cos": cmath.cos,
}

UNITS = (I, J, K)


def random_parser_tree(rng: random.Random, depth: int = 6, raw: bool = True) -> QFunction:
    """A random tree of the shape the parser produces, at most ``depth`` levels deep."""
    if depth <= 1 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.45:
            return Var()
        if roll < 0.8 or not raw:
            return RealConst(rng.choice([0.0, 1.0, 2.0, 3.0, 0.5, 1e-3, 2.5e7, rng.uniform(0, 100)]))
        return QuatConst(rng.choice(UNITS))
    sub = lambda: random_parser_tree(rng, depth - 1, raw)  # noqa: E731
    kind = rng.randrange(8)
    if kind == 0:
        return Add(sub(), sub())
    if kind == 1:
        return Add(sub(), Neg(sub()))
    if kind == 2:
        return Neg(sub())
    if kind == 3:
        return raw_product(sub(), sub())
    if kind == 4:
        return raw_product(sub(), Recip(sub()))
    if kind == 5:
        return PowInt(sub(), rng.randint(-5, 5))
    name = rng.choice(sorted(UNARY_BUILTINS))
    return UNARY_BUILTINS[name](sub())
