"""Pointwise checks of the algebraic behaviour of catalog functions.

All checks compare function values at sample points; none of them inspects
expression trees.  Points where a function is singular are skipped and
counted.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import DomainError, StencilError
from .expr import (
    QFunction,
    add,
    analytic_derivative,
    evaluate,
    mul,
    require_catalog,
    substitute,
)
from .quaternion import Quaternion, hamilton_mul, inverse
from .wirtinger import DEFAULT_STEP, full_derivative_numeric, sample_points


@dataclass
class PropertyReport:
    name: str
    points: list[Quaternion]
    max_abs_deviation: float
    tolerance: float
    passed: bool
    num_skipped: int = 0


@dataclass
class StructureReport:
    """Per-point deviations from the representation forms of the constituents.

    ``realness`` is ``|Im(phi2 conj(b))| / (|phi2| |b|)``; ``phi1_rotation``
    and ``ratio_rotation`` measure how much ``phi1`` and ``phi2 / b`` change
    when ``b`` is rotated by a unit complex phase.
    """

    points: list[Quaternion]
    realness: list[float]
    phi1_rotation: list[float]
    ratio_rotation: list[float]
    tolerance: float
    num_skipped: int = 0
    max_realness: float = field(init=False)
    max_phi1_rotation: float = field(init=False)
    max_ratio_rotation: float = field(init=False)

    def __post_init__(self):
        self.max_realness = max(self.realness, default=math.nan)
        self.max_phi1_rotation = max(self.phi1_rotation, default=math.nan)
        self.max_ratio_rotation = max(self.ratio_rotation, default=math.nan)

    @property
    def passed(self) -> bool:
        if not self.points:
            return False
        return max(self.max_realness, self.max_phi1_rotation, self.max_ratio_rotation) <= self.tolerance


def default_points(n: int = 50, seed: int = 0) -> list[Quaternion]:
    """Seeded 4D points in ``[-2, 2]^4`` away from 0, the real axis and the log cut."""
    return sample_points(n, seed, min_abs_p=0.1, min_abs_b=0.05, branch_margin=0.1)


def _pointwise(
    name: str,
    deviation: Callable[[Quaternion], float],
    points: Iterable[Quaternion],
    tol: float,
) -> PropertyReport:
    used, worst, skipped = [], 0.0, 0
    for p in points:
        try:
            d = deviation(p)
        except (DomainError, StencilError, ZeroDivisionError, OverflowError):
            skipped += 1
            continue
        if not math.isfinite(d):
            skipped += 1
            continue
        used.append(p)
        worst = max(worst, d)
    if not used:
        worst = math.nan
    return PropertyReport(name, used, worst, tol, bool(used) and worst <= tol, skipped)


def check_commutativity(f: QFunction, g: QFunction, points, tol: float = 1e-10) -> PropertyReport:
    """Max over points of ``|f g - g f| / (1 + |f||g|)``."""
    require_catalog(f)
    require_catalog(g)

    def dev(p):
        fv, gv = f.value_at(p), g.value_at(p)
        return abs(hamilton_mul(fv, gv) - hamilton_mul(gv, fv)) / (1.0 + abs(fv) * abs(gv))

    return _pointwise("commute", dev, points, tol)


def check_quotient_equality(f: QFunction, g: QFunction, points, tol: float = 1e-10) -> PropertyReport:
    """Left quotient ``g^-1 f`` against right quotient ``f g^-1``."""
    require_catalog(f)
    require_catalog(g)

    def dev(p):
        fv = f.value_at(p)
        gi = inverse(g.value_at(p))
        left, right = hamilton_mul(gi, fv), hamilton_mul(fv, gi)
        return abs(left - right) / (1.0 + abs(fv) * abs(gi))

    return _pointwise("quotient", dev, points, tol)


def check_structure_forms(
    f: QFunction,
    points,
    tol: float = 1e-9,
    seed: int = 0,
    angles_per_point: int = 8,
    min_abs_b: float = 1e-8,
) -> StructureReport:
    """Test that ``phi1`` and ``phi2 / b`` depend on ``b`` only through ``|b|``, and that ``phi2 / b`` is real."""
    require_catalog(f)
    rng = np.random.default_rng(seed)
    used, real_dev, rot1, rot2, skipped = [], [], [], [], 0
    for p in points:
        phis = rng.uniform(0.0, 2.0 * math.pi, angles_per_point)
        b = p.b
        if abs(b) < min_abs_b:
            skipped += 1
            continue
        try:
            base = evaluate(f, p)
            rotated = [evaluate(f, Quaternion.from_doubling(p.a, b * cmath.exp(1j * phi))) for phi in phis]
        except DomainError:
            skipped += 1
            continue
        phi1, phi2 = base.phi1, base.phi2
        denom = abs(phi2) * abs(b)
        real_dev.append(abs((phi2 * b.conjugate()).imag) / denom if denom > 0 else 0.0)
        ratio = phi2 / b
        d1 = d2 = 0.0
        for phi, r in zip(phis, rotated):
            b_rot = b * cmath.exp(1j * phi)
            d1 = max(d1, abs(phi1 - r.phi1) / (1.0 + abs(phi1)))
            d2 = max(d2, abs(ratio - r.phi2 / b_rot))
        rot1.append(d1)
        rot2.append(d2)
        used.append(p)
    return StructureReport(used, real_dev, rot1, rot2, tol, skipped)


def check_derivative_rules(
    f: QFunction,
    g: QFunction,
    points,
    tol: float = 1e-6,
    h: float = DEFAULT_STEP,
    rules: Optional[Iterable[str]] = None,
) -> dict[str, PropertyReport]:
    """Compare numeric full derivatives of ``f+g``, ``f*g`` and ``f(g)`` with hand-built rule trees.

    The rule trees are ``f' + g'``, ``f' g + f g'`` and ``f'(g) g'``; each
    deviation is normalized by ``1 + |value|``.
    """
    require_catalog(f)
    require_catalog(g)
    points = list(points)
    df, dg = analytic_derivative(f), analytic_derivative(g)
    cases = {
        "sum": (add(f, g), add(df, dg)),
        "product": (mul(f, g), add(mul(df, g), mul(f, dg))),
        "chain": (substitute(f, g), mul(substitute(df, g), dg)),
    }
    selected = list(rules) if rules is not None else list(cases)
    out = {}
    for name in selected:
        combined, rule = cases[name]

        def dev(p, combined=combined, rule=rule):
            expected = rule.value_at(p)
            numeric = full_derivative_numeric(combined, p, 1, h)
            return abs(numeric - expected) / (1.0 + abs(expected))

        out[name] = _pointwise(f"rule:{name}", dev, points, tol)
    return out
