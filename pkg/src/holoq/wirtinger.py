"""Numeric Wirtinger partials and the quaternionic Cauchy-Riemann check.

The partials with respect to ``a, conj(a), b, conj(b)`` are realized as
Wirtinger operators on the real coordinates::

    d_a    = (d_x - i d_y) / 2      d_abar = (d_x + i d_y) / 2
    d_b    = (d_z - i d_u) / 2      d_bbar = (d_z + i d_u) / 2

each approximated by second-order central differences.  The partials of the
conjugated constituents never need their own stencil because
``d_bbar conj(F) = conj(d_b F)`` for any complex-valued ``F``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, PreconditionError, StencilError, UnsupportedOrder
from .expr import QFunction, analytic_derivative, is_catalog_holomorphic, require_catalog
from .quaternion import Quaternion

DEFAULT_STEP = 1e-5
DEFAULT_TOL = 1e-6

_AXES = (
    Quaternion(1.0, 0.0, 0.0, 0.0),
    Quaternion(0.0, 1.0, 0.0, 0.0),
    Quaternion(0.0, 0.0, 1.0, 0.0),
    Quaternion(0.0, 0.0, 0.0, 1.0),
)


def scaled_step(h: float, p: Quaternion) -> float:
    """Absolute step for base step ``h`` at ``p``: ``h * max(1, |p|)``."""
    if not h > 0:
        raise PreconditionError(f"step must be positive, got {h!r}")
    return h * max(1.0, abs(p))


@dataclass(frozen=True)
class WirtingerJet:
    point: Quaternion
    phi1: complex
    phi2: complex
    d_a_phi1: complex
    d_abar_phi1: complex
    d_b_phi1: complex
    d_bbar_phi1: complex
    d_a_phi2: complex
    d_abar_phi2: complex
    d_b_phi2: complex
    d_bbar_phi2: complex
    step_h: float

    def partials(self) -> tuple[complex, ...]:
        return (
            self.d_a_phi1, self.d_abar_phi1, self.d_b_phi1, self.d_bbar_phi1,
            self.d_a_phi2, self.d_abar_phi2, self.d_b_phi2, self.d_bbar_phi2,
        )

    @property
    def d_bbar_conj_phi1(self) -> complex:
        return self.d_b_phi1.conjugate()

    @property
    def d_bbar_conj_phi2(self) -> complex:
        return self.d_b_phi2.conjugate()


def _value(f: QFunction, p: Quaternion) -> Quaternion:
    try:
        return f.value_at(p)
    except (DomainError, ZeroDivisionError, OverflowError) as exc:
        raise StencilError(f"stencil point {p} is singular: {exc}") from exc


def _axis_derivatives(f: QFunction, p: Quaternion, h: float) -> list[Quaternion]:
    out = []
    for e in _AXES:
        plus = _value(f, p + e.scale(h))
        minus = _value(f, p - e.scale(h))
        out.append((plus - minus).scale(0.5 / h))
    return out


def _jet_from_axes(point, center, axes, h) -> WirtingerJet:
    dx, dy, dz, du = axes
    # complex partials of phi1 = psi1 + psi2 i and phi2 = psi3 + psi4 i
    d1 = [q.a for q in (dx, dy, dz, du)]
    d2 = [q.b for q in (dx, dy, dz, du)]

    def wirt(d):
        return (
            0.5 * (d[0] - 1j * d[1]),
            0.5 * (d[0] + 1j * d[1]),
            0.5 * (d[2] - 1j * d[3]),
            0.5 * (d[2] + 1j * d[3]),
        )

    a1, ab1, b1, bb1 = wirt(d1)
    a2, ab2, b2, bb2 = wirt(d2)
    return WirtingerJet(point, center.a, center.b, a1, ab1, b1, bb1, a2, ab2, b2, bb2, h)


def wirtinger_jet(
    f: QFunction,
    p: Quaternion,
    h: float = DEFAULT_STEP,
    richardson: bool = False,
    scale_step: bool = True,
) -> WirtingerJet:
    """Constituents of ``f`` at ``p`` and their eight Wirtinger partials.

    ``h`` is scaled by ``max(1, |p|)`` unless ``scale_step`` is false.  With
    ``richardson`` one extrapolation level combines steps ``h`` and ``h/2``.
    Raises :class:`StencilError` if the center or any stencil point is singular.
    """
    step = scaled_step(h, p) if scale_step else h
    if not step > 0:
        raise PreconditionError(f"step must be positive, got {h!r}")
    center = _value(f, p)
    axes = _axis_derivatives(f, p, step)
    if richardson:
        fine = _axis_derivatives(f, p, step / 2)
        axes = [(g.scale(4.0) - c).scale(1.0 / 3.0) for g, c in zip(fine, axes)]
    return _jet_from_axes(p, center, axes, step)


@dataclass(frozen=True)
class CRResidual:
    """Absolute residuals of the four generalized Cauchy-Riemann equations at one point."""

    point: Quaternion
    eq1: float
    eq2: float
    eq3: float
    eq4: float
    scale: float
    sides: dict = field(default_factory=dict, compare=False)

    @property
    def max_abs(self) -> float:
        return max(self.eq1, self.eq2, self.eq3, self.eq4)

    @property
    def max_rel(self) -> float:
        return self.max_abs / self.scale


def cr_sides(jet: WirtingerJet) -> dict[str, tuple[complex, complex]]:
    """Left and right sides of each equation, in the order they are compared.

    1) d_a phi1 = d_bbar conj(phi2)     2) d_a phi2 = -d_bbar conj(phi1)
    3) d_a phi1 = d_b phi2              4) d_abar phi2 = -d_bbar phi1
    """
    return {
        "eq1": (jet.d_a_phi1, jet.d_bbar_conj_phi2),
        "eq2": (jet.d_a_phi2, -jet.d_bbar_conj_phi1),
        "eq3": (jet.d_a_phi1, jet.d_b_phi2),
        "eq4": (jet.d_abar_phi2, -jet.d_bbar_phi1),
    }


def cr_residuals(jet: WirtingerJet) -> CRResidual:
    """Evaluate the system on the 3D slice ``y = 0`` (where ``a = conj(a) = x``)."""
    if jet.point.y != 0.0:
        raise PreconditionError(f"residuals are defined on the y = 0 slice, got y = {jet.point.y!r}")
    sides = cr_sides(jet)
    res = {k: abs(lhs - rhs) for k, (lhs, rhs) in sides.items()}
    scale = max(1.0, max(abs(d) for d in jet.partials()))
    return CRResidual(jet.point, res["eq1"], res["eq2"], res["eq3"], res["eq4"], scale, sides)


@dataclass(frozen=True)
class Domain:
    """Sampling box on the ``y = 0`` slice with exclusion zones.

    ``x``, ``z``, ``u`` are ``(lo, hi)`` intervals.  A sample is rejected if
    ``|p| < min_abs_p``, ``|b| < min_abs_b`` or its distance to the closed
    negative real axis is below ``branch_margin``.
    """

    x: tuple[float, float] = (-2.0, 2.0)
    z: tuple[float, float] = (-2.0, 2.0)
    u: tuple[float, float] = (-2.0, 2.0)
    min_abs_p: float = 0.0
    min_abs_b: float = 0.0
    branch_margin: float = 0.0
    samples: int = 100
    seed: int = 0

    def admits(self, p: Quaternion) -> bool:
        return admissible(p, self.min_abs_p, self.min_abs_b, self.branch_margin)

    def points(self) -> list[Quaternion]:
        return sample_points(
            self.samples, self.seed, (self.x, (0.0, 0.0), self.z, self.u),
            self.min_abs_p, self.min_abs_b, self.branch_margin,
        )


def distance_to_negative_axis(p: Quaternion) -> float:
    if p.x <= 0.0:
        return p.vector_norm()
    return abs(p)


def admissible(p: Quaternion, min_abs_p=0.0, min_abs_b=0.0, branch_margin=0.0) -> bool:
    if abs(p) < min_abs_p:
        return False
    if abs(p.b) < min_abs_b:
        return False
    if branch_margin > 0.0 and distance_to_negative_axis(p) < branch_margin:
        return False
    return True


def sample_points(
    n: int,
    seed: int,
    box: Sequence[tuple[float, float]] = ((-2.0, 2.0),) * 4,
    min_abs_p: float = 0.0,
    min_abs_b: float = 0.0,
    branch_margin: float = 0.0,
    max_tries: int = 1000,
) -> list[Quaternion]:
    """``n`` seeded uniform points in a 4D box (a degenerate interval pins a coordinate).

    Points are drawn in blocks and filtered by the exclusion predicates, so the
    result depends only on the arguments.
    """
    if n < 1:
        raise PreconditionError("sample count must be at least 1")
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in box], dtype=float)
    hi = np.array([b[1] for b in box], dtype=float)
    out: list[Quaternion] = []
    for _ in range(max_tries):
        block = lo + (hi - lo) * rng.random((n, 4))
        for row in block:
            q = Quaternion(*(float(c) for c in row))
            if admissible(q, min_abs_p, min_abs_b, branch_margin):
                out.append(q)
                if len(out) == n:
                    return out
    raise PreconditionError("exclusion zones leave too little of the sampling box")


@dataclass
class HolomorphyReport:
    samples: list[CRResidual]
    max_rel_residual: float
    mean_rel_residual: float
    verdict: str
    tolerance: float
    num_skipped_singular: int
    max_per_equation: dict[str, float] = field(default_factory=dict)

    @property
    def holomorphic(self) -> bool:
        return self.verdict == "holomorphic"


def check_holomorphy(
    f: QFunction,
    dom: Domain,
    tol: float = DEFAULT_TOL,
    h: float = DEFAULT_STEP,
    richardson: bool = False,
) -> HolomorphyReport:
    """Evaluate the generalized Cauchy-Riemann system at every sample of ``dom``.

    The verdict is ``holomorphic`` when no sample exceeds ``tol`` in relative
    residual, ``violated`` otherwise and ``inconclusive`` if every sample was
    singular.
    """
    if not tol > 0:
        raise PreconditionError("tolerance must be positive")
    residuals: list[CRResidual] = []
    skipped = 0
    for p in dom.points():
        try:
            jet = wirtinger_jet(f, p, h, richardson=richardson)
        except StencilError:
            skipped += 1
            continue
        res = cr_residuals(jet)
        if not all(math.isfinite(r) for r in (res.eq1, res.eq2, res.eq3, res.eq4)):
            skipped += 1
            continue
        residuals.append(res)
    return _report(residuals, tol, skipped)


def _report(residuals: list[CRResidual], tol: float, skipped: int) -> HolomorphyReport:
    if not residuals:
        return HolomorphyReport([], math.nan, math.nan, "inconclusive", tol, skipped)
    rel = [r.max_rel for r in residuals]
    max_rel = max(rel)
    per_eq = {k: max(getattr(r, k) / r.scale for r in residuals) for k in ("eq1", "eq2", "eq3", "eq4")}
    verdict = "holomorphic" if max_rel <= tol else "violated"
    return HolomorphyReport(residuals, max_rel, math.fsum(rel) / len(rel), verdict, tol, skipped, per_eq)


# Full derivative -------------------------------------------------------------


def full_derivative_from_jet(jet: WirtingerJet) -> Quaternion:
    """``(d_a + d_abar) phi1 + ((d_a + d_abar) phi2) j``."""
    return Quaternion.from_doubling(jet.d_a_phi1 + jet.d_abar_phi1, jet.d_a_phi2 + jet.d_abar_phi2)


def _binomial_difference(f: QFunction, p: Quaternion, k: int, step: float) -> Quaternion:
    # k-th central difference along x: sum_i (-1)^i C(k,i) f(p + (k/2 - i) H) / H^k
    acc = Quaternion()
    for i in range(k + 1):
        shift = (k / 2.0 - i) * step
        term = _value(f, Quaternion(p.x + shift, p.y, p.z, p.u))
        acc = acc + term.scale((-1) ** i * math.comb(k, i))
    return acc.scale(1.0 / step ** k)


def full_derivative_numeric(
    f: QFunction,
    p: Quaternion,
    order: int = 1,
    h: float = DEFAULT_STEP,
    richardson: bool = False,
    numeric_only: bool = False,
) -> Quaternion:
    """Full quaternionic derivative of order ``order`` at ``p``.

    The first order is assembled from the Wirtinger partials of the
    constituents.  Higher orders of catalog trees apply the analytic
    derivative ``order - 1`` times and differentiate the result numerically.
    Raw trees (or ``numeric_only``) use a nested central difference with step
    ``h * 10**((order - 1) / 2)``, limited to ``order <= 4``.
    """
    if order < 1:
        raise UnsupportedOrder(f"derivative order must be >= 1, got {order}")
    if order == 1:
        return full_derivative_from_jet(wirtinger_jet(f, p, h, richardson=richardson))
    if is_catalog_holomorphic(f) and not numeric_only:
        g = analytic_derivative(f, order - 1)
        return full_derivative_from_jet(wirtinger_jet(g, p, h, richardson=richardson))
    if order > 4:
        raise UnsupportedOrder("pure numeric differentiation is limited to order 4")
    step = scaled_step(h, p) * 10 ** ((order - 1) / 2)
    return _binomial_difference(f, p, order, step)


def derivative_is_holomorphic(
    f: QFunction,
    order: int,
    dom: Domain,
    tol: float = DEFAULT_TOL,
    h: float = DEFAULT_STEP,
    richardson: bool = False,
) -> HolomorphyReport:
    """Run :func:`check_holomorphy` on the ``order``-th analytic derivative of ``f``."""
    require_catalog(f)
    return check_holomorphy(analytic_derivative(f, order), dom, tol, h, richardson)


def x_central_difference(f: QFunction, p: Quaternion, h: float = DEFAULT_STEP) -> Quaternion:
    """``d psi / dx`` by one central difference on the whole quaternion value."""
    step = scaled_step(h, p)
    plus = _value(f, Quaternion(p.x + step, p.y, p.z, p.u))
    minus = _value(f, Quaternion(p.x - step, p.y, p.z, p.u))
    return (plus - minus).scale(0.5 / step)

