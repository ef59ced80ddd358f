import cmath
import math

import pytest
from hypothesis import example, given
from hypothesis import strategies as st

from holoq.errors import BranchCutError, DomainError, UnsupportedNode
from holoq.expr import (
    CATALOG,
    P,
    Add,
    Exp,
    Mul,
    PowInt,
    QuatConst,
    RealConst,
    analytic_derivative,
    builtin_cos,
    builtin_exp,
    builtin_ln,
    builtin_powi,
    builtin_recip,
    builtin_sin,
    evaluate,
    is_catalog_holomorphic,
    polynomial,
    q_exp,
    raw_conj,
    raw_product,
    restrict_to_complex,
    sinc,
    sinhc,
    substitute,
)
from holoq.parser import format_expr
from holoq.quaternion import J, K, Quaternion, conj, hamilton_mul
from holoq.wirtinger import full_derivative_numeric, sample_points

from oracles import COMPLEX_REFERENCE, matrix_product

coord = st.floats(min_value=-2, max_value=2, allow_nan=False)
quats = st.builds(Quaternion, coord, coord, coord, coord)


def close(p: Quaternion, q: Quaternion, tol: float = 1e-14) -> bool:
    return abs(p - q) <= tol * (1 + abs(q))


def test_square_split():
    p = Quaternion(1, 2, 3, 4)
    r = evaluate(builtin_powi(2), p)
    assert r.value == matrix_product(p, p) == Quaternion(-28, 4, 6, 8)
    a, b = p.a, p.b
    assert r.phi1 == a * a - b * b.conjugate() == -28 + 4j
    assert r.phi2 == (a + a.conjugate()) * b == 6 + 8j


def test_exp_examples():
    # exp(v r) = cos v + r sin v with v = pi, r = k
    assert close(builtin_exp().value_at(Quaternion(0, 0, 0, math.pi)), Quaternion(-1))
    assert builtin_exp().value_at(Quaternion()) == Quaternion(1)


def test_ln_examples():
    assert close(builtin_ln().value_at(J), Quaternion(0, 0, math.pi / 2, 0))
    assert builtin_ln().value_at(Quaternion(1)) == Quaternion()


def test_sin_on_j():
    assert close(builtin_sin().value_at(J), Quaternion(0, 0, math.sinh(1), 0))


def test_cos_formula():
    p = Quaternion(0.3, 0.4, -1.2, 0.5)
    v = p.vector_norm()
    want = Quaternion(math.cos(0.3) * math.cosh(v)) + Quaternion(0, 0.4, -1.2, 0.5).scale(-math.sin(0.3) * math.sinh(v) / v)
    assert close(builtin_cos().value_at(p), want)


def test_singular_set():
    with pytest.raises(DomainError):
        builtin_recip().value_at(Quaternion())
    with pytest.raises(DomainError):
        builtin_ln().value_at(Quaternion())
    with pytest.raises(BranchCutError):
        builtin_ln().value_at(Quaternion(-1))
    with pytest.raises(DomainError):
        builtin_powi(-2).value_at(Quaternion())


def test_ln_is_continuous_just_off_the_cut():
    # approaching -1 from any imaginary direction gives |Im ln| -> pi
    for eps in (1e-3, 1e-8):
        v = builtin_ln().value_at(Quaternion(-1, 0, eps, 0))
        assert abs(v.z - math.pi) < 2 * eps


def test_small_v_kernels_match_direct_formula():
    for v in (1e-5, 3e-5, 9.9e-5):
        assert math.isclose(sinc(v), math.sin(v) / v, rel_tol=1e-15)
        assert math.isclose(sinhc(v), math.sinh(v) / v, rel_tol=1e-15)
    assert sinc(0.0) == sinhc(0.0) == 1.0


@given(quats)
def test_decomposition_reconstructs_value(p):
    for f in CATALOG.values():
        try:
            r = evaluate(f, p)
        except DomainError:
            continue
        assert Quaternion.from_doubling(r.phi1, r.phi2) == r.value


@given(quats)
def test_exp_commutes_with_conj(p):
    assert close(q_exp(conj(p)), conj(q_exp(p)))


@given(quats)
def test_exp_of_sum_for_commuting_arguments(p):
    # p and 2p commute, so exp(3p) = exp(p) exp(2p)
    lhs = q_exp(p.scale(3.0))
    rhs = hamilton_mul(q_exp(p), q_exp(p.scale(2.0)))
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


def test_restrict_to_complex():
    assert cmath.isclose(restrict_to_complex(builtin_exp(), 1 + 1j), cmath.e * (math.cos(1) + 1j * math.sin(1)), rel_tol=1e-15)
    assert restrict_to_complex(builtin_powi(2), 1j) == -1
    with pytest.raises(BranchCutError):
        restrict_to_complex(builtin_ln(), -1)


@given(coord, coord)
@example(-1.0, 5e-324)
@example(-1.0, 1.1125369292536007e-308)
def test_complex_reduction(x, y):
    xi = complex(x, y)
    if abs(xi) < 1e-3:
        return
    for name, f in CATALOG.items():
        if name == "ln" and y == 0 and x < 0:
            continue
        got = restrict_to_complex(f, xi)
        want = COMPLEX_REFERENCE[name](xi)
        assert abs(got - want) <= 1e-12 * abs(want)


def test_derivative_table():
    assert format_expr(analytic_derivative(builtin_powi(2))) == "2*p"
    assert analytic_derivative(builtin_exp()) == Exp(P)
    assert format_expr(analytic_derivative(builtin_recip(), 2)) == "2*p^-3"
    assert format_expr(analytic_derivative(builtin_powi(-1), 2)) == "2*p^-3"
    assert format_expr(analytic_derivative(builtin_ln())) == "recip(p)"
    assert format_expr(analytic_derivative(builtin_sin())) == "cos(p)"
    assert format_expr(analytic_derivative(builtin_cos())) == "-sin(p)"
    assert analytic_derivative(builtin_exp(), 3) == Exp(P)


def test_polynomial_and_constants():
    f = polynomial([1.0, 0.0, 3.0])  # 1 + 3p^2
    p = Quaternion(0.5, 1, -1, 2)
    assert close(f.value_at(p), Quaternion(1) + hamilton_mul(p, p).scale(3.0))
    assert format_expr(analytic_derivative(f)) == "6*p"
    assert analytic_derivative(RealConst(4.0)) == RealConst(0.0)


def test_raw_trees_are_rejected():
    assert not is_catalog_holomorphic(raw_conj())
    assert not is_catalog_holomorphic(raw_product(P, QuatConst(J)))
    assert is_catalog_holomorphic(Mul(RealConst(2.0), P))
    with pytest.raises(UnsupportedNode):
        analytic_derivative(raw_conj())
    with pytest.raises(UnsupportedNode):
        restrict_to_complex(Add(P, QuatConst(K)), 1.0)


@given(quats)
def test_raw_conj_is_conjugation(p):
    assert close(raw_conj().value_at(p), conj(p))


def test_substitute_composes():
    f = substitute(builtin_exp(), PowInt(P, 2))
    assert format_expr(f) == "exp(p^2)"
    p = Quaternion(0.2, 0.1, -0.3, 0.4)
    assert f.value_at(p) == q_exp(hamilton_mul(p, p))


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_analytic_matches_numeric(name):
    f = CATALOG[name]
    df = analytic_derivative(f)
    for p in sample_points(100, 5, min_abs_p=0.1, min_abs_b=0.05, branch_margin=0.1):
        want = df.value_at(p)
        got = full_derivative_numeric(f, p)
        assert abs(got - want) <= 1e-6 * (1 + abs(want))
