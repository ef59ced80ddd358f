import math
import sys

import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from holoq.errors import DomainError
from holoq.quaternion import (
    ONE,
    I,
    J,
    K,
    DoublingForm,
    PolarForm,
    Quaternion,
    conj,
    doubling_mul,
    from_polar,
    hamilton_mul,
    inverse,
    norm,
    to_polar,
)

from oracles import exact_product, matrix_product

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
quats = st.builds(Quaternion, finite, finite, finite, finite)


def test_hamilton_example_against_exact_oracle():
    p, q = Quaternion(1, 2, 3, 4), Quaternion(5, 6, 7, 8)
    assert exact_product(p.components(), q.components()) == (-60, 12, 30, 24)
    assert hamilton_mul(p, q) == Quaternion(-60, 12, 30, 24)


def test_unit_table():
    assert hamilton_mul(I, J) == K
    assert hamilton_mul(J, K) == I
    assert hamilton_mul(K, I) == J
    assert hamilton_mul(J, I) == -K
    for unit in (I, J, K):
        assert hamilton_mul(unit, unit) == -ONE


def test_j_swaps_complex_constituent():
    # j alpha = conj(alpha) j for complex alpha
    alpha = Quaternion.from_complex(2 - 3j)
    lhs = hamilton_mul(J, alpha)
    rhs = hamilton_mul(Quaternion.from_complex((2 - 3j).conjugate()), J)
    assert lhs == rhs


def test_identity():
    p = Quaternion(1.5, -2, 0.25, 7)
    assert hamilton_mul(p, ONE) == p
    assert hamilton_mul(ONE, p) == p


@given(quats, quats)
def test_hamilton_matches_matrix_oracle(p, q):
    got, ref = hamilton_mul(p, q), matrix_product(p, q)
    assert abs(got - ref) <= 1e-14 * (1 + abs(p) * abs(q))


@given(quats, quats, quats)
@settings(max_examples=200)
def test_associative(p, q, r):
    lhs = hamilton_mul(hamilton_mul(p, q), r)
    rhs = hamilton_mul(p, hamilton_mul(q, r))
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(p) * abs(q) * abs(r))


def test_doubling_examples():
    got = doubling_mul(DoublingForm(1 + 2j, 3 + 4j), DoublingForm(5 + 6j, 7 + 8j))
    assert got == DoublingForm(-60 + 12j, 30 + 24j)
    assert doubling_mul(DoublingForm(2 + 1j, 0), DoublingForm(3 - 1j, 0)) == DoublingForm((2 + 1j) * (3 - 1j), 0)
    assert doubling_mul(DoublingForm(0, 1), DoublingForm(0, 1)) == DoublingForm(-1, 0)


@given(quats, quats)
def test_doubling_equals_hamilton(p, q):
    got = doubling_mul(p.to_doubling(), q.to_doubling()).to_quaternion()
    assert got == hamilton_mul(p, q)


@given(quats)
def test_doubling_round_trip_is_exact(p):
    d = p.to_doubling()
    assert d.a == complex(p.x, p.y) and d.b == complex(p.z, p.u)
    assert d.to_quaternion() == p


def test_conj_inverse_norm_examples():
    assert inverse(J) == -J
    assert norm(Quaternion(1, 2, 3, 4)) == math.sqrt(30)
    a, b = 1 - 2j, 3 + 0.5j
    assert DoublingForm(a, b).conj() == DoublingForm(a.conjugate(), -b)
    assert conj(Quaternion.from_doubling(a, b)).to_doubling() == DoublingForm(a.conjugate(), -b)


def test_inverse_of_zero():
    with pytest.raises(DomainError):
        inverse(Quaternion())


def test_inverse_survives_extreme_scales():
    for s in (1e-300, 1e300):
        p = Quaternion(s, s, 0, 0)
        assert abs(hamilton_mul(p, inverse(p)) - ONE) < 1e-15


@given(quats)
def test_conj_involution_and_norm_identity(p):
    assert conj(conj(p)) == p
    a, b = p.a, p.b
    lhs = norm(p) ** 2
    rhs = (a * a.conjugate() + b * b.conjugate()).real
    assert math.isclose(lhs, rhs, rel_tol=1e-14, abs_tol=1e-300)


@given(quats, quats)
def test_conj_reverses_products(p, q):
    lhs = conj(hamilton_mul(p, q))
    rhs = hamilton_mul(conj(q), conj(p))
    assert abs(lhs - rhs) <= 1e-14 * (1 + abs(p) * abs(q))


@given(quats, quats)
def test_norm_multiplicative(p, q):
    lhs = norm(hamilton_mul(p, q))
    assert abs(lhs - norm(p) * norm(q)) <= 1e-12 * norm(p) * norm(q) + 1e-300


@given(quats.filter(lambda p: abs(p) > 1e-6))
def test_inverse_is_two_sided(p):
    pi = inverse(p)
    assert abs(hamilton_mul(p, pi) - ONE) < 1e-13
    assert abs(hamilton_mul(pi, p) - ONE) < 1e-13


@given(finite, finite, finite, finite)
def test_complex_subalgebra(x1, y1, x2, y2):
    p, q = Quaternion(x1, y1), Quaternion(x2, y2)
    assert hamilton_mul(p, q) == hamilton_mul(q, p)
    assert hamilton_mul(p, q) == Quaternion.from_complex(complex(x1, y1) * complex(x2, y2))


def test_polar_examples():
    pk = to_polar(Quaternion(0, 0, 0, math.pi))
    assert (pk.x, pk.v, pk.r, pk.theta) == (0.0, math.pi, K, math.pi / 2)

    real = to_polar(Quaternion(3))
    assert real == PolarForm(3.0, 0.0, None, 0.0)
    assert real.on_real_axis

    pf = to_polar(Quaternion(1, 2, 3, 4))
    s = math.sqrt(29)
    assert pf.v == s
    assert abs(pf.r - Quaternion(0, 2 / s, 3 / s, 4 / s)) < 1e-16
    assert math.isclose(pf.theta, math.acos(1 / math.sqrt(30)))


def _ulps(a, b):
    return 0.0 if a == b else abs(a - b) / math.ulp(max(abs(a), abs(b)))


@given(quats.filter(lambda p: p.vector_norm() > 0))
@example(Quaternion(0.0, 0.0, 2.225073858507e-311, 2.225073858507e-311))
@example(Quaternion(0.0, 0.0, 10.0, 2.2250738585072014e-308))
def test_polar_round_trip(p):
    pf = to_polar(p)
    assert abs(hamilton_mul(pf.r, pf.r) + ONE) < 1e-15
    back = from_polar(pf)
    # a subnormal direction component cannot hold a full mantissa
    normal_r = all(c == 0 or abs(c) >= sys.float_info.min for c in pf.r.components())
    for got, want in zip(back.components(), p.components()):
        if normal_r:
            assert _ulps(got, want) <= 2
        else:
            assert abs(got - want) <= 2 * pf.v * math.ulp(0.0) + 2 * math.ulp(want)


def test_from_polar_on_axis():
    assert from_polar(to_polar(Quaternion(-2.5))) == Quaternion(-2.5)
