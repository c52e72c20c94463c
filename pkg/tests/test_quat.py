import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rqframes import DivisionByZero, Quaternion, qabs, qmul
from rqframes.quat import I, J, K, ONE

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
quaternions = st.builds(Quaternion, finite, finite, finite, finite)


def test_unit_table():
    assert I.mul(J) == K
    assert J.mul(K) == I
    assert K.mul(I) == J
    assert J.mul(I) == -K
    assert K.mul(J) == -I
    assert I.mul(K) == -J
    for unit in (I, J, K):
        assert unit.mul(unit) == Quaternion(-1.0)


def test_mul_bilinear_example():
    # (1 + i) * j = j + ij = j + k, expanded over the basis table by hand
    assert Quaternion(1, 1, 0, 0).mul(Quaternion(0, 0, 1, 0)) == Quaternion(0, 0, 1, 1)


@given(quaternions)
def test_mul_identity(q):
    assert q.mul(ONE) == q
    assert ONE.mul(q) == q


@given(quaternions, quaternions)
def test_conj_antiautomorphism(p, q):
    lhs = p.mul(q).conj()
    rhs = q.conj().mul(p.conj())
    assert np.allclose(lhs.to_array(), rhs.to_array(), rtol=0, atol=1e-9)


def test_conj_componentwise():
    assert Quaternion(1, 2, 3, 4).conj() == Quaternion(1, -2, -3, -4)
    assert Quaternion(5).conj() == Quaternion(5)


def test_abs_values():
    assert abs(Quaternion()) == 0.0
    assert abs(Quaternion(1, 1, 1, 1)) == 2.0


def test_abs_squared_matches_self_product():
    rng = np.random.default_rng(11)
    for _ in range(200):
        q = Quaternion(*(rng.uniform(-1e3, 1e3, size=4)))
        prod = q.mul(q.conj())
        n2 = q.x0**2 + q.x1**2 + q.x2**2 + q.x3**2
        assert abs(prod.x0 - n2) <= 4 * math.ulp(n2)
        assert max(abs(prod.x1), abs(prod.x2), abs(prod.x3)) < 1e-14


def test_abs_multiplicative():
    rng = np.random.default_rng(12)
    a = rng.standard_normal((10_000, 4))
    b = rng.standard_normal((10_000, 4))
    lhs = qabs(qmul(a, b))
    rhs = qabs(a) * qabs(b)
    assert np.max(np.abs(lhs - rhs) / np.maximum(rhs, 1e-30)) < 1e-12


def test_inv_examples():
    assert ONE.inv() == ONE
    assert I.inv() == -I
    with pytest.raises(DivisionByZero):
        Quaternion().inv()


@given(quaternions)
def test_inv_right_inverse(q):
    if abs(q) < 1e-6:
        return
    prod = q.mul(q.inv())
    assert np.max(np.abs(prod.to_array() - ONE.to_array())) < 1e-13


def test_associativity_bulk():
    rng = np.random.default_rng(13)
    a, b, c = rng.uniform(-1, 1, size=(3, 10_000, 4))
    lhs = qmul(qmul(a, b), c)
    rhs = qmul(a, qmul(b, c))
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_noncommutativity_witness():
    assert I.mul(J) == -(J.mul(I))


@given(quaternions, finite)
def test_reals_commute(q, r):
    real = Quaternion(r)
    assert real.mul(q) == q.mul(real)


def test_scalar_operators():
    q = Quaternion(1, 2, 3, 4)
    assert 2 * q == q * 2 == Quaternion(2, 4, 6, 8)
    assert q + (-q) == Quaternion()
    assert q - q == Quaternion()


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        Quaternion(float("nan"))
    with pytest.raises(ValueError):
        Quaternion(0, float("inf"))


def test_json_round_trip_bit_exact():
    rng = np.random.default_rng(14)
    for _ in range(100):
        q = Quaternion(*(rng.standard_normal(4) * 10.0 ** rng.integers(-8, 8)))
        back = Quaternion.from_array(json.loads(json.dumps(q.to_list())))
        assert back == q
