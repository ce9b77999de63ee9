import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from shs6v.qnum import RootOfUnityError, q_pochhammer, reg_phi_4_3, to_scalar, z_norm

small = st.fractions(min_value=-10, max_value=10, max_denominator=12)
q_vals = st.fractions(min_value=F(1, 10), max_value=10, max_denominator=12).filter(lambda q: q != 1)


def test_pochhammer_examples():
    assert q_pochhammer(F(7, 3), F(5), 0) == 1
    assert q_pochhammer(F(0), F(3), 5) == 1
    assert q_pochhammer(F(2), F(2), 2) == 3


def test_pochhammer_negative_index():
    # (a;q)_{-m} (a q^{-m}; q)_m = 1
    a, q = F(3, 5), F(7, 2)
    for m in range(1, 5):
        assert q_pochhammer(a, q, -m) * q_pochhammer(a * q ** (-m), q, m) == 1


@given(small, q_vals)
def test_pochhammer_recursion(a, q):
    for n in range(32):
        assert q_pochhammer(a, q, n + 1) == q_pochhammer(a, q, n) * (1 - a * q ** n)


def test_reg_phi_examples():
    a, b = (F(3), F(0), F(0)), (F(0), F(0), F(0))
    assert reg_phi_4_3(0, a, b, F(5, 3), F(7)) == 1
    bb = (F(1, 3), F(2), F(-1, 2))
    assert reg_phi_4_3(1, a, bb, F(2), F(0)) == (1 - bb[0]) * (1 - bb[1]) * (1 - bb[2])
    # k=0 term is 1; k=1 term is (1/2;2)_1/(2;2)_1 * (3;2)_1 = (1/2)/(-1) * (-2) = 1
    assert reg_phi_4_3(1, a, b, F(2), F(1)) == 2


def test_reg_phi_rejects_root_of_unity():
    with pytest.raises(RootOfUnityError):
        reg_phi_4_3(2, (F(1),) * 3, (F(0),) * 3, F(-1), F(1))


def test_z_norm_examples():
    assert z_norm(4, 0, F(3)) == 1
    assert z_norm(2, 1, F(2)) == 3


@pytest.mark.parametrize("q", [F(2), F(1, 3), F(5, 4)])
def test_z_norm_bitstring_sum(q):
    for J in range(1, 7):
        for h in range(J + 1):
            brute = sum(
                (math.prod([q ** i for i in range(J) if bits[i]], start=F(1))
                 for bits in itertools.product((0, 1), repeat=J) if sum(bits) == h),
                F(0),
            )
            assert z_norm(J, h, q) == brute


@given(small, q_vals, st.integers(0, 6))
def test_float_matches_rational(a, q, n):
    ex = q_pochhammer(a, q, n)
    fl = q_pochhammer(float(a), float(q), n)
    assert abs(fl - float(ex)) <= 1e-12 * max(1.0, abs(float(ex)))
    bs = (a / 3, F(1, 2), -a)
    ex = reg_phi_4_3(min(n, 4), (a, F(1, 3), F(0)), bs, q, F(3, 2))
    fl = reg_phi_4_3(min(n, 4), (float(a), 1 / 3, 0.0), tuple(map(float, bs)), float(q), 1.5)
    assert abs(fl - float(ex)) <= 1e-12 * max(1.0, abs(float(ex)))


def test_to_scalar():
    assert to_scalar("-1/64", True) == F(-1, 64)
    assert isinstance(to_scalar(F(1, 2), False), float)
