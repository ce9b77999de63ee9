from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shs6v.weights import (
    ModelParams,
    SingularParameterError,
    StochasticityError,
    VertexConfig,
    all_configs,
    l1_weight,
    lJ_weight_fused,
    lJ_weight_fused_reversed,
    lJ_weight_hypergeom,
    row_distribution,
    stochastic_branch,
    transition_table,
    weight_table,
)


@st.composite
def exact_params(draw, I_max=3, J_max=3):
    """Rational (q, alpha) strictly inside one of the stochastic branches."""
    I = draw(st.integers(1, I_max))
    J = draw(st.integers(1, J_max))
    bound = lambda q: q ** (-(I + J - 1))
    if draw(st.booleans()):
        q = draw(st.fractions(F(9, 8), F(4), max_denominator=8))
        t = draw(st.fractions(F(1, 20), F(19, 20), max_denominator=20))
        alpha = -t * bound(q)
    else:
        q = draw(st.fractions(F(1, 4), F(7, 8), max_denominator=8))
        s = draw(st.fractions(F(21, 20), F(8), max_denominator=20))
        alpha = -s * bound(q)
    return ModelParams(q, alpha, I, J)


def test_l1_examples():
    p = ModelParams(F(2), F(-1, 4), 1, 1)
    assert l1_weight(p, p.alpha, 0, 0, 0, 0) == 1
    assert l1_weight(p, p.alpha, 1, 0, 1, 0) == F(2, 3)
    # nu q^I = 1 kills the overflow entry
    assert l1_weight(p, p.alpha, 1, 1, 2, 0) == 0


def test_l1_rejects_spectral_minus_one():
    p = ModelParams(F(2), F(-1, 4), 1, 1)
    with pytest.raises((SingularParameterError, ZeroDivisionError)):
        l1_weight(p, F(-1), 0, 1, 1, 0)


@given(exact_params())
def test_three_routes_agree(p):
    for c in all_configs(p.I, p.J):
        w = lJ_weight_hypergeom(p, c)
        assert w == lJ_weight_fused(p, c) == lJ_weight_fused_reversed(p, c)
        if not c.conserves():
            assert w == 0


@given(exact_params())
def test_rows_stochastic_and_nonnegative(p):
    for i1 in range(p.I + 1):
        for j1 in range(p.J + 1):
            row = row_distribution(p, i1, j1)
            assert sum(w for _, w in row) == 1
            assert all(w > 0 for _, w in row)
            assert all(i2 + j2 == i1 + j1 for (i2, j2), _ in row)


@given(exact_params(J_max=1))
def test_j1_reduction(p):
    for c in all_configs(p.I, 1):
        assert lJ_weight_hypergeom(p, c) == l1_weight(p, p.alpha, c.i1, c.j1, c.i2, c.j2)


def test_fused_matches_hypergeom_reference_point():
    for I in range(1, 4):
        for J in range(1, 4):
            p = ModelParams(F(2), F(-1, 64), I, J)
            for c in all_configs(I, J):
                assert lJ_weight_fused(p, c) == lJ_weight_hypergeom(p, c)


@pytest.mark.parametrize("q,t", [(F(2), F(1, 2)), (F(1, 3), F(3)), (F(5, 4), F(2, 3))])
def test_j2_four_term_sum(q, t):
    # J = 2, (v,1) -> (v,1): both spectral orderings equal the same four-term sum
    for I in range(1, 4):
        alpha = -t * q ** (-(I + 1))
        p = ModelParams(q, alpha, I, 2)
        nu = p.nu
        for v in range(I + 1):
            terms = (
                q * (alpha * q + nu * q ** v) * (1 + alpha * q ** v)
                + q * alpha * (1 - nu * q ** v) * (1 - q ** (v + 1))
                + alpha * q * (1 - q ** v) * (1 - nu * q ** (v - 1))
                + (1 + alpha * q ** (v + 1)) * (alpha + nu * q ** v)
            )
            expected = terms / ((1 + q) * (1 + alpha) * (1 + alpha * q))
            c = VertexConfig(v, 1, v, 1)
            assert lJ_weight_fused(p, c) == expected
            assert lJ_weight_fused_reversed(p, c) == expected


def test_row_distribution_trivial_rows():
    p = ModelParams(F(3), F(-1, 100), 2, 3)
    assert row_distribution(p, 0, 0) == [((0, 0), 1)]
    assert row_distribution(p, 2, 3) == [((2, 3), 1)]


def test_stochastic_branch_boundaries():
    assert stochastic_branch(F(2), F(-1, 8), 2, 2) is None  # on the bound
    assert stochastic_branch(F(2), F(-1, 9), 2, 2) == "q>1"
    assert stochastic_branch(F(1, 2), F(-9), 2, 2) == "q<1"
    assert stochastic_branch(F(1, 2), F(-7), 2, 2) is None
    with pytest.raises(StochasticityError):
        ModelParams(F(2), F(1, 2), 1, 1)


def test_singular_alpha_rejected():
    # alpha = -1/q makes (-alpha; q)_2 vanish
    p = ModelParams(F(2), F(-1, 2), 1, 1, check=False)
    with pytest.raises((SingularParameterError, ZeroDivisionError)):
        lJ_weight_hypergeom(p, VertexConfig(1, 1, 1, 1))


def test_float_table_matches_exact():
    pe = ModelParams(F(3, 2), F(-1, 5), 2, 2)
    pf = ModelParams(1.5, -0.2, 2, 2)
    T = transition_table(pf)
    assert np.allclose(T.sum(axis=-1), 1.0, atol=1e-14)
    for i1, j1, i2, j2, w in weight_table(pe):
        assert abs(T[i1, j1, i2] - float(w)) < 1e-14


def test_weight_table_methods_agree():
    p = ModelParams(F(1, 2), F(-20), 2, 3)
    ref = weight_table(p, "hypergeom")
    assert weight_table(p, "fused") == ref == weight_table(p, "reversed")
