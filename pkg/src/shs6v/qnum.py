"""Scalar helpers and the q-series special functions behind the vertex weights.

Every formula in this package is written once against plain arithmetic
operators, so the same code runs on :class:`fractions.Fraction` (exact
identity checks) and on ``float`` (simulation).  Mixing the two in one call
silently degrades to ``float``; use :func:`to_scalar` to keep inputs uniform.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

Scalar = Union[Fraction, float]


class RootOfUnityError(ValueError):
    """Raised when q is a root of unity, where (q;q)_k vanishes."""


def to_scalar(value, exact: bool) -> Scalar:
    """Coerce ``value`` to a Fraction (``exact=True``) or a float."""
    if exact:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, str):
            return Fraction(value)
        return Fraction(value)
    return float(value)


def is_exact(*values) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in values)


def check_not_root_of_unity(q: Scalar, n: int) -> None:
    """Reject q with q**k == 1 for some 1 <= k <= n."""
    p = q
    for k in range(1, max(n, 1) + 1):
        if p == 1:
            raise RootOfUnityError(f"q = {q!r} satisfies q**{k} == 1")
        p = p * q


def q_pochhammer(a: Scalar, q: Scalar, n: int) -> Scalar:
    """(a; q)_n = prod_{k=0}^{n-1} (1 - a q^k).

    Negative ``n`` uses the usual continuation
    (a; q)_{-m} = 1 / prod_{k=1}^{m} (1 - a q^{-k}).
    """
    one = a * 0 + 1
    if n >= 0:
        result = one
        term = a
        for _ in range(n):
            result = result * (1 - term)
            term = term * q
        return result
    denom = one
    term = a / q
    for _ in range(-n):
        denom = denom * (1 - term)
        term = term / q
    if denom == 0:
        raise ZeroDivisionError(f"(a; q)_{n} has a vanishing factor for a={a!r}")
    return one / denom


def reg_phi_4_3(n: int, a: Sequence[Scalar], b: Sequence[Scalar], q: Scalar, z: Scalar) -> Scalar:
    """Regularized terminating 4phi3 with upper parameter q^{-n}.

    sum_{k=0}^{n} z^k (q^{-n};q)_k / (q;q)_k * prod_i (a_i;q)_k (b_i q^k;q)_{n-k}
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if len(a) != 3 or len(b) != 3:
        raise ValueError("reg_phi_4_3 takes exactly three a and three b parameters")
    check_not_root_of_unity(q, n)
    q_inv_n = q ** (-n) if n else q * 0 + 1
    total = q * 0
    zk = z * 0 + 1
    qk = q * 0 + 1
    for k in range(n + 1):
        term = zk * q_pochhammer(q_inv_n, q, k) / q_pochhammer(q, q, k)
        for ai, bi in zip(a, b):
            term = term * q_pochhammer(ai, q, k) * q_pochhammer(bi * qk, q, n - k)
        total = total + term
        zk = zk * z
        qk = qk * q
    return total


def z_norm(J: int, h: int, q: Scalar) -> Scalar:
    """Normalizing constant Z_J(h) = q^{h(h-1)/2} (q;q)_J / ((q;q)_h (q;q)_{J-h}).

    Equal to the sum of prod_{i: h_i = 1} q^{i-1} over bit strings of length
    J with h ones.
    """
    if not 0 <= h <= J:
        raise ValueError(f"h={h} outside [0, {J}]")
    check_not_root_of_unity(q, J)
    return (
        q ** (h * (h - 1) // 2)
        * q_pochhammer(q, q, J)
        / (q_pochhammer(q, q, h) * q_pochhammer(q, q, J - h))
    )
