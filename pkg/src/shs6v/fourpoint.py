"""Exact conditional moments of the four-point residual xi at one vertex.

For a vertex with inputs v (from below) and h (from the left) and height
H00 = H(x, y) at its lower-left corner,

    xi = q^{H00} (q^{h - v'} - b1 q^h - b2 q^{-v} + b1 + b2 - 1)

where v' is the random vertical output.  All moments here are finite sums
over the admissible outputs weighted by the vertex probabilities.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Tuple

from .qnum import Scalar
from .scaling import ScalingContext
from .weights import ModelParams, SingularParameterError, row_distribution


@dataclass(frozen=True)
class LocalStencil:
    H00: int
    h: int
    v: int

    def check(self, p: ModelParams) -> None:
        if not (0 <= self.h <= p.J and 0 <= self.v <= p.I):
            raise ValueError(f"{self} outside h in [0,{p.J}], v in [0,{p.I}]")


def stencils(p: ModelParams, heights=(0,)) -> Iterator[LocalStencil]:
    for H00 in heights:
        for h in range(p.J + 1):
            for v in range(p.I + 1):
                yield LocalStencil(H00, h, v)


def xi_value(p: ModelParams, s: LocalStencil, vprime: int) -> Scalar:
    if p.alpha == -1:
        raise SingularParameterError("alpha = -1")
    if not 0 <= vprime <= p.I:
        raise ValueError(f"v'={vprime} outside [0, {p.I}]")
    q, b1, b2 = p.q, p.b1, p.b2
    return q ** s.H00 * (q ** (s.h - vprime) - b1 * q ** s.h - b2 * q ** (-s.v) + b1 + b2 - 1)


def outcomes(p: ModelParams, s: LocalStencil) -> List[Tuple[Scalar, int, Scalar]]:
    """(probability, v', xi) for every admissible vertex output."""
    s.check(p)
    return [(w, i2, xi_value(p, s, i2)) for (i2, _), w in row_distribution(p, s.v, s.h)]


def conditional_mean_xi(p: ModelParams, s: LocalStencil) -> Scalar:
    total = p.q * 0
    for w, _, xi in outcomes(p, s):
        total = total + w * xi
    return total


def conditional_m2_xi(p: ModelParams, s: LocalStencil) -> Scalar:
    total = p.q * 0
    for w, _, xi in outcomes(p, s):
        total = total + w * xi * xi
    return total


def conditional_abs_moment(p: ModelParams, s: LocalStencil, ell: int) -> Scalar:
    total = p.q * 0
    for w, _, xi in outcomes(p, s):
        total = total + w * abs(xi) ** ell
    return total


def quadratic_bracket(sc: ScalingContext, s: LocalStencil) -> float:
    """Leading part of E[xi^2 | F] in the scaling regime."""
    L, b1, b2, I, J = sc.L, sc.beta1, sc.beta2, sc.I, sc.J
    qH = sc.q ** s.H00
    dx = qH * (sc.q ** (-s.v) - 1)
    dy = qH * (sc.q ** s.h - 1)
    return (
        (b1 + b2) * dx * dy / L
        + J * (b2 - b1) * b2 * qH * dx / L ** 2
        + I * (b1 - b2) * b1 * qH * dy / L ** 2
    )


def remainder_R(sc: ScalingContext, s: LocalStencil) -> float:
    return conditional_m2_xi(sc.params, s) - quadratic_bracket(sc, s)


def max_abs_remainder(sc: ScalingContext, heights=None) -> float:
    """max |R| over all (h, v) and H00 in ``heights`` (default the extremes -L, 0, L)."""
    if heights is None:
        heights = (-sc.L, 0, sc.L)
    return max(abs(remainder_R(sc, s)) for s in stencils(sc.params, heights))


def gamma2_from_m2(p: ModelParams, v: int, H00: int = 0) -> Scalar:
    """Coefficient gamma2 forced by E[xi^2] at h = 0 (where Delta_y = 0)."""
    s = LocalStencil(H00, 0, v)
    qH = p.q ** H00
    dx = qH * (p.q ** (-v) - 1)
    return conditional_m2_xi(p, s) / (qH * dx)
