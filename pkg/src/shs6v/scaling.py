"""The scaling regime q = exp((beta1 - beta2)/L), (1 + alpha q^J)/(1 + alpha) = exp(-J beta2 / L)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .weights import ModelParams, StochasticityError, all_configs, lJ_weight, stochastic_branch


@dataclass(frozen=True)
class ScalingContext:
    L: int
    beta1: float
    beta2: float
    I: int
    J: int
    q: float
    alpha: float

    @cached_property
    def params(self) -> ModelParams:
        return ModelParams(self.q, self.alpha, self.I, self.J)

    @property
    def nu(self) -> float:
        return self.q ** (-self.I)

    @property
    def b1(self) -> float:
        return (self.alpha + self.nu) / (1 + self.alpha)

    @property
    def b2(self) -> float:
        return (1 + self.alpha * self.q ** self.J) / (1 + self.alpha)

    @property
    def frak_q(self) -> float:
        """The macroscopic base e^{beta1 - beta2} (so that q = frak_q^{1/L})."""
        return math.exp(self.beta1 - self.beta2)


def _alpha_for(L: float, beta1: float, beta2: float, J: int) -> tuple:
    q = math.exp((beta1 - beta2) / L)
    c = math.exp(-J * beta2 / L)
    # (1 + a q^J) = c (1 + a) is Moebius in a: a = (c - 1) / (q^J - c),
    # and q^J - c = c (e^{J beta1 / L} - 1) avoids the cancellation
    alpha = math.expm1(-J * beta2 / L) / (c * math.expm1(J * beta1 / L))
    return q, alpha


def make_scaling(L: int, beta1: float, beta2: float, I: int, J: int) -> ScalingContext:
    """Exact model parameters at scale L; raises if the stochastic range is violated."""
    if beta1 <= 0 or beta2 <= 0:
        raise ValueError("beta1 and beta2 must be positive")
    if beta1 == beta2:
        raise ValueError("beta1 == beta2 gives the degenerate q = 1")
    if L < 1:
        raise ValueError("L must be >= 1")
    q, alpha = _alpha_for(L, beta1, beta2, J)
    if stochastic_branch(q, alpha, I, J) is None:
        want = "q>1" if q > 1 else "q<1"
        lmin = minimal_L(beta1, beta2, I, J)
        raise StochasticityError(
            f"L={L} leaves the {want} stochastic branch "
            f"(alpha={alpha:.6g}, bound {-(q ** (1 - I - J)):.6g}); smallest admissible L is {lmin}"
        )
    return ScalingContext(L, float(beta1), float(beta2), I, J, q, alpha)


def minimal_L(beta1: float, beta2: float, I: int, J: int, L_cap: int = 1 << 20) -> int:
    """Smallest L from which every larger L (scanned upward) is stochastic."""
    L = 1
    while L <= L_cap:
        q, alpha = _alpha_for(L, beta1, beta2, J)
        if stochastic_branch(q, alpha, I, J) is not None:
            # confirm a stretch above to guard against isolated admissible points
            if all(stochastic_branch(*_alpha_for(L + k, beta1, beta2, J), I, J) for k in range(1, 33)):
                return L
        L += 1
    raise StochasticityError("no admissible L found below the scan cap")


def expansion_check(sc: ScalingContext) -> tuple:
    """L^2-scaled deviations of b1, b2 from 1 - I beta1/L and 1 - J beta2/L."""
    L = sc.L
    dev_b1 = abs(sc.b1 - (1 - sc.I * sc.beta1 / L)) * L * L
    dev_b2 = abs(sc.b2 - (1 - sc.J * sc.beta2 / L)) * L * L
    return dev_b1, dev_b2


def diagonal_dominance(sc: ScalingContext) -> float:
    """max over configurations of |L^{(J)}(c) - 1{c is pass-through}| * L."""
    p = sc.params
    worst = 0.0
    for c in all_configs(p.I, p.J, conserving_only=True):
        ind = 1.0 if (c.i1 == c.i2 and c.j1 == c.j2) else 0.0
        worst = max(worst, abs(float(lJ_weight(p, c)) - ind))
    return worst * sc.L
