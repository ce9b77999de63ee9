"""Vertex weights of the stochastic higher spin six vertex model.

Three independent routes to the general-J weight are provided:

* :func:`lJ_weight_hypergeom` -- the explicit regularized 4phi3 formula;
* :func:`lJ_weight_fused` -- fusion of a column of J spin-1/2 vertices with
  spectral parameters alpha, alpha q, ..., alpha q^{J-1} (bottom to top),
  inputs reweighted by Lambda;
* :func:`lJ_weight_fused_reversed` -- the same column with the spectral
  parameters reversed (alpha q^{J-1} at the bottom) and inputs reweighted by
  the reversed Lambda.

A vertex configuration is ``(i1, j1, i2, j2)``: i1 lines enter from below,
j1 from the left, i2 leave upwards and j2 leave to the right.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .qnum import Scalar, check_not_root_of_unity, q_pochhammer, reg_phi_4_3, z_norm


class SingularParameterError(ValueError):
    """Raised at a pole of a weight formula (e.g. spectral parameter -1)."""


class StochasticityError(ValueError):
    """Raised when (q, alpha) lie outside both stochastic parameter ranges."""


def stochastic_branch(q: Scalar, alpha: Scalar, I: int, J: int) -> Optional[str]:
    """Return ``"q<1"`` or ``"q>1"`` for the branch (q, alpha) lies in, else None."""
    bound = -(q ** (-(I + J - 1)))
    if 0 < q < 1 and alpha < bound:
        return "q<1"
    if q > 1 and bound < alpha < 0:
        return "q>1"
    return None


@dataclass(frozen=True)
class ModelParams:
    """Parameters (q, alpha, I, J) of the model; ``nu = q**-I`` is derived.

    Pass Fractions for exact work and floats for simulation.  Construction
    rejects parameters outside the stochastic range unless ``check=False``.
    """

    q: Scalar
    alpha: Scalar
    I: int
    J: int
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.I < 1 or self.J < 1:
            raise ValueError("I and J must be positive integers")
        if self.q <= 0 or self.q == 1:
            raise ValueError(f"q must be positive and different from 1, got {self.q!r}")
        if self.check and stochastic_branch(self.q, self.alpha, self.I, self.J) is None:
            bound = -(self.q ** (-(self.I + self.J - 1)))
            if self.q > 1:
                msg = f"q > 1 requires {float(bound):.6g} < alpha < 0"
            else:
                msg = f"q < 1 requires alpha < {float(bound):.6g}"
            raise StochasticityError(f"{msg}; got alpha={float(self.alpha):.6g}")

    @property
    def nu(self) -> Scalar:
        return self.q ** (-self.I)

    @property
    def exact(self) -> bool:
        return not isinstance(self.q, float)

    @property
    def b1(self) -> Scalar:
        return (self.alpha + self.nu) / (1 + self.alpha)

    @property
    def b2(self) -> Scalar:
        return (1 + self.alpha * self.q ** self.J) / (1 + self.alpha)


@dataclass(frozen=True)
class VertexConfig:
    i1: int
    j1: int
    i2: int
    j2: int

    def conserves(self) -> bool:
        return self.i1 + self.j1 == self.i2 + self.j2

    def check_range(self, I: int, J: int) -> None:
        if not (0 <= self.i1 <= I and 0 <= self.i2 <= I and 0 <= self.j1 <= J and 0 <= self.j2 <= J):
            raise ValueError(f"{self} outside [0,{I}] x [0,{J}]")


def all_configs(I: int, J: int, conserving_only: bool = False):
    for i1, j1, i2, j2 in itertools.product(range(I + 1), range(J + 1), range(I + 1), range(J + 1)):
        c = VertexConfig(i1, j1, i2, j2)
        if conserving_only and not c.conserves():
            continue
        yield c


# ---------------------------------------------------------------- J = 1 ----

def l1_weight(p: ModelParams, spectral: Scalar, m: int, j1: int, m2: int, j2: int) -> Scalar:
    """Spin-1/2 horizontal weight L^{(1)}_spectral(m, j1; m2, j2)."""
    if spectral == -1:
        raise SingularParameterError("spectral parameter -1 is a pole of the J=1 weights")
    if not 0 <= m <= p.I:
        raise ValueError(f"m={m} outside [0, {p.I}]")
    zero = spectral * 0
    qm = p.q ** m
    denom = 1 + spectral
    if j1 == 0:
        if m2 == m and j2 == 0:
            return (1 + spectral * qm) / denom
        if m2 == m - 1 and j2 == 1:
            return spectral * (1 - qm) / denom
        return zero
    if j1 == 1:
        if m2 == m and j2 == 1:
            return (spectral + p.nu * qm) / denom
        if m2 == m + 1 and j2 == 0:
            return (1 - p.nu * qm) / denom
        return zero
    raise ValueError(f"j1 must be 0 or 1, got {j1}")


# ------------------------------------------------------- hypergeometric ----

def lJ_weight_hypergeom(p: ModelParams, c: VertexConfig) -> Scalar:
    """General-J weight from the explicit regularized 4phi3 expression."""
    c.check_range(p.I, p.J)
    q, alpha, nu, J = p.q, p.alpha, p.nu, p.J
    zero = q * 0
    if not c.conserves():
        return zero
    i1, j1, i2, j2 = c.i1, c.j1, c.i2, c.j2
    check_not_root_of_unity(q, p.I + J + 1)
    if alpha == 0:
        raise SingularParameterError("alpha = 0 is a pole of the hypergeometric formula")
    den_alpha = q_pochhammer(-alpha, q, i2 + j2)
    if den_alpha == 0:
        raise SingularParameterError(f"(-alpha; q)_{i2 + j2} vanishes at alpha={alpha!r}")
    s = i1 + j1
    # the quarter-integer q-exponent collapses to an integer under conservation
    exponent = (s * (s - 1) - j1 * (j1 - 1)) // 2
    prefactor = q ** exponent * nu ** (j1 - i2) * alpha ** (j2 - j1 + i2)
    try:
        num = q_pochhammer(-alpha / nu, q, j2 - i1)
        den = q_pochhammer(q, q, i2) * den_alpha * q_pochhammer(q ** (J + 1 - j1), q, j1 - j2)
    except ZeroDivisionError as exc:
        raise SingularParameterError(str(exc)) from exc
    phi = reg_phi_4_3(
        i2,
        (q ** (-i1), -alpha * q ** J, -q * nu / alpha),
        (nu, q ** (1 + j2 - i1), q ** (J + 1 - i2 - j2)),
        q,
        q,
    )
    return prefactor * num / den * phi


# ---------------------------------------------------------------- fusion ----

LambdaFn = Callable[[ModelParams, int, Tuple[int, ...]], Scalar]


def lambda_weight(p: ModelParams, h: int, bits: Tuple[int, ...]) -> Scalar:
    """Lambda(h; bits) = prod_{i: bit_i = 1} q^{i-1} / Z_J(h)."""
    if sum(bits) != h:
        return p.q * 0
    w = p.q ** sum(i for i, b in enumerate(bits) if b)
    return w / z_norm(len(bits), h, p.q)


def lambda_weight_reversed(p: ModelParams, h: int, bits: Tuple[int, ...]) -> Scalar:
    """Reversed Lambda: the weight q^{J-i} replaces q^{i-1}."""
    if sum(bits) != h:
        return p.q * 0
    J = len(bits)
    w = p.q ** sum(J - 1 - i for i, b in enumerate(bits) if b)
    return w / z_norm(J, h, p.q)


def _bitstrings(J: int, h: int):
    for ones in itertools.combinations(range(J), h):
        yield tuple(1 if i in ones else 0 for i in range(J))


def _column_outputs(p: ModelParams, i1: int, bits: Tuple[int, ...], spectrals) -> Dict[Tuple[int, int], Scalar]:
    """Push one input bit string through a column of J=1 vertices.

    Returns {(i2, j2): weight} where j2 is the number of right-going output
    lines.  The sum over output bit strings is collapsed on the fly (that is
    the action of Xi), and impossible intermediate verticals are pruned.
    """
    states: Dict[Tuple[int, int], Scalar] = {(i1, 0): p.q * 0 + 1}
    for hk, spectral in zip(bits, spectrals):
        nxt: Dict[Tuple[int, int], Scalar] = {}
        for (v, s), w in states.items():
            for hout in (0, 1):
                vout = v + hk - hout
                if not 0 <= vout <= p.I:
                    continue
                lw = l1_weight(p, spectral, v, hk, vout, hout)
                if lw == 0:
                    continue
                key = (vout, s + hout)
                nxt[key] = nxt.get(key, 0) + w * lw
        states = nxt
    return states


def _fused_row(p: ModelParams, i1: int, j1: int, reverse: bool, lam: Optional[LambdaFn]) -> Dict[Tuple[int, int], Scalar]:
    J = p.J
    if reverse:
        spectrals = [p.alpha * p.q ** (J - k) for k in range(1, J + 1)]
        lam = lam or lambda_weight_reversed
    else:
        spectrals = [p.alpha * p.q ** (k - 1) for k in range(1, J + 1)]
        lam = lam or lambda_weight
    row: Dict[Tuple[int, int], Scalar] = {}
    for bits in _bitstrings(J, j1):
        w_in = lam(p, j1, bits)
        if w_in == 0:
            continue
        for key, w in _column_outputs(p, i1, bits, spectrals).items():
            row[key] = row.get(key, 0) + w_in * w
    return row


@lru_cache(maxsize=4096)
def _fused_row_cached(p: ModelParams, i1: int, j1: int, reverse: bool) -> Dict[Tuple[int, int], Scalar]:
    return _fused_row(p, i1, j1, reverse, None)


def lJ_weight_fused(p: ModelParams, c: VertexConfig, lam: Optional[LambdaFn] = None) -> Scalar:
    """General-J weight by fusion with spectral parameters alpha q^{k-1}, k = 1..J.

    ``lam`` replaces the Lambda input distribution; it exists so that the
    identity checker can verify it detects a corrupted Lambda.
    """
    c.check_range(p.I, p.J)
    if not c.conserves():
        return p.q * 0
    row = _fused_row_cached(p, c.i1, c.j1, False) if lam is None else _fused_row(p, c.i1, c.j1, False, lam)
    return row.get((c.i2, c.j2), p.q * 0)


def lJ_weight_fused_reversed(p: ModelParams, c: VertexConfig, lam: Optional[LambdaFn] = None) -> Scalar:
    """General-J weight by fusion with reversed spectral parameters alpha q^{J-k}."""
    c.check_range(p.I, p.J)
    if not c.conserves():
        return p.q * 0
    row = _fused_row_cached(p, c.i1, c.j1, True) if lam is None else _fused_row(p, c.i1, c.j1, True, lam)
    return row.get((c.i2, c.j2), p.q * 0)


def lJ_weight(p: ModelParams, c: VertexConfig) -> Scalar:
    """Default weight evaluation (fusion; all terms nonnegative, so benign in floats)."""
    return lJ_weight_fused(p, c)


def row_distribution(p: ModelParams, i1: int, j1: int) -> List[Tuple[Tuple[int, int], Scalar]]:
    """Admissible outputs of a vertex with inputs (i1, j1) and their probabilities."""
    if not (0 <= i1 <= p.I and 0 <= j1 <= p.J):
        raise ValueError(f"inputs ({i1}, {j1}) outside [0,{p.I}] x [0,{p.J}]")
    row = _fused_row_cached(p, i1, j1, False)
    s = i1 + j1
    out = []
    for i2 in range(max(0, s - p.J), min(p.I, s) + 1):
        w = row.get((i2, s - i2), p.q * 0)
        if w != 0:
            out.append(((i2, s - i2), w))
    return out


def transition_table(p: ModelParams) -> np.ndarray:
    """Float table P[i1, j1, i2] of output probabilities (j2 is implied)."""
    table = np.zeros((p.I + 1, p.J + 1, p.I + 1))
    for i1 in range(p.I + 1):
        for j1 in range(p.J + 1):
            for (i2, _), w in row_distribution(p, i1, j1):
                table[i1, j1, i2] = float(w)
    return table


def weight_table(p: ModelParams, method: str = "fused") -> List[Tuple[int, int, int, int, Scalar]]:
    """All conserving configurations with their weights as (i1, j1, i2, j2, w)."""
    fn = {
        "fused": lJ_weight_fused,
        "reversed": lJ_weight_fused_reversed,
        "hypergeom": lJ_weight_hypergeom,
    }[method]
    return [(c.i1, c.j1, c.i2, c.j2, fn(p, c)) for c in all_configs(p.I, p.J, conserving_only=True)]
