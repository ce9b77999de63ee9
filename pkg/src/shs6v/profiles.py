"""Macroscopic boundary height profiles chi (bottom) and psi (left)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Profile:
    """A piecewise C^1 profile with its derivative, both vectorized."""

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    slope: Callable[[np.ndarray], np.ndarray]

    def __call__(self, t):
        return self.value(np.asarray(t, dtype=float))


def linear(slope: float, name: str = "") -> Profile:
    s = float(slope)
    return Profile(name or f"linear({s:g})", lambda t: s * t, lambda t: np.full_like(t, s))


def piecewise_linear(breaks, slopes, name: str = "piecewise") -> Profile:
    """Continuous profile starting at 0 with slope ``slopes[k]`` on [breaks[k], breaks[k+1])."""
    breaks = np.asarray(breaks, dtype=float)
    slopes = np.asarray(slopes, dtype=float)
    if len(breaks) != len(slopes) or breaks[0] != 0:
        raise ValueError("breaks must start at 0 and match slopes in length")
    offsets = np.concatenate([[0.0], np.cumsum(np.diff(breaks) * slopes[:-1])])

    def value(t):
        k = np.clip(np.searchsorted(breaks, t, side="right") - 1, 0, len(breaks) - 1)
        return offsets[k] + slopes[k] * (t - breaks[k])

    def slope(t):
        k = np.clip(np.searchsorted(breaks, t, side="right") - 1, 0, len(breaks) - 1)
        return slopes[k]

    return Profile(name, value, slope)


def packed(J: int):
    """chi = 0 and psi(y) = J y: every left boundary edge carries J lines."""
    return linear(0.0, "zero"), linear(J, f"packed(J={J})")


def empty():
    return linear(0.0, "zero"), linear(0.0, "zero")


def check_cone(chi: Profile, psi: Profile, I: int, J: int, A: float, B: float, n: int = 257) -> None:
    """Profiles must be Lipschitz with chi' in [-I, 0] and psi' in [0, J]."""
    tx = np.linspace(0, A, n)
    ty = np.linspace(0, B, n)
    eps = 1e-12
    if chi(0.0) != 0 or psi(0.0) != 0:
        raise ValueError("profiles must vanish at the origin (H(0,0) = 0)")
    if np.any(chi.slope(tx) < -I - eps) or np.any(chi.slope(tx) > eps):
        raise ValueError(f"chi slope outside [-{I}, 0]")
    if np.any(psi.slope(ty) < -eps) or np.any(psi.slope(ty) > J + eps):
        raise ValueError(f"psi slope outside [0, {J}]")
