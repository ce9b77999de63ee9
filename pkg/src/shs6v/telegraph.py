"""Riemann functions and solution formulas for the telegraph equation

    u_XY + beta1 u_Y + beta2 u_X = f          (continuum)
    Phi(X+1,Y+1) - b1 Phi(X,Y+1) - b2 Phi(X+1,Y) + (b1+b2-1) Phi(X,Y) = g   (discrete)

together with the covariance of the stochastic version driven by the
fluctuations of the vertex model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence

import numpy as np

from .profiles import Profile
from .quadrature import QuadratureError, adaptive_gl, tensor_gl


class RiemannEvaluationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TelegraphCoeffs:
    """Coefficients of u_Y (beta1_eff) and u_X (beta2_eff)."""

    beta1_eff: float
    beta2_eff: float

    def __post_init__(self):
        if self.beta1_eff <= 0 or self.beta2_eff <= 0:
            raise ValueError("telegraph coefficients must be positive")
        if self.beta1_eff == self.beta2_eff:
            raise ValueError("beta1_eff == beta2_eff: the two poles of the Riemann integrand merge")

    @classmethod
    def for_model(cls, I: int, beta1: float, J: int, beta2: float) -> "TelegraphCoeffs":
        return cls(I * beta1, J * beta2)


@dataclass(frozen=True)
class DiscreteCoeffs:
    b1: object
    b2: object

    def __post_init__(self):
        if self.b1 == self.b2:
            raise ValueError("b1 == b2 is excluded (pole separation)")


# ---------------------------------------------------------- continuum R ----

_SERIES_CAP = 10000


def _bessel_sums(kappa: np.ndarray, rtol: float = 1e-14):
    """S0 = sum kappa^n/(n!)^2 and S1 = sum kappa^n/(n! (n+1)!)."""
    kappa = np.asarray(kappa, dtype=float)
    t0 = np.ones_like(kappa)
    t1 = np.ones_like(kappa)
    s0 = t0.copy()
    s1 = t1.copy()
    for n in range(1, _SERIES_CAP):
        t0 = t0 * kappa / (n * n)
        t1 = t1 * kappa / (n * (n + 1))
        s0 += t0
        s1 += t1
        if np.all(t0 <= rtol * s0) and np.all(t1 <= rtol * s1):
            return s0, s1
    raise RiemannEvaluationError(f"residue series did not converge within {_SERIES_CAP} terms")


def riemann_continuum(c: TelegraphCoeffs, X, Y, x, y):
    """Riemann function R(X, Y; x, y) by its residue series at z = -beta1.

    With w = z + beta1 the integrand is exp(-c/w) times a function analytic
    at w = 0; pairing the Laurent coefficients of the two factors gives
    e^{(beta1-beta2) b - beta1 a} sum_n (-beta1 b)^n/n! L_n(beta2 a)
    (a = X - x, b = Y - y, L_n Laguerre).  That alternating sum is evaluated
    in its resummed positive form e^{-beta1 a - beta2 b} sum_n (beta1 beta2 a b)^n/(n!)^2,
    which has no cancellation.
    """
    a = np.asarray(X, dtype=float) - np.asarray(x, dtype=float)
    b = np.asarray(Y, dtype=float) - np.asarray(y, dtype=float)
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("Riemann function needs x <= X and y <= Y")
    b1, b2 = c.beta1_eff, c.beta2_eff
    s0, _ = _bessel_sums(b1 * b2 * a * b)
    out = np.exp(-b1 * a - b2 * b) * s0
    return float(out) if out.ndim == 0 else out


def riemann_continuum_grad(c: TelegraphCoeffs, a, b):
    """R and its partials with respect to a = X - x and b = Y - y."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    b1, b2 = c.beta1_eff, c.beta2_eff
    s0, s1 = _bessel_sums(b1 * b2 * a * b)
    e = np.exp(-b1 * a - b2 * b)
    r = e * s0
    ra = -b1 * r + e * s1 * b1 * b2 * b
    rb = -b2 * r + e * s1 * b1 * b2 * a
    return r, ra, rb


def riemann_laguerre_series(c: TelegraphCoeffs, a: float, b: float, rtol: float = 1e-16) -> float:
    """The un-resummed Laurent pairing; alternating, so only used as a cross-check."""
    b1, b2 = c.beta1_eff, c.beta2_eff
    xarg = b2 * a
    l_prev, l_cur = 0.0, 1.0  # L_{-1}, L_0
    coef = 1.0
    total = coef * l_cur
    for n in range(1, _SERIES_CAP):
        l_prev, l_cur = l_cur, ((2 * n - 1 - xarg) * l_cur - (n - 1) * l_prev) / n
        coef *= -b1 * b / n
        term = coef * l_cur
        total += term
        if n > 2 * (b1 * b + xarg) + 10 and abs(term) <= rtol * max(abs(total), 1e-300):
            return math.exp((b1 - b2) * b - b1 * a) * total
    raise RiemannEvaluationError("Laguerre residue series did not converge")


def riemann_contour_quadrature(c: TelegraphCoeffs, X, Y, x, y, nodes: int = 4096, radius: float = None) -> float:
    """Trapezoid rule for the contour integral on a circle around -beta1."""
    b1, b2 = c.beta1_eff, c.beta2_eff
    a = float(X) - float(x)
    b = float(Y) - float(y)
    r = abs(b2 - b1) / 2 if radius is None else radius
    theta = 2 * np.pi * np.arange(nodes) / nodes
    dz = r * np.exp(1j * theta)
    z = -b1 + dz
    f = (b2 - b1) / ((z + b1) * (z + b2)) * np.exp(
        (b1 - b2) * (-a * z / (z + b2) + b * z / (z + b1))
    )
    return float(np.real(np.mean(f * dz)))


class RiemannEvaluator:
    """Precomputed coefficients for evaluating R and R^d at many points."""

    def __init__(self, coeffs: TelegraphCoeffs):
        self.coeffs = coeffs

    def __call__(self, X, Y, x, y):
        try:
            return riemann_continuum(self.coeffs, X, Y, x, y)
        except RiemannEvaluationError:
            if np.ndim(X) or np.ndim(Y) or np.ndim(x) or np.ndim(y):
                raise
            return riemann_contour_quadrature(self.coeffs, X, Y, x, y)


# ------------------------------------------------------ continuum solve ----

def _boundary_integrands(c: TelegraphCoeffs, chi_b: Profile, psi_b: Profile, shift: float = 0.0):
    b1, b2 = c.beta1_eff, c.beta2_eff

    def g_psi(t):
        return psi_b.slope(t) + b2 * (psi_b(t) - shift)

    def g_chi(t):
        return chi_b.slope(t) + b1 * (chi_b(t) - shift)

    return g_chi, g_psi


def _check_origin(chi_b: Profile, psi_b: Profile) -> None:
    if abs(float(chi_b(0.0)) - float(psi_b(0.0))) > 1e-12:
        raise ValueError(f"boundary mismatch at the origin: chi(0)={chi_b(0.0)}, psi(0)={psi_b(0.0)}")


def solve_telegraph(c: TelegraphCoeffs, chi_b: Profile, psi_b: Profile, X, Y, tol: float = 1e-10):
    """Solution of the homogeneous telegraph equation with u(x,0)=chi_b, u(0,y)=psi_b.

    Vectorized over arrays X, Y.
    """
    u, _, _ = solve_telegraph_grad(c, chi_b, psi_b, X, Y, tol=tol, with_grad=False)
    return u


def solve_telegraph_grad(c: TelegraphCoeffs, chi_b: Profile, psi_b: Profile, X, Y, tol: float = 1e-10, with_grad: bool = True):
    """Solution and its partials u_X, u_Y from the Riemann representation.

    The partials differentiate the representation under the integral sign;
    the moving endpoints contribute R(X,Y;X,0) g_chi(X) = e^{-beta2 Y} g_chi(X)
    and R(X,Y;0,Y) g_psi(Y) = e^{-beta1 X} g_psi(Y).
    """
    _check_origin(chi_b, psi_b)
    Xa, Ya = np.broadcast_arrays(np.asarray(X, dtype=float), np.asarray(Y, dtype=float))
    shape = Xa.shape
    Xa, Ya = np.atleast_1d(Xa), np.atleast_1d(Ya)
    Xf, Yf = Xa.ravel(), Ya.ravel()
    if np.any(Xf < 0) or np.any(Yf < 0):
        raise ValueError("solution is defined on the quadrant X, Y >= 0")
    # constants solve the equation, so integrate the data minus psi(0): the
    # psi(0) R(X,Y;0,0) term drops out and constant data come out exact
    psi0 = float(psi_b(0.0))
    g_chi, g_psi = _boundary_integrands(c, chi_b, psi_b, shift=psi0)
    b1, b2 = c.beta1_eff, c.beta2_eff

    def along_y(t):
        # y = Y t on [0, Y]; kernel R(X,Y;0,y): a = X, b = Y (1 - t)
        tt = t[None, :]
        yy = Yf[:, None] * tt
        r, ra, rb = riemann_continuum_grad(c, np.broadcast_to(Xf[:, None], yy.shape), Yf[:, None] - yy)
        g = g_psi(yy)
        return np.stack([r * g, ra * g, rb * g]) * Yf[None, :, None]

    def along_x(t):
        tt = t[None, :]
        xx = Xf[:, None] * tt
        r, ra, rb = riemann_continuum_grad(c, Xf[:, None] - xx, np.broadcast_to(Yf[:, None], xx.shape))
        g = g_chi(xx)
        return np.stack([r * g, ra * g, rb * g]) * Xf[None, :, None]

    try:
        iy = adaptive_gl(along_y, 0.0, 1.0, tol=tol / 2)
        ix = adaptive_gl(along_x, 0.0, 1.0, tol=tol / 2)
    except QuadratureError as exc:
        raise QuadratureError(f"telegraph solve failed: {exc}") from exc
    u = psi0 + iy[0] + ix[0]
    def shaped(arr):
        return float(arr[0]) if shape == () else arr.reshape(shape)

    if not with_grad:
        return shaped(u), None, None
    ux = iy[1] + ix[1] + np.exp(-b2 * Yf) * g_chi(Xf)
    uy = iy[2] + ix[2] + np.exp(-b1 * Xf) * g_psi(Yf)
    return shaped(u), shaped(ux), shaped(uy)


def exp_profile(base: float, profile: Profile) -> Profile:
    """The profile t -> base**profile(t) with its derivative."""
    lb = math.log(base)
    return Profile(
        f"{base:g}^{profile.name}",
        lambda t: np.exp(lb * profile(t)),
        lambda t: lb * profile.slope(np.asarray(t, dtype=float)) * np.exp(lb * profile(t)),
    )


class MeanField:
    """Hydrodynamic limit: frak_q^{h} solves the telegraph equation with
    coefficients (I beta1, J beta2) and boundary frak_q^{chi}, frak_q^{psi}.
    """

    def __init__(self, I: int, beta1: float, J: int, beta2: float, chi: Profile, psi: Profile, tol: float = 1e-10):
        self.I, self.J, self.beta1, self.beta2 = I, J, beta1, beta2
        self.coeffs = TelegraphCoeffs.for_model(I, beta1, J, beta2)
        self.frak_q = math.exp(beta1 - beta2)
        self.chi, self.psi = chi, psi
        self.chi_b = exp_profile(self.frak_q, chi)
        self.psi_b = exp_profile(self.frak_q, psi)
        self.tol = tol

    def qh(self, x, y):
        return solve_telegraph(self.coeffs, self.chi_b, self.psi_b, x, y, tol=self.tol)

    def qh_grad(self, x, y):
        return solve_telegraph_grad(self.coeffs, self.chi_b, self.psi_b, x, y, tol=self.tol)

    def h(self, x, y):
        return np.log(self.qh(x, y)) / (self.beta1 - self.beta2)

    def noise_coefficient(self, x, y):
        """(b1+b2) q_x q_y + J (b2-b1) b2 q q_x + I (b1-b2) b1 q q_y at (x, y)."""
        qv, qx, qy = self.qh_grad(x, y)
        b1, b2 = self.beta1, self.beta2
        return (b1 + b2) * qx * qy + self.J * (b2 - b1) * b2 * qv * qx + self.I * (b1 - b2) * b1 * qv * qy


def mean_field_fd(mf: MeanField, x: float, y: float, steps=(1e-3, 5e-4)):
    """Central differences with one Richardson step; an independent route to (q_x, q_y)."""
    def cd(fx, h):
        return (fx(h) - fx(-h)) / (2 * h)

    h1, h2 = steps
    fx = lambda h: float(mf.qh(x + h, y))
    fy = lambda h: float(mf.qh(x, y + h))
    r = (h1 / h2) ** 2
    dx = (r * cd(fx, h2) - cd(fx, h1)) / (r - 1)
    dy = (r * cd(fy, h2) - cd(fy, h1)) / (r - 1)
    return dx, dy


class NegativeNoiseError(RuntimeError):
    pass


def clt_covariance(mf: MeanField, X1: float, Y1: float, X2: float, Y2: float, tol: float = 1e-6, n_start: int = 16, n_max: int = 256) -> float:
    """Covariance of the limiting Gaussian field at (X1,Y1) and (X2,Y2).

    Tensor Gauss-Legendre over the common rectangle [0, X1^X2] x [0, Y1^Y2],
    doubling the order until the relative change is below ``tol``.
    """
    Xm, Ym = min(X1, X2), min(Y1, Y2)
    if Xm <= 0 or Ym <= 0:
        return 0.0
    c = mf.coeffs

    def integrand(gx, gy):
        theta = mf.noise_coefficient(gx, gy)
        scale = max(1.0, float(np.max(np.abs(theta))))
        if np.any(theta < -1e-9 * scale):
            k = np.unravel_index(np.argmin(theta), theta.shape)
            raise NegativeNoiseError(
                f"noise coefficient {theta[k]:.3g} < 0 at (x, y) = ({gx[k]:.4f}, {gy[k]:.4f})"
            )
        r1 = riemann_continuum(c, X1, Y1, gx, gy)
        r2 = riemann_continuum(c, X2, Y2, gx, gy)
        return r1 * r2 * theta

    n = n_start
    prev = tensor_gl(integrand, 0.0, Xm, 0.0, Ym, n)
    while n < n_max:
        n *= 2
        cur = tensor_gl(integrand, 0.0, Xm, 0.0, Ym, n)
        if abs(cur - prev) <= tol * max(abs(cur), 1e-300) or abs(cur - prev) < 1e-15:
            return cur
        prev = cur
    raise QuadratureError(f"covariance quadrature did not reach rel. tol {tol} with {n_max} nodes")


# ----------------------------------------------------------- discrete R ----

def riemann_discrete_table(d: DiscreteCoeffs, A: int, B: int) -> List[list]:
    """Table G[a][b] = R^d(X, Y; X - a, Y - b) for 0 <= a <= A, 0 <= b <= B.

    The discrete Riemann function only depends on the offsets.  It is 1 at
    the origin, b1^a on b = 0, b2^b on a = 0, and satisfies the homogeneous
    discrete telegraph recurrence elsewhere.  Works for Fractions and floats.
    """
    if A < 0 or B < 0:
        raise ValueError("offsets must be nonnegative")
    b1, b2 = d.b1, d.b2
    c = b1 + b2 - 1
    one = b1 * 0 + 1
    G = [[one] * (B + 1) for _ in range(A + 1)]
    for bb in range(1, B + 1):
        G[0][bb] = G[0][bb - 1] * b2
    for a in range(1, A + 1):
        prev, row = G[a - 1], G[a]
        row[0] = prev[0] * b1
        for bb in range(1, B + 1):
            row[bb] = b1 * prev[bb] + b2 * row[bb - 1] - c * prev[bb - 1]
    return G


def riemann_discrete(d: DiscreteCoeffs, X: int, Y: int, x: int, y: int):
    if not (0 <= x <= X and 0 <= y <= Y):
        raise ValueError("need 0 <= x <= X and 0 <= y <= Y")
    return riemann_discrete_table(d, X - x, Y - y)[X - x][Y - y]


def riemann_discrete_residue(d: DiscreteCoeffs, a: int, b: int):
    """R^d at offsets (a, b) by residue extraction at z0 = -1/(b2 (1 - b1)).

    The pole has order a + 1; the residue is a Taylor coefficient of a
    product of polynomials and a negative binomial power series.  Exact for
    Fractions.  This is a verification route only; production uses the table.
    """
    b1, b2 = d.b1, d.b2
    k = b2 * (1 - b1)
    z0 = -1 / k

    def lin(c0, c1):  # c0 + c1 t as a truncated series
        s = [c0, c1] + [c0 * 0] * max(0, a - 1)
        return s[: a + 1]

    def mul(s, t):
        out = [s[0] * 0] * (a + 1)
        for i, si in enumerate(s):
            if si == 0:
                continue
            for j in range(a + 1 - i):
                out[i + j] += si * t[j]
        return out

    series = [b1 * 0 + 1] + [b1 * 0] * a
    p1 = lin(1 + b1 * (1 - b1) * z0, b1 * (1 - b1))
    p2 = lin(1 + b2 * (1 - b2) * z0, b2 * (1 - b2))
    for _ in range(a):
        series = mul(series, p1)
    for _ in range(b):
        series = mul(series, p2)
    d0 = 1 + b1 * (1 - b2) * z0
    r = b1 * (1 - b2) / d0
    m = b + 1
    inv = []
    coef = d0 ** (-m)
    for j in range(a + 1):
        inv.append(coef)
        coef = coef * (-r) * (m + j) / (j + 1)
    series = mul(series, inv)
    return (b2 - b1) / k ** (a + 1) * series[a]


def solve_discrete_telegraph(d: DiscreteCoeffs, chi: Sequence, psi: Sequence, g, X: int, Y: int) -> List[list]:
    """Grid Phi[x][y], 0 <= x <= X, 0 <= y <= Y, from the Riemann representation.

    ``chi[x]`` and ``psi[y]`` are boundary values with chi[0] == psi[0];
    ``g[x][y]`` is the source for 1 <= x <= X, 1 <= y <= Y (index 0 unused,
    ``g=None`` means no source).  Cost is O(X^2 Y^2); meant for small grids.
    """
    if chi[0] != psi[0]:
        raise ValueError("chi(0) must equal psi(0)")
    b1, b2 = d.b1, d.b2
    G = riemann_discrete_table(d, X, Y)
    zero = b1 * 0
    phi = [[zero] * (Y + 1) for _ in range(X + 1)]
    dpsi = [None] + [psi[yy] - b2 * psi[yy - 1] for yy in range(1, Y + 1)]
    dchi = [None] + [chi[xx] - b1 * chi[xx - 1] for xx in range(1, X + 1)]
    for Xc in range(X + 1):
        for Yc in range(Y + 1):
            val = psi[0] * G[Xc][Yc]
            for yy in range(1, Yc + 1):
                val += G[Xc][Yc - yy] * dpsi[yy]
            for xx in range(1, Xc + 1):
                val += G[Xc - xx][Yc] * dchi[xx]
            if g is not None:
                for xx in range(1, Xc + 1):
                    for yy in range(1, Yc + 1):
                        gv = g[xx][yy]
                        if gv != 0:
                            val += G[Xc - xx][Yc - yy] * gv
            phi[Xc][Yc] = val
    return phi


def discrete_residual(d: DiscreteCoeffs, phi, g, X: int, Y: int):
    """Pointwise residual of the discrete telegraph equation on the grid."""
    b1, b2 = d.b1, d.b2
    out = []
    for xx in range(X):
        for yy in range(Y):
            lhs = phi[xx + 1][yy + 1] - b1 * phi[xx][yy + 1] - b2 * phi[xx + 1][yy] + (b1 + b2 - 1) * phi[xx][yy]
            rhs = g[xx + 1][yy + 1] if g is not None else 0
            out.append(lhs - rhs)
    return out
