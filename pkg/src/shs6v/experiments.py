"""Experiment drivers behind the command line.

Each ``run_*`` function takes an :class:`ExperimentConfig`, writes its CSV
tables (and SVG figures when ``format == "svg"``) into ``cfg.out`` together
with a ``manifest.json``, and returns a :class:`Report`.
"""
from __future__ import annotations

import dataclasses
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .fourpoint import (
    LocalStencil,
    conditional_abs_moment,
    conditional_m2_xi,
    conditional_mean_xi,
    gamma2_from_m2,
    max_abs_remainder,
    stencils,
)
from .io import write_csv, write_manifest
from .profiles import Profile, empty, linear, packed, piecewise_linear
from .qnum import to_scalar
from .sampler import RngStream, _interp, evaluate_replicas, make_boundary, sample_quadrant
from .scaling import make_scaling
from .telegraph import (
    DiscreteCoeffs,
    MeanField,
    TelegraphCoeffs,
    clt_covariance,
    riemann_continuum,
    riemann_contour_quadrature,
    riemann_discrete_residue,
    riemann_discrete_table,
)
from .weights import (
    ModelParams,
    VertexConfig,
    all_configs,
    l1_weight,
    lambda_weight,
    lJ_weight_fused,
    lJ_weight_fused_reversed,
    lJ_weight_hypergeom,
    row_distribution,
    weight_table,
)

log = logging.getLogger(__name__)

KINDS = ("identity-check", "weights-dump", "four-point-scan", "riemann", "sample", "lln", "clt")

DEFAULT_TOLERANCES = {
    "quad_inner": 1e-10,
    "quad_outer": 1e-6,
    "slope_band": 0.3,
    "slope_target": -4.0,
    "riemann_rel": 1e-10,
    "discrete_abs": 1e-12,
    "clt_sigmas": 3.0,
    "lln_drop": 1.5,
}

# desk-scale limits; larger values run but are logged
DESK_L = 1024
DESK_REPLICAS = 5000


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    kind: str = "lln"
    L: List[int] = field(default_factory=lambda: [64, 128, 256, 512])
    beta1: float = 2.0
    beta2: float = 1.0
    I: int = 1
    J: int = 1
    boundary: Dict = field(default_factory=lambda: {"kind": "packed"})
    replicas: int = 100
    base_seed: int = 0
    points: List[List[float]] = field(default_factory=lambda: [[1.0, 1.0], [0.5, 1.0]])
    A: float = 1.0
    B: float = 1.0
    grid: int = 9
    out: str = "out"
    threads: int = 1
    format: str = "csv"
    tolerances: Dict = field(default_factory=dict)
    # identity-check
    I_max: int = 3
    J_max: int = 3
    corrupt_lambda: bool = False
    # weights-dump: exact parameters as strings such as "2" and "-1/64"
    q: Optional[str] = None
    alpha: Optional[str] = None
    # four-point-scan
    ell_max: int = 6
    # sample
    replica: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        self.L = [int(v) for v in (self.L if isinstance(self.L, (list, tuple)) else [self.L])]
        if not self.L or any(b <= a for a, b in zip(self.L, self.L[1:])):
            raise ConfigError("L list must be nonempty and strictly increasing")
        if self.replicas < 1:
            raise ConfigError("replicas must be >= 1")
        if self.format not in ("csv", "svg"):
            raise ConfigError("format must be csv or svg")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys {sorted(unknown)}")
        if max(self.L) > DESK_L or self.replicas > DESK_REPLICAS:
            log.warning("configuration exceeds desk-scale defaults (L <= %d, replicas <= %d)", DESK_L, DESK_REPLICAS)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
        return cls.from_dict(data)

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class Report:
    kind: str
    files: List[str] = field(default_factory=list)
    summary: Dict = field(default_factory=dict)
    ok: bool = True


def _outdir(cfg: ExperimentConfig) -> Path:
    path = Path(cfg.out)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {path}: {exc.strerror}") from exc
    return path


def _finish(cfg: ExperimentConfig, report: Report, seeds: dict) -> Report:
    out = _outdir(cfg)
    manifest = {
        "command": cfg.kind,
        "config": cfg.to_dict(),
        "version": __version__,
        "seeds": seeds,
        "tolerances": {k: cfg.tol(k) for k in DEFAULT_TOLERANCES},
        "outputs": [Path(f).name for f in report.files],
        "summary": report.summary,
        "ok": report.ok,
    }
    write_manifest(out / "manifest.json", manifest)
    return report


# -------------------------------------------------------------- profiles ----

def _profile_from_entry(entry) -> Profile:
    if isinstance(entry, (int, float)):
        return linear(float(entry))
    if isinstance(entry, dict) and "slope" in entry:
        return linear(float(entry["slope"]))
    if isinstance(entry, dict) and "breaks" in entry:
        return piecewise_linear(entry["breaks"], entry["slopes"])
    raise ConfigError(f"cannot read profile {entry!r}")


def boundary_profiles(cfg: ExperimentConfig):
    """Macroscopic (chi, psi) matching the configured boundary."""
    b = cfg.boundary
    kind = b.get("kind", "packed")
    if kind == "packed":
        return packed(cfg.J)
    if kind == "empty":
        return empty()
    if kind == "bernoulli":
        return linear(-cfg.I * float(b.get("rho_v", 0.5))), linear(cfg.J * float(b.get("rho_h", 0.5)))
    if kind == "from_profile":
        return _profile_from_entry(b["chi"]), _profile_from_entry(b["psi"])
    raise ConfigError(f"unknown boundary kind {kind!r}")


def _boundary_for(cfg: ExperimentConfig, L: int, X: int, Y: int):
    b = cfg.boundary
    kind = b.get("kind", "packed")
    chi, psi = boundary_profiles(cfg)
    # a random boundary is drawn once per L from a seed derived from base_seed
    rng = RngStream((cfg.base_seed ^ 0x5EED0000) + L)
    return make_boundary(
        kind, X, Y, cfg.I, cfg.J,
        rho_v=float(b.get("rho_v", 0.5)), rho_h=float(b.get("rho_h", 0.5)),
        chi=chi, psi=psi, L=L, rng=rng,
    )


# ----------------------------------------------------------- identities ----

def identity_parameter_points(I: int, J: int):
    """Five rational (q, alpha) points in each stochastic branch for spins (I, J)."""
    bound_exp = -(I + J - 1)
    pts = []
    for q, t in zip(["2", "3/2", "3", "5/4", "7/3"], ["1/2", "1/3", "2/3", "1/5", "3/4"]):
        qf = Fraction(q)
        pts.append(("q>1", qf, -Fraction(t) * qf ** bound_exp))
    for q, s in zip(["1/2", "2/3", "1/3", "4/5", "3/7"], ["2", "3/2", "3", "5/4", "7"]):
        qf = Fraction(q)
        pts.append(("q<1", qf, -Fraction(s) * qf ** bound_exp))
    return pts


def corrupted_lambda(p: ModelParams, h: int, bits):
    """Lambda with the weights of (1,0,...,0) and (0,...,0,1) exchanged at h = 1."""
    J = len(bits)
    if h == 1 and J >= 2:
        first = tuple([1] + [0] * (J - 1))
        last = tuple([0] * (J - 1) + [1])
        if bits == first:
            return lambda_weight(p, h, last)
        if bits == last:
            return lambda_weight(p, h, first)
    return lambda_weight(p, h, bits)


def _m2_closed_form(p: ModelParams, s: LocalStencil):
    q, a, I = p.q, p.alpha, p.I
    v, H = s.v, s.H00
    if s.h == 0:
        return a * (q - 1) ** 2 * q ** (-2 * v) * (1 - q ** v) * (1 + a * q ** v) / (1 + a) ** 2 * q ** (2 * H)
    return (q - 1) ** 2 * q ** (-2 * (I + v)) * (q ** I - q ** v) * (a * q ** I + q ** v) / (1 + a) ** 2 * q ** (2 * H)


def identity_rows(I_max: int = 3, J_max: int = 3, corrupt: bool = False):
    """Run the exact identity suite; yield (identity, I, J, branch, q, alpha, passed, detail)."""
    lam = corrupted_lambda if corrupt else None
    for I in range(1, I_max + 1):
        for J in range(1, J_max + 1):
            for branch, q, alpha in identity_parameter_points(I, J):
                p = ModelParams(q, alpha, I, J)
                base = (I, J, branch, str(q), str(alpha))

                bad = [
                    c for c in all_configs(I, J)
                    if not (lJ_weight_hypergeom(p, c) == lJ_weight_fused(p, c, lam) == lJ_weight_fused_reversed(p, c))
                ]
                yield ("three-route-agreement",) + base + (not bad, f"{len(bad)} mismatches")

                worst = None
                for i1 in range(I + 1):
                    for j1 in range(J + 1):
                        ws = [lJ_weight_fused(p, VertexConfig(i1, j1, i2, j2), lam) for i2 in range(I + 1) for j2 in range(J + 1)]
                        if sum(ws) != 1 or min(ws) < 0:
                            worst = (i1, j1)
                yield ("stochastic-rows",) + base + (worst is None, "ok" if worst is None else f"row {worst}")

                bad_mean = [s for s in stencils(p, range(-2, 3)) if conditional_mean_xi(p, s) != 0]
                yield ("four-point-mean-zero",) + base + (not bad_mean, f"{len(bad_mean)} nonzero")

                if J == 1:
                    bad1 = [
                        c for c in all_configs(I, 1)
                        if lJ_weight_hypergeom(p, c) != l1_weight(p, p.alpha, c.i1, c.j1, c.i2, c.j2)
                    ]
                    yield ("j1-reduction",) + base + (not bad1, f"{len(bad1)} mismatches")
                    bad2 = [s for s in stencils(p, range(-3, 4)) if conditional_m2_xi(p, s) != _m2_closed_form(p, s)]
                    yield ("m2-closed-form",) + base + (not bad2, f"{len(bad2)} mismatches")
                    if I == 2:
                        g1, g2 = gamma2_from_m2(p, 1), gamma2_from_m2(p, 2)
                        yield ("no-exact-quadratic",) + base + (g1 != g2, f"gamma2(v=1)-gamma2(v=2)={g1 - g2}")


def run_identity_check(cfg: ExperimentConfig) -> Report:
    out = _outdir(cfg)
    rows = list(identity_rows(cfg.I_max, cfg.J_max, cfg.corrupt_lambda))
    table = [r[:6] + ("PASS" if r[6] else "FAIL", r[7]) for r in rows]
    path = write_csv(out / "identity_check.csv", ["identity", "I", "J", "branch", "q", "alpha", "status", "detail"], table)
    failed = sum(1 for r in rows if not r[6])
    report = Report(cfg.kind, [str(path)], {"checks": len(rows), "failed": failed}, ok=failed == 0)
    return _finish(cfg, report, {})


# -------------------------------------------------------------- weights ----

def _model_params(cfg: ExperimentConfig) -> ModelParams:
    if cfg.q is not None and cfg.alpha is not None:
        return ModelParams(to_scalar(cfg.q, True), to_scalar(cfg.alpha, True), cfg.I, cfg.J)
    return make_scaling(cfg.L[0], cfg.beta1, cfg.beta2, cfg.I, cfg.J).params


def run_weights_dump(cfg: ExperimentConfig) -> Report:
    out = _outdir(cfg)
    p = _model_params(cfg)
    rows = []
    sums = {}
    for i1, j1, i2, j2, w in weight_table(p):
        exact = str(w) if isinstance(w, Fraction) else ""
        rows.append((i1, j1, i2, j2, w, exact))
        sums[(i1, j1)] = sums.get((i1, j1), 0) + w
    path = write_csv(out / "weights.csv", ["i1", "j1", "i2", "j2", "weight", "exact"], rows)
    worst = max(abs(float(s) - 1) for s in sums.values())
    report = Report(cfg.kind, [str(path)], {"max_row_sum_deviation": worst, "q": str(p.q), "alpha": str(p.alpha)})
    return _finish(cfg, report, {})


# ------------------------------------------------------ four-point scan ----

def fit_loglog(xs, ys):
    slope, intercept = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope), float(intercept)


def four_point_rows(cfg: ExperimentConfig):
    rows = []
    for L in cfg.L:
        sc = make_scaling(L, cfg.beta1, cfg.beta2, cfg.I, cfg.J)
        heights = (-L, 0, L)
        sts = list(stencils(sc.params, heights))
        max_R = max_abs_remainder(sc, heights)
        m2 = max(conditional_m2_xi(sc.params, s) for s in sts) * L ** 3
        moments = [max(conditional_abs_moment(sc.params, s, ell) for s in sts) * L ** (ell + 1) for ell in range(1, cfg.ell_max + 1)]
        rows.append([L, max_R, m2] + moments)
    return rows


def run_four_point_scan(cfg: ExperimentConfig) -> Report:
    out = _outdir(cfg)
    rows = four_point_rows(cfg)
    header = ["L", "max_abs_R", "m2_times_L3"] + [f"moment{ell}_times_L{ell + 1}" for ell in range(1, cfg.ell_max + 1)]
    files = [str(write_csv(out / "four_point_scan.csv", header, rows))]
    Ls = [r[0] for r in rows]
    fits = [("max_abs_R",) + fit_loglog(Ls, [r[1] for r in rows])]
    for k, name in enumerate(header[2:], start=2):
        fits.append((name,) + fit_loglog(Ls, [r[k] for r in rows]))
    files.append(str(write_csv(out / "four_point_fit.csv", ["quantity", "slope", "intercept"], fits)))
    slope = fits[0][1]
    ok = abs(slope - cfg.tol("slope_target")) <= cfg.tol("slope_band")
    if cfg.format == "svg":
        from .plotting import plot_remainder

        files.append(str(plot_remainder(out / "four_point_scan.svg", Ls, [r[1] for r in rows], slope, fits[0][2])))
    report = Report(cfg.kind, files, {"remainder_slope": slope}, ok=ok)
    return _finish(cfg, report, {})


# --------------------------------------------------------------- riemann ----

def riemann_rows(cfg: ExperimentConfig):
    coeffs = TelegraphCoeffs.for_model(cfg.I, cfg.beta1, cfg.J, cfg.beta2)
    offs = [0.4, 0.8, 1.2, 1.6, 2.0]
    cont = []
    for a in offs:
        for b in offs:
            s = riemann_continuum(coeffs, a, b, 0.0, 0.0)
            qd = riemann_contour_quadrature(coeffs, a, b, 0.0, 0.0)
            cont.append((a, b, s, qd, abs(s - qd) / abs(qd)))
    disc = []
    scal = []
    gx = np.linspace(0, cfg.A, 5)
    gy = np.linspace(0, cfg.B, 5)
    for L in cfg.L:
        sc = make_scaling(L, cfg.beta1, cfg.beta2, cfg.I, cfg.J)
        dfl = DiscreteCoeffs(sc.b1, sc.b2)
        dex = DiscreteCoeffs(Fraction(sc.b1), Fraction(sc.b2))
        G8 = riemann_discrete_table(dfl, 8, 8)
        delta = max(abs(G8[a][b] - float(riemann_discrete_residue(dex, a, b))) for a in range(9) for b in range(9))
        disc.append((L, sc.b1, sc.b2, delta))
        A, B = int(round(L * cfg.A)), int(round(L * cfg.B))
        G = riemann_discrete_table(dfl, A, B)
        err = 0.0
        for a in gx:
            for b in gy:
                ia, ib = int(round(L * a)), int(round(L * b))
                err = max(err, abs(G[ia][ib] - riemann_continuum(coeffs, ia / L, ib / L, 0.0, 0.0)))
        scal.append((L, err))
    return cont, disc, scal


def run_riemann(cfg: ExperimentConfig) -> Report:
    out = _outdir(cfg)
    cont, disc, scal = riemann_rows(cfg)
    files = [
        str(write_csv(out / "riemann_continuum.csv", ["a", "b", "series", "quadrature", "rel_delta"], cont)),
        str(write_csv(out / "riemann_discrete.csv", ["L", "b1", "b2", "max_abs_residue_delta"], disc)),
        str(write_csv(out / "riemann_scaling.csv", ["L", "max_abs_error"], scal)),
    ]
    if cfg.format == "svg":
        from .plotting import plot_riemann_scaling

        files.append(str(plot_riemann_scaling(out / "riemann_scaling.svg", [r[0] for r in scal], [r[1] for r in scal])))
    worst = max(r[4] for r in cont)
    ok = worst <= cfg.tol("riemann_rel") and max(r[3] for r in disc) <= cfg.tol("discrete_abs")
    report = Report(cfg.kind, files, {"max_rel_delta": worst, "max_discrete_delta": max(r[3] for r in disc)}, ok=ok)
    return _finish(cfg, report, {})


# ---------------------------------------------------------------- sample ----

def run_sample(cfg: ExperimentConfig) -> Report:
    out = _outdir(cfg)
    L = cfg.L[0]
    sc = make_scaling(L, cfg.beta1, cfg.beta2, cfg.I, cfg.J)
    X, Y = int(round(L * cfg.A)), int(round(L * cfg.B))
    b = _boundary_for(cfg, L, X, Y)
    rng = RngStream.for_replica(cfg.base_seed, cfg.replica)
    f = sample_quadrant(sc.params, b, X, Y, rng)
    f.check(cfg.I, cfg.J)
    files = [str(out / "height_field.csv"), str(out / "height_field.bin")]
    f.to_csv(files[0])
    f.save_binary(files[1])
    if cfg.format == "svg":
        from .plotting import plot_height

        files.append(str(plot_height(out / "height_field.svg", f.H)))
    report = Report(cfg.kind, files, {"X": X, "Y": Y, "H_corner": int(f.H[X, Y])})
    return _finish(cfg, report, {"replica": cfg.replica, "stream_seed": rng.seed})


# ------------------------------------------------------------------- LLN ----

def lln_rows(cfg: ExperimentConfig):
    chi, psi = boundary_profiles(cfg)
    mf = MeanField(cfg.I, cfg.beta1, cfg.J, cfg.beta2, chi, psi, tol=cfg.tol("quad_inner"))
    gx = np.linspace(0, cfg.A, cfg.grid)
    gy = np.linspace(0, cfg.B, cfg.grid)
    GX, GY = np.meshgrid(gx, gy, indexing="ij")
    h = mf.h(GX, GY)
    rows = []
    for L in cfg.L:
        sc = make_scaling(L, cfg.beta1, cfg.beta2, cfg.I, cfg.J)
        X, Y = int(round(L * cfg.A)), int(round(L * cfg.B))
        b = _boundary_for(cfg, L, X, Y)

        def sup_error(H):
            vals = _interp(H, GX * L, GY * L) / L
            return np.max(np.abs(vals - h[None]), axis=(1, 2))

        errs = evaluate_replicas(sc.params, b, X, Y, cfg.base_seed, cfg.replicas, sup_error, threads=cfg.threads)
        rows.append((L, cfg.replicas, float(errs.mean()), float(errs.std(ddof=1)) if len(errs) > 1 else 0.0))
    return rows


def run_lln(cfg: ExperimentConfig) -> Report:
    out = _outdir(cfg)
    rows = lln_rows(cfg)
    files = [str(write_csv(out / "lln.csv", ["L", "replicas", "mean_sup_error", "std_sup_error"], rows))]
    means = [r[2] for r in rows]
    monotone = all(b < a for a, b in zip(means, means[1:])) or all(m == 0 for m in means)
    if cfg.format == "svg":
        from .plotting import plot_lln

        files.append(str(plot_lln(out / "lln.svg", [r[0] for r in rows], means, [r[3] for r in rows], f"I={cfg.I}, J={cfg.J}")))
    report = Report(cfg.kind, files, {"mean_sup_error": dict(zip(map(str, cfg.L), means)), "monotone": monotone}, ok=monotone)
    return _finish(cfg, report, {"base_seed": cfg.base_seed, "replica_seed_rule": "base_seed XOR r"})


# ------------------------------------------------------------------- CLT ----

MIN_CLT_REPLICAS = 100


def clt_rows(cfg: ExperimentConfig):
    if cfg.replicas < MIN_CLT_REPLICAS:
        raise ConfigError(f"clt needs at least {MIN_CLT_REPLICAS} replicas for a covariance estimate")
    if len(cfg.points) < 2:
        raise ConfigError("clt needs at least two evaluation points")
    pts = np.asarray(cfg.points, dtype=float)
    chi, psi = boundary_profiles(cfg)
    mf = MeanField(cfg.I, cfg.beta1, cfg.J, cfg.beta2, chi, psi, tol=cfg.tol("quad_inner"))
    log_fq = cfg.beta1 - cfg.beta2
    qh = mf.qh(pts[:, 0], pts[:, 1])
    pairs = [(i, j) for i in range(len(pts)) for j in range(i, len(pts))]
    theory = {}
    for i, j in pairs:
        theory[(i, j)] = clt_covariance(mf, pts[i, 0], pts[i, 1], pts[j, 0], pts[j, 1], tol=cfg.tol("quad_outer"))
    rows = []
    A = max(cfg.A, float(pts[:, 0].max()))
    B = max(cfg.B, float(pts[:, 1].max()))
    for L in cfg.L:
        sc = make_scaling(L, cfg.beta1, cfg.beta2, cfg.I, cfg.J)
        X, Y = int(math.ceil(L * A)), int(math.ceil(L * B))
        b = _boundary_for(cfg, L, X, Y)
        Hs = evaluate_replicas(
            sc.params, b, X, Y, cfg.base_seed, cfg.replicas,
            lambda H: _interp(H, pts[:, 0] * L, pts[:, 1] * L), threads=cfg.threads,
        )
        n = Hs.shape[0]
        U = math.sqrt(L) * (sc.q ** Hs - (sc.q ** Hs).mean(axis=0))
        Hc = (Hs - Hs.mean(axis=0)) / math.sqrt(L)
        for i, j in pairs:
            prod = U[:, i] * U[:, j]
            emp = prod.sum() / (n - 1)
            se = prod.std(ddof=1) / math.sqrt(n)
            th = theory[(i, j)]
            hprod = Hc[:, i] * Hc[:, j]
            h_emp = hprod.sum() / (n - 1)
            h_se = hprod.std(ddof=1) / math.sqrt(n)
            h_th = th / (qh[i] * qh[j] * log_fq ** 2)
            # the floor absorbs quadrature round-off when the field is degenerate
            within = abs(emp - th) <= cfg.tol("clt_sigmas") * se + 1e-12
            rows.append((
                L, pts[i, 0], pts[i, 1], pts[j, 0], pts[j, 1], n,
                float(emp), float(th), float(se), within,
                float(h_emp), float(h_th), float(h_se),
            ))
    return rows


CLT_HEADER = [
    "L", "x1", "y1", "x2", "y2", "replicas",
    "empirical_cov", "theoretical_cov", "standard_error", "within_tolerance",
    "height_empirical_cov", "height_theoretical_cov", "height_standard_error",
]


def run_clt(cfg: ExperimentConfig) -> Report:
    out = _outdir(cfg)
    rows = clt_rows(cfg)
    files = [str(write_csv(out / "clt.csv", CLT_HEADER, rows))]
    if cfg.format == "svg":
        from .plotting import plot_clt

        labels = [f"L={r[0]} ({r[1]:g},{r[2]:g})x({r[3]:g},{r[4]:g})" for r in rows]
        files.append(str(plot_clt(out / "clt.svg", labels, [r[6] for r in rows], [r[8] for r in rows], [r[7] for r in rows])))
    ok = all(r[9] for r in rows)
    report = Report(cfg.kind, files, {"all_within_tolerance": ok}, ok=ok)
    return _finish(cfg, report, {"base_seed": cfg.base_seed, "replica_seed_rule": "base_seed XOR r"})


RUNNERS = {
    "identity-check": run_identity_check,
    "weights-dump": run_weights_dump,
    "four-point-scan": run_four_point_scan,
    "riemann": run_riemann,
    "sample": run_sample,
    "lln": run_lln,
    "clt": run_clt,
}


def run(cfg: ExperimentConfig) -> Report:
    return RUNNERS[cfg.kind](cfg)
