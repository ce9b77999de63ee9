"""Sampling the stochastic path ensemble on a rectangle and its height function.

Vertex (x, y) draws its outputs from the transition table by inverse CDF
using one uniform U[x, y] taken from the replica's own random stream.  The
uniform attached to a vertex does not depend on the order in which vertices
are visited, so the sweep is free to process a whole anti-diagonal (and a
whole batch of replicas) at once without changing any sample.
"""
from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional, Sequence

import numpy as np

from .profiles import Profile, check_cone
from .weights import ModelParams, transition_table


class BoundaryError(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryCondition:
    """Lines entering (x, 0) from below and (0, y) from the left."""

    v_bottom: np.ndarray
    h_left: np.ndarray

    def check(self, I: int, J: int, X: int, Y: int) -> None:
        if len(self.v_bottom) < X or len(self.h_left) < Y:
            raise BoundaryError(f"boundary covers {len(self.v_bottom)} x {len(self.h_left)}, need {X} x {Y}")
        v = np.asarray(self.v_bottom[:X])
        h = np.asarray(self.h_left[:Y])
        if v.size and (v.min() < 0 or v.max() > I):
            raise BoundaryError(f"bottom line counts must lie in [0, {I}]")
        if h.size and (h.min() < 0 or h.max() > J):
            raise BoundaryError(f"left line counts must lie in [0, {J}]")


class RngStream:
    """Counter-based (Philox) stream keyed by a 64-bit seed."""

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.Philox(key=self.seed))

    @classmethod
    def for_replica(cls, base_seed: int, replica: int) -> "RngStream":
        return cls(int(base_seed) ^ int(replica))

    def uniforms(self, X: int, Y: int) -> np.ndarray:
        """One uniform per vertex, laid out as U[x, y]."""
        return self._gen.random((X, Y))

    def generator(self) -> np.random.Generator:
        return self._gen


@dataclass
class HeightField:
    """Integer heights H[x, y] on [0, X] x [0, Y]."""

    H: np.ndarray

    @property
    def X(self) -> int:
        return self.H.shape[0] - 1

    @property
    def Y(self) -> int:
        return self.H.shape[1] - 1

    def check(self, I: int, J: int) -> None:
        H = self.H
        if H[0, 0] != 0:
            raise ValueError("H(0,0) must be 0")
        dv = H[:-1, :] - H[1:, :]
        dh = H[:, 1:] - H[:, :-1]
        if dv.min(initial=0) < 0 or dv.max(initial=0) > I:
            raise ValueError(f"vertical line counts outside [0, {I}]")
        if dh.min(initial=0) < 0 or dh.max(initial=0) > J:
            raise ValueError(f"horizontal line counts outside [0, {J}]")

    def to_csv(self, path) -> None:
        X, Y = self.X, self.Y
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("x,y,H\n")
            for x in range(X + 1):
                fh.write("".join(f"{x},{y},{int(self.H[x, y])}\n" for y in range(Y + 1)))

    def to_bytes(self) -> bytes:
        """Little-endian uint32 X, uint32 Y, then (X+1)(Y+1) int32 heights, x-major."""
        return struct.pack("<II", self.X, self.Y) + np.ascontiguousarray(self.H, dtype="<i4").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "HeightField":
        X, Y = struct.unpack_from("<II", data, 0)
        H = np.frombuffer(data, dtype="<i4", offset=8, count=(X + 1) * (Y + 1)).reshape(X + 1, Y + 1)
        return cls(H.astype(np.int32))

    def save_binary(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())


def height_interpolate(f: HeightField, x, y):
    """Interpolate linearly in x on the two bracketing rows, then in y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(x > f.X) or np.any(y < 0) or np.any(y > f.Y):
        raise ValueError(f"point outside [0,{f.X}] x [0,{f.Y}]")
    return _interp(f.H, x, y)


def _interp(H: np.ndarray, x: np.ndarray, y: np.ndarray):
    """Same as height_interpolate for an array H[..., x, y] (leading batch axes allowed)."""
    X, Y = H.shape[-2] - 1, H.shape[-1] - 1
    x0 = np.clip(np.floor(x).astype(int), 0, max(X - 1, 0))
    y0 = np.clip(np.floor(y).astype(int), 0, max(Y - 1, 0))
    x1 = np.minimum(x0 + 1, X)
    y1 = np.minimum(y0 + 1, Y)
    tx = x - x0
    ty = y - y0
    Hf = H.astype(float)
    lo = (1 - tx) * Hf[..., x0, y0] + tx * Hf[..., x1, y0]
    hi = (1 - tx) * Hf[..., x0, y1] + tx * Hf[..., x1, y1]
    out = (1 - ty) * lo + ty * hi
    return out


# ------------------------------------------------------------ boundaries ----

def greedy_round_increments(targets: np.ndarray, cap: int) -> np.ndarray:
    """Integer increments in [0, cap] whose partial sums track ``targets``.

    ``targets[k]`` is the desired partial sum after k increments
    (targets[0] = 0, nondecreasing with steps <= cap).  Each partial sum
    stays within 1/2 of its target.
    """
    n = len(targets) - 1
    inc = np.zeros(n, dtype=np.int64)
    s = 0
    for k in range(n):
        step = int(np.clip(np.floor(targets[k + 1] - s + 0.5), 0, cap))
        inc[k] = step
        s += step
    return inc


def make_boundary(
    kind: str,
    X: int,
    Y: int,
    I: int,
    J: int,
    *,
    rho_v: float = 0.5,
    rho_h: float = 0.5,
    chi: Optional[Profile] = None,
    psi: Optional[Profile] = None,
    L: Optional[int] = None,
    rng: Optional[RngStream] = None,
) -> BoundaryCondition:
    """Boundary data of a given kind covering X bottom and Y left edges.

    kinds: ``packed`` (v = 0, h = J), ``empty``, ``bernoulli`` (binomial line
    counts with densities rho_v, rho_h), ``from_profile`` (greedy rounding of
    L chi(x/L) and L psi(y/L)).
    """
    if kind == "packed":
        return BoundaryCondition(np.zeros(X, dtype=np.int64), np.full(Y, J, dtype=np.int64))
    if kind == "empty":
        return BoundaryCondition(np.zeros(X, dtype=np.int64), np.zeros(Y, dtype=np.int64))
    if kind == "bernoulli":
        if not (0 <= rho_v <= 1 and 0 <= rho_h <= 1):
            raise BoundaryError("densities must lie in [0, 1]")
        gen = (rng or RngStream(0)).generator()
        return BoundaryCondition(gen.binomial(I, rho_v, X).astype(np.int64), gen.binomial(J, rho_h, Y).astype(np.int64))
    if kind == "from_profile":
        if chi is None or psi is None or L is None:
            raise BoundaryError("from_profile needs chi, psi and L")
        try:
            check_cone(chi, psi, I, J, X / L, Y / L)
        except ValueError as exc:
            raise BoundaryError(str(exc)) from exc
        tx = -L * chi(np.arange(X + 1) / L)
        ty = L * psi(np.arange(Y + 1) / L)
        return BoundaryCondition(greedy_round_increments(tx, I), greedy_round_increments(ty, J))
    raise BoundaryError(f"unknown boundary kind {kind!r}")


# -------------------------------------------------------------- sampling ----

def _cdf_table(p: ModelParams) -> np.ndarray:
    cdf = np.cumsum(transition_table(p), axis=-1)
    cdf[..., -1] = 1.0
    return cdf


def _sweep(cdf: np.ndarray, b: BoundaryCondition, U: np.ndarray) -> np.ndarray:
    """Run the anti-diagonal sweep for a batch of uniforms U[r, x, y]; return H[r, x, y]."""
    R, X, Y = U.shape
    v0 = np.asarray(b.v_bottom[:X], dtype=np.int64)
    h0 = np.asarray(b.h_left[:Y], dtype=np.int64)
    vert = np.broadcast_to(v0, (R, X)).copy()
    horiz = np.broadcast_to(h0, (R, Y)).copy()
    V = np.empty((R, X, Y + 1), dtype=np.int32)
    V[:, :, 0] = v0
    for d in range(X + Y - 1):
        xs = np.arange(max(0, d - Y + 1), min(d, X - 1) + 1)
        ys = d - xs
        vin = vert[:, xs]
        hin = horiz[:, ys]
        u = U[:, xs, ys]
        rows = cdf[vin, hin]
        i2 = np.count_nonzero(rows <= u[..., None], axis=-1)
        vert[:, xs] = i2
        horiz[:, ys] = vin + hin - i2
        V[:, xs, ys + 1] = i2
    H = np.zeros((R, X + 1, Y + 1), dtype=np.int32)
    H[:, 0, 1:] = np.cumsum(h0)
    H[:, 1:, :] = H[:, :1, :] - np.cumsum(V, axis=1)
    return H


def sample_quadrant(p: ModelParams, b: BoundaryCondition, X: int, Y: int, rng: RngStream) -> HeightField:
    """One sample of the height function on [0, X] x [0, Y]."""
    b.check(p.I, p.J, X, Y)
    if X == 0 or Y == 0:
        H = np.zeros((X + 1, Y + 1), dtype=np.int32)
        if X == 0:
            H[0, 1:] = np.cumsum(b.h_left[:Y])
        else:
            H[1:, 0] = -np.cumsum(b.v_bottom[:X])
        return HeightField(H)
    U = rng.uniforms(X, Y)
    return HeightField(_sweep(_cdf_table(p), b, U[None])[0])


def _batch_size(X: int, Y: int, budget: int = 1 << 22) -> int:
    return max(1, budget // max(1, X * Y))


def sample_batches(
    p: ModelParams,
    b: BoundaryCondition,
    X: int,
    Y: int,
    base_seed: int,
    replicas: int,
    threads: int = 1,
    batch: Optional[int] = None,
) -> Iterator[tuple]:
    """Yield (first_replica_index, H[r, x, y]) in replica order.

    Replica r uses the stream seeded with base_seed XOR r, so the output is
    identical for any ``threads`` and ``batch``.
    """
    b.check(p.I, p.J, X, Y)
    cdf = _cdf_table(p)
    size = batch or _batch_size(X, Y)
    starts = list(range(0, replicas, size))

    def work(start: int):
        stop = min(replicas, start + size)
        U = np.stack([RngStream.for_replica(base_seed, r).uniforms(X, Y) for r in range(start, stop)])
        return start, _sweep(cdf, b, U)

    if threads <= 1:
        for s in starts:
            yield work(s)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map preserves submission order, which keeps the reduction deterministic
        yield from pool.map(work, starts)


def evaluate_replicas(p, b, X, Y, base_seed, replicas, fn, threads=1, batch=None) -> np.ndarray:
    """Apply ``fn(H_batch) -> array[r, ...]`` to all replicas, concatenated in replica order."""
    parts = [fn(H) for _, H in sample_batches(p, b, X, Y, base_seed, replicas, threads=threads, batch=batch)]
    return np.concatenate(parts, axis=0)
