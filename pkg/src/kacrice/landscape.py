"""Concrete spherical p-spin landscapes and direct enumeration of their stationary points.

An instance is

    V(x) = - sum_{i1..ip} J_{i1..ip} x_{i1} ... x_{ip} - sum_i h_i x_i,   |x|^2 = N,

with independent couplings of variance J^2 / (p N^{p-1}) and fields of
variance sigma^2.  Stationary points solve grad V(x) = 2 mu x on the sphere;
their index is the number of negative eigenvalues of the tangential Hessian
P (hess V - 2 mu) P restricted to the tangent space.  The Morse sum
sum (-1)^index must equal the Euler characteristic 1 + (-1)^{N-1} of the sphere.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize as spo

from .goe import McEstimate, eigen_sym
from .numerics import RandomStream
from .sphere import PSpinSpec

MAX_N = {2: 64, 3: 12}


class EnumerationError(RuntimeError):
    """No stationary point could be located."""


class DegeneracyWarning(UserWarning):
    """Two coupling-matrix eigenvalues nearly coincide."""


@dataclass
class PSpinInstance:
    spec: PSpinSpec
    couplings: np.ndarray
    field: np.ndarray
    sym: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.sym is None:
            p = self.spec.p
            self.sym = sum(np.transpose(self.couplings, perm) for perm in itertools.permutations(range(p)))

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def p(self) -> int:
        return self.spec.p


@dataclass
class StationaryPoint:
    x: np.ndarray
    multiplier: float
    energy: float
    index: int

    def to_dict(self) -> dict:
        return {"x": self.x.tolist(), "multiplier": self.multiplier, "energy": self.energy, "index": self.index}


@dataclass
class CensusResult:
    n_stationary: int
    n_minima: int
    morse_sum: int
    saturated: bool

    @classmethod
    def from_points(cls, points: list[StationaryPoint], saturated: bool) -> "CensusResult":
        idx = [p.index for p in points]
        return cls(len(points), sum(i == 0 for i in idx), sum((-1) ** i for i in idx), saturated)


def euler_characteristic(N: int) -> int:
    """Euler characteristic of the (N-1)-sphere."""
    return 1 + (-1) ** (N - 1)


def sample_instance(spec: PSpinSpec, stream: RandomStream) -> PSpinInstance:
    """Draw couplings and field with the exact entry law."""
    p, N = spec.p, spec.N
    if p not in MAX_N:
        raise ValueError("dense tensors are supported for p = 2 and p = 3 only")
    if not 2 <= N <= MAX_N[p]:
        raise ValueError(f"N must lie in [2, {MAX_N[p]}] for p = {p}")
    rng = stream.generator()
    sd = spec.J / math.sqrt(p * N ** (p - 1))
    couplings = sd * rng.standard_normal((N,) * p)
    h = spec.sigma * rng.standard_normal(N) if spec.sigma > 0 else np.zeros(N)
    return PSpinInstance(spec, couplings, h)


def _contract(t: np.ndarray, x: np.ndarray, times: int) -> np.ndarray:
    for _ in range(times):
        t = t @ x
    return t


def evaluate(instance: PSpinInstance, x: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Energy, gradient and Hessian of the ambient polynomial at x."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("x must be finite")
    p, s = instance.p, instance.sym
    energy = -float(_contract(s, x, p)) / math.factorial(p) - float(instance.field @ x)
    grad = -_contract(s, x, p - 1) / math.factorial(p - 1) - instance.field
    hess = -_contract(s, x, p - 2) / math.factorial(p - 2)
    return energy, grad, 0.5 * (hess + hess.T)


eval = evaluate


def _tangent_basis(x: np.ndarray) -> np.ndarray:
    """Orthonormal basis (N, N-1) of the plane orthogonal to x."""
    q, _ = np.linalg.qr(np.column_stack([x, np.eye(x.size)]))
    return q[:, 1:]


def tangential_index(instance: PSpinInstance, x: np.ndarray, mu: float) -> int:
    _, _, hess = evaluate(instance, x)
    b = _tangent_basis(x)
    m = b.T @ (hess - 2.0 * mu * np.eye(x.size)) @ b
    return int(np.sum(eigen_sym(0.5 * (m + m.T)) < 0.0))


def projected_residual(instance: PSpinInstance, x: np.ndarray) -> tuple[float, float]:
    """(|P_x grad V|, |grad V|)."""
    _, g, _ = evaluate(instance, x)
    pg = g - x * (x @ g) / (x @ x)
    return float(np.linalg.norm(pg)), float(np.linalg.norm(g))


def _make_point(instance: PSpinInstance, x: np.ndarray) -> StationaryPoint:
    N = instance.N
    x = x * math.sqrt(N) / np.linalg.norm(x)
    e, g, _ = evaluate(instance, x)
    mu = float(x @ g) / (2.0 * N)
    return StationaryPoint(x, mu, e, tangential_index(instance, x, mu))


# ---------------------------------------------------------------------------
# exact enumeration for p = 2


def _roots_p2(w: np.ndarray, ht: np.ndarray, N: int) -> list[float]:
    """All nu = 2 mu with sum ht_i^2 / (w_i + nu)^2 = N."""
    c = ht * ht
    S = lambda nu: float(np.sum(c / (w + nu) ** 2)) - N
    dS = lambda nu: float(-2.0 * np.sum(c / (w + nu) ** 3))
    poles = np.sort(-w)
    roots = []
    # outer intervals: S decreases from +inf to -N, one root each
    reach = math.sqrt(float(np.sum(c)) / N) + 1.0
    a = poles[-1]
    roots.append(spo.brentq(S, a + 1e-14 * max(1.0, abs(a)), a + reach + 1.0, xtol=1e-15, rtol=1e-15))
    b = poles[0]
    roots.append(spo.brentq(S, b - reach - 1.0, b - 1e-14 * max(1.0, abs(b)), xtol=1e-15, rtol=1e-15))
    # inner intervals: S is convex, so zero or two roots around its minimum
    for a, b in zip(poles[:-1], poles[1:]):
        eps = 1e-14 * max(1.0, abs(a), abs(b))
        lo, hi = a + eps, b - eps
        if not hi > lo:
            continue
        if dS(lo) >= 0 or dS(hi) <= 0:
            continue
        nu_min = spo.brentq(dS, lo, hi, xtol=1e-15, rtol=1e-15)
        if S(nu_min) >= 0:
            continue
        roots.append(spo.brentq(S, lo, nu_min, xtol=1e-15, rtol=1e-15))
        roots.append(spo.brentq(S, nu_min, hi, xtol=1e-15, rtol=1e-15))
    return sorted(roots)


def enumerate_p2(instance: PSpinInstance) -> tuple[CensusResult, list[StationaryPoint]]:
    """All stationary points of a p = 2 instance via the secular equation."""
    if instance.p != 2:
        raise ValueError("enumerate_p2 needs p = 2")
    N = instance.N
    W = instance.sym  # J + J^T
    w, U = np.linalg.eigh(W)
    gaps = np.diff(w)
    if gaps.size and np.min(gaps) < 1e-10:
        warnings.warn("near-degenerate coupling eigenvalues; roots certified by sign changes only", DegeneracyWarning, stacklevel=2)
    ht = U.T @ instance.field
    points = []
    if not np.any(ht):
        for i in range(N):
            for s in (1.0, -1.0):
                points.append(_make_point(instance, s * U[:, i]))
    else:
        for nu in _roots_p2(w, ht, N):
            points.append(_make_point(instance, U @ (-ht / (w + nu))))
    return CensusResult.from_points(points, True), points


# ---------------------------------------------------------------------------
# multistart Newton for general p


def _batch_grad_hess(instance: PSpinInstance, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p, s = instance.p, instance.sym
    if p == 2:
        G = -X @ s.T - instance.field
        H = np.broadcast_to(-0.5 * (s + s.T), (X.shape[0],) + s.shape)
    else:  # p == 3
        H = -np.einsum("ijk,bk->bij", s, X)
        G = 0.5 * np.einsum("bij,bj->bi", H, X) - instance.field
        H = 0.5 * (H + np.swapaxes(H, 1, 2))
    return G, H


def enumerate_multistart(
    instance: PSpinInstance,
    n_starts: int,
    dedup_tol: float = 1e-6,
    stream: RandomStream | None = None,
    max_iter: int = 60,
) -> tuple[CensusResult, list[StationaryPoint]]:
    """Newton on (grad V - 2 mu x, (|x|^2 - N)/2) from uniform random starts on the sphere.

    ``saturated`` is true when no new point appeared in the second half of
    the starts.  Divergent starts are dropped.
    """
    if n_starts < 1:
        raise ValueError("n_starts must be >= 1")
    N = instance.N
    rng = (stream or RandomStream(0)).generator()
    X = rng.standard_normal((n_starts, N))
    X *= math.sqrt(N) / np.linalg.norm(X, axis=1, keepdims=True)
    G, H = _batch_grad_hess(instance, X)
    nu = np.einsum("bi,bi->b", X, G) / N
    eye = np.eye(N)
    ok = np.ones(n_starts, dtype=bool)
    for _ in range(max_iter):
        G, H = _batch_grad_hess(instance, X)
        r = np.concatenate([G - nu[:, None] * X, 0.5 * (np.sum(X * X, axis=1) - N)[:, None]], axis=1)
        J = np.zeros((n_starts, N + 1, N + 1))
        J[:, :N, :N] = H - nu[:, None, None] * eye
        J[:, :N, N] = -X
        J[:, N, :N] = X
        with np.errstate(all="ignore"):
            try:
                step = np.linalg.solve(J, -r[..., None])[..., 0]
            except np.linalg.LinAlgError:
                step = np.stack([np.linalg.lstsq(j, -v, rcond=None)[0] for j, v in zip(J, r)])
        X = X + step[:, :N]
        nu = nu + step[:, N]
        ok &= np.all(np.isfinite(X), axis=1) & np.isfinite(nu)
        X[~ok] = 1.0
        nu[~ok] = 0.0
        if not ok.any() or np.max(np.abs(step[ok])) < 1e-13 * math.sqrt(N):
            break
    Xn = X / np.linalg.norm(X, axis=1, keepdims=True) * math.sqrt(N)
    G, _ = _batch_grad_hess(instance, Xn)
    pg = G - Xn * (np.einsum("bi,bi->b", Xn, G) / N)[:, None]
    res = np.linalg.norm(pg, axis=1)
    keep = np.flatnonzero(ok & (res < 1e-8 * np.linalg.norm(G, axis=1) + 1e-12))
    if not keep.size:
        raise EnumerationError("no start converged")
    # greedy clustering by angular distance, in start order
    C = np.clip(Xn[keep] @ Xn[keep].T / N, -1.0, 1.0)
    close = np.arccos(C) < dedup_tol
    assigned = np.zeros(keep.size, dtype=bool)
    points: list[StationaryPoint] = []
    found_at = []
    for r in range(keep.size):
        if assigned[r]:
            continue
        assigned |= close[r]
        points.append(_make_point(instance, Xn[keep[r]]))
        found_at.append(int(keep[r]))
    saturated = found_at[-1] < n_starts // 2
    return CensusResult.from_points(points, saturated), points


def min_separation(points: list[StationaryPoint]) -> float:
    """Smallest pairwise angular distance (for judging the dedup tolerance)."""
    best = math.inf
    for a, b in itertools.combinations(points, 2):
        c = float(np.clip(a.x @ b.x / a.x.size, -1.0, 1.0))
        best = min(best, math.acos(c))
    return best


# ---------------------------------------------------------------------------
# ensemble averages


@dataclass
class EmpiricalCounts:
    mean_stationary: McEstimate
    mean_minima: McEstimate
    n_instances: int
    n_accepted: int
    reliable: bool
    census: list[CensusResult] = field(default_factory=list, repr=False)


def census_one(spec: PSpinSpec, stream: RandomStream, n_starts: int = 1000) -> CensusResult:
    inst = sample_instance(spec, stream.substream(0))
    if spec.p == 2:
        c, _ = enumerate_p2(inst)
    else:
        c, _ = enumerate_multistart(inst, n_starts, stream=stream.substream(1))
    return c


def empirical_counts(
    spec: PSpinSpec, n_instances: int, stream: RandomStream, n_starts: int = 1000, threads: int = 1
) -> EmpiricalCounts:
    """Instance averages of the stationary and minimum counts.

    Instances whose census is unsaturated or violates the Morse sum are
    excluded; the result is flagged unreliable when fewer than 90% survive.
    """
    run = lambda i: census_one(spec, stream.substream(i), n_starts)
    if threads <= 1:
        census = [run(i) for i in range(n_instances)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            census = list(pool.map(run, range(n_instances)))
    chi = euler_characteristic(spec.N)
    good = [c for c in census if c.saturated and c.morse_sum == chi]
    if not good:
        raise EnumerationError("no instance passed the completeness certificate")
    ns = McEstimate.from_samples(np.array([c.n_stationary for c in good], dtype=float))
    nm = McEstimate.from_samples(np.array([c.n_minima for c in good], dtype=float))
    return EmpiricalCounts(ns, nm, n_instances, len(good), len(good) >= 0.9 * n_instances, census)


def census_csv(census: list[CensusResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance_id", "n_stationary", "n_minima", "morse_sum", "saturated"])
    for i, c in enumerate(census):
        w.writerow([i, c.n_stationary, c.n_minima, c.morse_sum, int(c.saturated)])
    return buf.getvalue()


def points_json(points: list[StationaryPoint]) -> str:
    return json.dumps([p.to_dict() for p in points])
