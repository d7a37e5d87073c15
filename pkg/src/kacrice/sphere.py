"""Mean numbers of stationary points and minima of isotropic Gaussian fields on a sphere.

Every count is carried as a natural logarithm because the interesting values
range from 1 to e^{O(N)}.  The finite-N expressions are

    E N_s = 4N ((1+B)/(1-B))^{N/2} sqrt(1-B) G(B),       G = int_0^inf e^{-N B t^2/2} rho_N(t) dt
    E N_m = 2  ((1+B)/(1-B))^{N/2} sqrt(1-B) G_max(B),   G_max = E exp(-N B lambda_max^2 / 2)

with rho_N the standardized GOE density and lambda_max its top eigenvalue.
Replacing lambda_max by the k-th largest eigenvalue counts stationary points
of index k-1.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy import special as sps

from . import goe
from .goe import GoeEnsembleSpec, LambdaMaxLaw, mc_eigen_statistic
from .numerics import RandomStream, airy_ai_tail_integral, bessel_i, ln_gamma
from .tracy_widom import (
    Tw1Evaluator,
    default_evaluator,
    log_f1_tail_left,
    f1_tail_left_log_slope,
    LN_TAIL_A,
)

# regime windows, in units of the natural scalings
ASYMPTOTIC_MIN_BN13 = 5.0
EDGE_MAX_BN13 = 2.0
BULK_MAX_BN = 3.0


class RegimeWarning(UserWarning):
    """An asymptotic formula was evaluated outside its window of validity."""


class McReliabilityWarning(UserWarning):
    """A Monte-Carlo estimate is dominated by a handful of samples."""


# ---------------------------------------------------------------------------
# model parameters


@dataclass(frozen=True)
class IsotropicSphereSpec:
    """Isotropic field on the sphere of radius R in R^N, covariance F(x.x')."""

    N: int
    R: float
    F1d: float
    F2d: float

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be >= 2")
        if not self.R > 0:
            raise ValueError("R must be positive")


@dataclass(frozen=True)
class PSpinSpec:
    """Spherical p-spin model with coupling scale J and random field of std sigma."""

    p: int
    J: float
    sigma: float
    N: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be >= 2")
        if not self.J > 0 or self.sigma < 0:
            raise ValueError("need J > 0 and sigma >= 0")

    def to_isotropic(self) -> IsotropicSphereSpec:
        # F(s) = N f(s/N), f(u) = J^2 u^p / p + sigma^2 u, on the sphere R^2 = N
        f1 = self.J**2 + self.sigma**2
        f2 = self.J**2 * (self.p - 1) / self.N
        return IsotropicSphereSpec(self.N, math.sqrt(self.N), f1, f2)


def b_param(spec: IsotropicSphereSpec | PSpinSpec) -> float:
    """The single control parameter B = (F'' - F'/R^2) / (F'' + F'/R^2)."""
    if isinstance(spec, PSpinSpec):
        j2, s2 = spec.J**2, spec.sigma**2
        return (j2 * (spec.p - 2) - s2) / (j2 * spec.p + s2)
    if not (spec.F1d > 0 and spec.F2d > 0):
        raise ValueError("counting formulas need F'(R^2) > 0 and F''(R^2) > 0")
    r = spec.F1d / spec.R**2
    return (spec.F2d - r) / (spec.F2d + r)


def sigma_c(p: int, J: float) -> float:
    if p < 2 or not J > 0:
        raise ValueError("need p >= 2 and J > 0")
    return J * math.sqrt(p - 2)


def log_sphere_area(N: int, R: float) -> float:
    """log of R^{N-1} pi^{N/2} / Gamma(N/2), the area of a hemisphere of S^{N-1}(R)."""
    if N < 2 or not R > 0:
        raise ValueError("need N >= 2 and R > 0")
    return (N - 1) * math.log(R) + 0.5 * N * math.log(math.pi) - ln_gamma(0.5 * N)


def sphere_area(N: int, R: float) -> float:
    return math.exp(log_sphere_area(N, R))


def _check_b(B: float):
    if not -1.0 < B < 1.0:
        raise ValueError(f"B must lie in (-1, 1), got {B}")


def _log_prefactor(N: int, B: float) -> float:
    """log of ((1+B)/(1-B))^{N/2} sqrt(1-B)."""
    return 0.5 * N * (math.log1p(B) - math.log1p(-B)) + 0.5 * math.log1p(-B)


# ---------------------------------------------------------------------------
# report type


@dataclass
class CountReport:
    """A mean count stored as its logarithm.

    ``log_err`` is the relative (equivalently, log-scale) uncertainty: the
    Monte-Carlo standard error, a quadrature error estimate, or NaN for
    limiting formulas that carry no finite-N error bar.
    """

    log_value: float
    log_err: float
    method: str
    regime: str
    params: dict = field(default_factory=dict)
    warnings: tuple = ()

    @property
    def log_scaled(self) -> bool:
        return self.log_value > 700.0

    @property
    def value(self) -> float:
        return math.inf if self.log_scaled else math.exp(self.log_value)

    @property
    def err(self) -> float:
        return self.value * self.log_err


def regime_label(N: int, B: float) -> str:
    if abs(B) * N <= BULK_MAX_BN:
        return "bulk-gamma"
    if abs(B) * N ** (1 / 3) <= EDGE_MAX_BN13:
        return "edge-kappa"
    return "B<0" if B < 0 else "B>0"


def sweep_csv(reports: Iterable[CountReport], param: str = "B") -> str:
    """CSV with header param,value,log_value,method,regime,err."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["param", "value", "log_value", "method", "regime", "err"])
    for r in reports:
        w.writerow([repr(float(r.params[param])), repr(r.value), repr(r.log_value), r.method, r.regime, repr(r.err)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Monte-Carlo helpers


def _log_mean(logs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """log of the sample mean of exp(logs) along axis 0, and its relative stderr."""
    logs = np.asarray(logs, dtype=float)
    n = logs.shape[0]
    m = np.max(logs, axis=0)
    x = np.exp(logs - m)
    mean = x.mean(axis=0)
    sd = x.std(axis=0, ddof=1) if n > 1 else np.zeros_like(mean)
    return m + np.log(mean), sd / (mean * math.sqrt(n))


def _dominance(logs: np.ndarray) -> np.ndarray:
    """Largest single-sample share of the sum, per column."""
    m = np.max(logs, axis=0)
    x = np.exp(logs - m)
    return 1.0 / x.sum(axis=0)


def _mc_warnings(share: float) -> tuple:
    if share > 0.1:
        msg = f"one sample carries {share:.0%} of the Monte-Carlo sum; the estimate is unreliable"
        warnings.warn(msg, McReliabilityWarning, stacklevel=3)
        return (msg,)
    return ()


def mc_log_g(
    N: int, Bs: Sequence[float], n_samples: int, stream: RandomStream, threads: int = 1
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """log G(B) for several B from one set of samples, with rel. stderr and dominance."""
    Bs = np.atleast_1d(np.asarray(Bs, dtype=float))

    def stat(ev):
        # per sample: log[(1/2N) sum_i exp(-N B lambda_i^2 / 2)]
        e = -0.5 * N * Bs[None, :, None] * ev[:, None, :] ** 2
        return sps.logsumexp(e, axis=2) - math.log(2 * N)

    logs = mc_eigen_statistic(GoeEnsembleSpec.standardized(N), stat, n_samples, stream, threads)
    lg, rel = _log_mean(logs)
    return lg, rel, _dominance(logs)


def mc_log_g_order(
    N: int, Bs: Sequence[float], k: int, n_samples: int, stream: RandomStream, threads: int = 1
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """log E exp(-N B lambda_(k)^2 / 2) with lambda_(1) the largest eigenvalue."""
    if not 1 <= k <= N:
        raise ValueError(f"k must lie in [1, {N}], got {k}")
    Bs = np.atleast_1d(np.asarray(Bs, dtype=float))
    lam = mc_eigen_statistic(
        GoeEnsembleSpec.standardized(N), lambda ev: ev[:, N - k], n_samples, stream, threads
    )
    logs = -0.5 * N * Bs[None, :] * lam[:, None] ** 2
    lg, rel = _log_mean(logs)
    return lg, rel, _dominance(logs)


# ---------------------------------------------------------------------------
# stationary points: exact


@lru_cache(maxsize=32)
def _density_table(N: int, t_max: int, order: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on [0, t_max], weights, and log rho_N at the nodes."""
    width = min(0.05, 2.0 / N)
    k = int(math.ceil(t_max / width))
    edges = np.linspace(0.0, float(t_max), k + 1)
    u, w = np.polynomial.legendre.leggauss(order)
    h = 0.5 * np.diff(edges)
    nodes = (edges[:-1, None] + h[:, None] * (u + 1.0)).ravel()
    weights = (h[:, None] * w).ravel()
    return nodes, weights, goe.log_density_exact(N, nodes)


def _t_max(N: int, B: float) -> int:
    # the log-integrand decays like -N (1 + min(B, 0)) t^2 / 2 far out
    reach = math.sqrt(240.0 / (N * (1.0 + min(B, 0.0))))
    return int(math.ceil(max(reach, 1.5 * math.sqrt(2.0 / (1.0 - B * B))) + 1.0))


def log_g_exact(N: int, B: float) -> tuple[float, float]:
    """log G(B) by composite Gauss-Legendre on the exact density; (value, rel. err).

    The error estimate compares 16- and 10-point rules on the same panels.
    """
    _check_b(B)
    tm = _t_max(N, B)
    out = []
    for order in (16, 10):
        t, w, lr = _density_table(N, tm, order)
        lf = -0.5 * N * B * t * t + lr
        m = np.max(lf)
        if lf[-1] > m - 40.0:
            raise RuntimeError(f"integration range [0, {tm}] too short for N={N}, B={B}")
        out.append(m + math.log(np.dot(w, np.exp(lf - m))))
    return out[0], abs(out[0] - out[1])


def count_stationary_exact(
    N: int,
    B: float,
    source: str = "exact",
    n_samples: int = 10000,
    stream: RandomStream | None = None,
    threads: int = 1,
) -> CountReport:
    """Finite-N mean number of stationary points.

    ``source="exact"`` integrates the Hermite-function density (even N);
    ``source="mc"`` averages over GOE samples.
    """
    _check_b(B)
    if source == "exact":
        lg, err = log_g_exact(N, B)
        method, warn = "exact-quadrature", ()
    elif source == "mc":
        stream = stream or RandomStream(0)
        lgs, rel, dom = mc_log_g(N, [B], n_samples, stream, threads)
        lg, err = float(lgs[0]), float(rel[0])
        method, warn = "mc-oracle", _mc_warnings(float(dom[0]))
    else:
        raise ValueError(f"unknown source {source!r}")
    lv = math.log(4 * N) + _log_prefactor(N, B) + lg
    return CountReport(lv, err, method, regime_label(N, B), {"N": N, "B": B}, warn)


def sweep_stationary_mc(
    N: int, Bs: Sequence[float], n_samples: int, stream: RandomStream, threads: int = 1
) -> list[CountReport]:
    """MC counts for many B from one shared set of GOE samples."""
    lgs, rel, dom = mc_log_g(N, Bs, n_samples, stream, threads)
    out = []
    for B, lg, r, d in zip(Bs, lgs, rel, dom):
        _check_b(B)
        lv = math.log(4 * N) + _log_prefactor(N, B) + lg
        out.append(CountReport(float(lv), float(r), "mc-oracle", regime_label(N, B), {"N": N, "B": float(B)}, _mc_warnings(d)))
    return out


# ---------------------------------------------------------------------------
# stationary points: closed forms and limits


def log_g_less_bessel(B: float, N: int) -> float:
    """log of (1/2) e^{gamma/2} [I_0(gamma/2) - I_1(gamma/2)], gamma = -N B.

    This is exactly int_0^sqrt2 e^{-N B t^2/2} sqrt(2 - t^2)/pi dt.
    """
    x = -0.5 * N * B
    # exponentially scaled Bessel functions: I_v(x) = ive(v, x) e^{|x|}
    diff = sps.i0e(x) - sps.i1e(x)
    return math.log(0.5) + x + abs(x) + math.log(diff)


def g_less_bessel(B: float, N: int) -> float:
    return math.exp(log_g_less_bessel(B, N))


def asymptotic_count_stationary(B: float, N: int, threshold: float = ASYMPTOTIC_MIN_BN13) -> CountReport:
    """Leading large-N count away from B = 0: 2 for B < 0, exponential for B > 0."""
    _check_b(B)
    warn = ()
    if abs(B) * N ** (1 / 3) < threshold:
        msg = f"|B| N^(1/3) = {abs(B) * N ** (1 / 3):.3g} < {threshold}: outside the asymptotic window"
        warnings.warn(msg, RegimeWarning, stacklevel=2)
        warn = (msg,)
    if B < 0:
        return CountReport(math.log(2.0), math.nan, "asymptotic", "B<0", {"N": N, "B": B}, warn)
    if B == 0:
        raise ValueError("no asymptotic form at B = 0")
    # 4N sqrt(1-B) ((1+B)/(1-B))^{N/2} / sqrt(pi N B)
    lv = math.log(4.0) + 0.5 * math.log(N) + 0.5 * math.log((1.0 - B) / (math.pi * B)) + 0.5 * N * (
        math.log1p(B) - math.log1p(-B)
    )
    return CountReport(lv, math.nan, "asymptotic", "B>0", {"N": N, "B": B}, warn)


def cumulative_complexity(B: float) -> float:
    """(1/2) ln((1+B)/(1-B)), the growth rate of the stationary count for B > 0."""
    return 0.5 * (math.log1p(B) - math.log1p(-B))


def log_crossover_bulk_stationary(gamma: float) -> float:
    x = 0.5 * gamma
    return -x + abs(x) + math.log(sps.i0e(x) - sps.i1e(x))


def crossover_bulk_stationary(gamma: float) -> float:
    """lim E N_s / (2N) at B = -gamma/N: e^{-gamma/2} [I_0 - I_1](gamma/2)."""
    return math.exp(log_crossover_bulk_stationary(gamma))


# -- edge crossover ---------------------------------------------------------

_EDGE_LEFT_MAX = 2400
_EDGE_SPLIT = 12.0
# the asymptote is subtracted only left of -1, away from its kink at 0
_EDGE_SUB = 1.0


def _edge_left(kappa: float) -> int:
    # the weight e^{kappa z/2} must fall below e^{-30} at the cut
    return int(min(_EDGE_LEFT_MAX, max(60, math.ceil(60.0 / kappa))))


@lru_cache(maxsize=16)
def _edge_table(left: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes/weights on [-left, 12] and rho_edge minus its left asymptote there."""
    u, w = np.polynomial.legendre.leggauss(16)
    edges = np.arange(-float(left), _EDGE_SPLIT + 1e-12, 0.25)
    h = 0.5 * np.diff(edges)
    z = (edges[:-1, None] + h[:, None] * (u + 1.0)).ravel()
    wt = (h[:, None] * w).ravel()
    rho = goe.density_edge(z) - np.where(z < -_EDGE_SUB, np.sqrt(np.maximum(-z, 0.0)) / math.pi, 0.0)
    return z, wt, rho


def log_density_edge_right(z: np.ndarray) -> np.ndarray:
    """log rho_edge for z > 0 without underflow (uses exponentially scaled Airy)."""
    z = np.asarray(z, dtype=float)
    ai, aip, _, _ = sps.airye(z)
    theta = (2.0 / 3.0) * z**1.5
    tail = np.zeros_like(z)
    near = z <= _EDGE_SPLIT
    tail[near] = airy_ai_tail_integral(z[near])
    inner = 0.5 * ai * (1.0 - tail) + np.exp(-theta) * (aip * aip - z * ai * ai)
    return -theta + np.log(inner)


def log_crossover_edge_stationary(kappa: float) -> float:
    """log of 4 e^{-kappa^3/24} int e^{kappa z/2} rho_edge(z) dz for kappa > 0.

    Left of z = -1 the asymptote sqrt(|z|)/pi is integrated in closed form (an
    incomplete gamma function) and only rho_edge minus that asymptote is
    integrated numerically (it oscillates with amplitude ~1/|z|).
    """
    if kappa < 0:
        raise ValueError("kappa must be >= 0 (the integral diverges for kappa < 0)")
    if kappa == 0:
        return math.inf
    z, w, rho_sub = _edge_table(_edge_left(kappa))
    left = float(np.dot(w, np.exp(0.5 * kappa * z) * rho_sub))
    # the table covers (0, 12]; beyond that integrate the log form
    # int_{-inf}^{-1} e^{kappa z/2} sqrt(|z|)/pi dz
    closure = math.gamma(1.5) * sps.gammaincc(1.5, 0.5 * kappa * _EDGE_SUB) * (2.0 / kappa) ** 1.5 / math.pi
    zr_hi = max(30.0, kappa * kappa / 4.0 + 8.0 * kappa + 30.0)
    u, wg = np.polynomial.legendre.leggauss(16)
    edges = np.arange(_EDGE_SPLIT, zr_hi + 0.5, 0.5)
    h = 0.5 * np.diff(edges)
    zr = (edges[:-1, None] + h[:, None] * (u + 1.0)).ravel()
    wr = (h[:, None] * wg).ravel()
    lr = np.log(wr) + 0.5 * kappa * zr + log_density_edge_right(zr)
    log_right = sps.logsumexp(lr)
    k3 = kappa**3 / 24.0
    # combine: 4 e^{-k3} (left + closure + e^{log_right})
    small = left + closure
    m = max(log_right, math.log(abs(small)) if small != 0 else -math.inf)
    total = math.exp(log_right - m) + small * math.exp(-m)
    return math.log(4.0) - k3 + m + math.log(total)


def crossover_edge_stationary(kappa: float) -> float:
    """Limiting mean number of stationary points at B = -kappa / (2 N^{1/3})."""
    return math.exp(log_crossover_edge_stationary(kappa))


def small_kappa_stationary(kappa: float) -> float:
    """4 sqrt(2) / (sqrt(pi) kappa^{3/2}), the kappa -> 0 asymptote of the edge law."""
    return 4.0 * math.sqrt(2.0) / (math.sqrt(math.pi) * kappa**1.5)


def kappa_of(N: int, B: float) -> float:
    return -2.0 * N ** (1 / 3) * B


def gamma_of(N: int, B: float) -> float:
    return -N * B


# ---------------------------------------------------------------------------
# minima


@lru_cache(maxsize=8)
def _lambda_max_table(N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Gauss-Legendre nodes in t, weights, log F_N' at the nodes, and the left cut.

    The grid starts where log F_N reaches the reliability floor of the
    Pfaffian evaluation and ends where F_N' has decayed by e^{-60} against any
    weight with B > -0.96.
    """
    law = LambdaMaxLaw(N)
    # locate the left cut by bisection on log F
    lo, hi = 0.0, math.sqrt(2.0)
    while law.log_cdf(lo) >= LambdaMaxLaw.RELIABLE_LOG_CDF:
        lo -= 0.5
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if law.log_cdf(mid) < LambdaMaxLaw.RELIABLE_LOG_CDF:
            lo = mid
        else:
            hi = mid
    t_lo = hi
    t_hi = max(math.sqrt(2.0 / (1.0 - 0.96**2)) + 1.0, math.sqrt(2.0) + 2.0)
    width = 0.25 * N ** (-2.0 / 3.0)
    k = int(math.ceil((t_hi - t_lo) / width))
    edges = np.linspace(t_lo, t_hi, k + 1)
    u, w = np.polynomial.legendre.leggauss(8)
    h = 0.5 * np.diff(edges)
    t = (edges[:-1, None] + h[:, None] * (u + 1.0)).ravel()
    wt = (h[:, None] * w).ravel()
    _, ld = law.tabulate(t)
    return t, wt, ld, t_lo


def log_gmax_pfaffian(N: int, B: float) -> tuple[float, float]:
    """log E exp(-N B lambda_max^2/2) from the exact lambda_max law (even N)."""
    _check_b(B)
    t, w, ld, _ = _lambda_max_table(N)
    lf = -0.5 * N * B * t * t + ld
    m = np.max(lf)
    edge_excess = max(lf[0], lf[-1]) - m
    # past the cut the integrand falls faster than exponentially, so the
    # neglected mass is below e^{edge_excess} of the total
    if edge_excess > -10.0:
        raise RuntimeError(
            f"lambda_max table truncates a non-negligible part of the integrand (N={N}, B={B}, "
            f"boundary/peak = e^{edge_excess:.1f})"
        )
    val = m + math.log(np.dot(w, np.exp(lf - m)))
    return val, math.exp(edge_excess) + 1e-10


def log_gmax_small_n(N: int, B: float) -> tuple[float, float]:
    """log E exp(-N B lambda_max^2/2) by quadrature of the N <= 4 density."""
    _check_b(B)
    a = 1.0 / N
    s = math.sqrt(a)
    reach = math.sqrt(2.0 * 60.0 / (1.0 - abs(min(B, 0.0)))) * s + 1.0
    from .numerics import integrate

    f = lambda t: math.exp(-0.5 * N * B * t * t) * goe.lambda_max_density_exact(N, a, t, order=32)
    val, err = integrate(f, -reach, reach)
    return math.log(val), err / val


def count_minima_exact(
    N: int,
    B: float,
    source: str = "auto",
    n_samples: int = 10000,
    stream: RandomStream | None = None,
    threads: int = 1,
) -> CountReport:
    """Finite-N mean number of minima.

    Sources: ``"exact-smallN"`` (N <= 4, nested quadrature), ``"pfaffian"``
    (even N, exact lambda_max law), ``"mc"`` (GOE samples) and ``"auto"``,
    which picks the first deterministic route that applies.
    """
    _check_b(B)
    if source == "auto":
        source = "exact-smallN" if N <= 4 else ("pfaffian" if N % 2 == 0 else "mc")
    warn = ()
    if source == "exact-smallN":
        if N > 4:
            raise ValueError("exact-smallN needs N <= 4")
        lg, err = log_gmax_small_n(N, B)
        method = "exact-quadrature"
    elif source == "pfaffian":
        lg, err = log_gmax_pfaffian(N, B)
        method = "exact-quadrature"
    elif source == "mc":
        stream = stream or RandomStream(0)
        lgs, rel, dom = mc_log_g_order(N, [B], 1, n_samples, stream, threads)
        lg, err = float(lgs[0]), float(rel[0])
        method, warn = "mc-oracle", _mc_warnings(float(dom[0]))
    else:
        raise ValueError(f"unknown source {source!r}")
    lv = math.log(2.0) + _log_prefactor(N, B) + lg
    return CountReport(lv, err, method, regime_label(N, B), {"N": N, "B": B}, warn)


def sweep_minima_mc(
    N: int, Bs: Sequence[float], n_samples: int, stream: RandomStream, threads: int = 1
) -> list[CountReport]:
    """MC minima counts for many B from one shared set of GOE samples."""
    lgs, rel, dom = mc_log_g_order(N, Bs, 1, n_samples, stream, threads)
    out = []
    for B, lg, r, d in zip(Bs, lgs, rel, dom):
        _check_b(B)
        lv = math.log(2.0) + _log_prefactor(N, B) + lg
        out.append(CountReport(float(lv), float(r), "mc-oracle", regime_label(N, B), {"N": N, "B": float(B)}, _mc_warnings(d)))
    return out


def count_index_k(
    N: int, B: float, k: int, n_samples: int, stream: RandomStream, threads: int = 1
) -> CountReport:
    """Mean number of stationary points of index k-1 (k = 1 gives minima)."""
    _check_b(B)
    lgs, rel, dom = mc_log_g_order(N, [B], k, n_samples, stream, threads)
    lv = math.log(2.0) + _log_prefactor(N, B) + float(lgs[0])
    return CountReport(lv, float(rel[0]), "mc-oracle", regime_label(N, B), {"N": N, "B": B, "k": k}, _mc_warnings(float(dom[0])))


def counts_by_index(
    N: int, B: float, n_samples: int, stream: RandomStream, threads: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Mean counts for every index 0..N-1 from one set of samples; (values, stderr)."""
    _check_b(B)
    ev = mc_eigen_statistic(GoeEnsembleSpec.standardized(N), lambda e: e[:, ::-1], n_samples, stream, threads)
    w = np.exp(-0.5 * N * B * ev**2)
    pref = 2.0 * math.exp(_log_prefactor(N, B))
    return pref * w.mean(axis=0), pref * w.std(axis=0, ddof=1) / math.sqrt(n_samples)


def minima_complexity(B: float) -> float:
    """Sigma(B) = (1/2) ln((1+B)/(1-B)) - B, the growth rate of minima for B > 0."""
    return cumulative_complexity(B) - B


def log_c_minima(N: int, B: float) -> float:
    """log of the prefactor 8 A 2^{3/16} N^{-17/36} B^{23/32} sqrt(1-B) e^{(4 sqrt2/3) N^{1/2} B^{3/2}}."""
    return (
        math.log(8.0)
        + LN_TAIL_A
        + (3.0 / 16.0) * math.log(2.0)
        - (17.0 / 36.0) * math.log(N)
        + (23.0 / 32.0) * math.log(B)
        + 0.5 * math.log1p(-B)
        + (4.0 * math.sqrt(2.0) / 3.0) * math.sqrt(N) * B**1.5
    )


def asymptotic_count_minima(B: float, N: int, threshold: float = ASYMPTOTIC_MIN_BN13) -> CountReport:
    """Leading large-N number of minima: 1 for B < 0, C_N(B) e^{N Sigma(B)} for B > 0."""
    _check_b(B)
    warn = ()
    if abs(B) * N ** (1 / 3) < threshold:
        msg = f"|B| N^(1/3) = {abs(B) * N ** (1 / 3):.3g} < {threshold}: outside the asymptotic window"
        warnings.warn(msg, RegimeWarning, stacklevel=2)
        warn = (msg,)
    if B < 0:
        return CountReport(0.0, math.nan, "asymptotic", "B<0", {"N": N, "B": B}, warn)
    if B == 0:
        raise ValueError("no asymptotic form at B = 0")
    lv = N * minima_complexity(B) + log_c_minima(N, B)
    return CountReport(lv, math.nan, "asymptotic", "B>0", {"N": N, "B": B}, warn)


def log_crossover_edge_minima(kappa: float, evaluator: Tw1Evaluator | None = None) -> float:
    """log of 2 e^{-kappa^3/24} int e^{kappa z/2} F1'(z) dz, any real kappa."""
    ev = evaluator or default_evaluator()
    tab = ev.table
    u, wg = np.polynomial.legendre.leggauss(16)

    def rule(a, b, width):
        k = max(1, int(math.ceil((b - a) / width)))
        e = np.linspace(a, b, k + 1)
        h = 0.5 * np.diff(e)
        return (e[:-1, None] + h[:, None] * (u + 1.0)).ravel(), (h[:, None] * wg).ravel()

    parts = []
    # inside the Painleve table
    z, w = rule(tab.zeta_lo, tab.zeta_hi, 0.25)
    with np.errstate(divide="ignore"):
        parts.append(np.log(w) + 0.5 * kappa * z + np.log(np.maximum(ev.f1_prime_array(z), 0.0)))
    # left of the table: analytic left tail of F1, differentiated
    s_far = max(25.0, 2.0 * math.sqrt(max(-kappa, 0.0)) + 20.0)
    z, w = rule(-s_far, tab.zeta_lo, 0.25)
    lt = np.array([log_f1_tail_left(x) + math.log(f1_tail_left_log_slope(x)) for x in z])
    parts.append(np.log(w) + 0.5 * kappa * z + lt)
    # right of the table: F1' = F1 (q + u)/2 with q = Ai, u = Ai'^2 - z Ai^2 and F1 = 1 to O(Ai)
    z_far = max(40.0, kappa * kappa / 4.0 + 8.0 * abs(kappa) + 30.0)
    z, w = rule(tab.zeta_hi, z_far, 0.5)
    ai, aip, _, _ = sps.airye(z)
    theta = (2.0 / 3.0) * z**1.5
    lr = -theta + np.log(0.5 * (ai + np.exp(-theta) * (aip * aip - z * ai * ai)))
    parts.append(np.log(w) + 0.5 * kappa * z + lr)
    return math.log(2.0) - kappa**3 / 24.0 + float(sps.logsumexp(np.concatenate(parts)))


def crossover_edge_minima(kappa: float, evaluator: Tw1Evaluator | None = None) -> float:
    """Limiting mean number of minima at B = -kappa / (2 N^{1/3})."""
    return math.exp(log_crossover_edge_minima(kappa, evaluator))
