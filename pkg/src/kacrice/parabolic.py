"""Mean counts for a stationary Gaussian field in a parabolic well.

The landscape is H(x) = mu |x|^2 / 2 + V(x) with V stationary, isotropic and
covariance F(|x - y|^2 / 2).  With m = mu / F''(0) and calB = m - 1 the finite-N
counts reduce to tilted GOE averages,

    E N_s = P_N(m) int rho_N(t) exp(-N (t^2 - 2 sqrt2 m t) / 2) dt
    E N_m = P_N(m) E exp(-N (lmax^2 - 2 sqrt2 m lmax) / 2) / N

with the prefactor

    P_N(m) = 2^{N/2} N^{-(N-3)/2} m^{-(N-1)} e^{-N m^2 / 2} Gamma(N/2) / sqrt(pi).

P_N is fixed by the requirement that E N_s -> 1 for m > 1 (a single minimum in
a strongly confined landscape); the same constant makes the bulk, edge and
large-deviation forms below agree with the finite-N integral.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize as spo
from scipy import special as sps

from . import goe
from .goe import GoeEnsembleSpec, mc_eigen_statistic
from .numerics import QuadratureSpec, RandomStream, airy_ai_tail_integral, integrate, ln_gamma
from .sphere import (
    ASYMPTOTIC_MIN_BN13,
    EDGE_MAX_BN13,
    CountReport,
    RegimeWarning,
    _dominance,
    _lambda_max_table,
    _log_mean,
    _mc_warnings,
)
from .tracy_widom import Tw1Evaluator, default_evaluator, log_f1_tail_left

# bulk window |calB| N^{1/2} <= 3
BULK_MAX_BN12 = 3.0


@dataclass(frozen=True)
class ParabolicSpec:
    """Confinement curvature mu, field curvature f''(0) and dimension N."""

    mu: float
    f2d0: float
    N: int

    def __post_init__(self):
        if not (self.mu > 0 and self.f2d0 > 0):
            raise ValueError("mu and f''(0) must be positive")
        if self.N < 1:
            raise ValueError("N must be >= 1")

    @property
    def m(self) -> float:
        return self.mu / self.f2d0

    @property
    def calB(self) -> float:
        return self.m - 1.0


def _check_m(m: float):
    if not m > 0:
        raise ValueError(f"m must be positive, got {m}")


def log_prefactor(N: int, m: float) -> float:
    """log P_N(m)."""
    _check_m(m)
    return (
        0.5 * N * math.log(2.0)
        - 0.5 * (N - 3) * math.log(N)
        - (N - 1) * math.log(m)
        - 0.5 * N * m * m
        + ln_gamma(0.5 * N)
        - 0.5 * math.log(math.pi)
    )


def delta_of(N: int, m: float) -> float:
    """Edge variable delta = N^{1/3} (m - 1); delta > 0 is the confined side."""
    return N ** (1 / 3) * (m - 1.0)


def gamma_of(N: int, m: float) -> float:
    """Bulk variable gamma = N^{1/2} (m - 1)."""
    return math.sqrt(N) * (m - 1.0)


def regime_label(N: int, m: float) -> str:
    b = m - 1.0
    if abs(b) * math.sqrt(N) <= BULK_MAX_BN12:
        return "bulk-gamma"
    if abs(b) * N ** (1 / 3) <= EDGE_MAX_BN13:
        return "edge-delta"
    return "m<1" if b < 0 else "m>1"


# ---------------------------------------------------------------------------
# stationary points


def _tilt(N: int, m: float, t: np.ndarray) -> np.ndarray:
    return -0.5 * N * (t * t - 2.0 * math.sqrt(2.0) * m * t)


def log_tilt_integral_exact(N: int, m: float) -> tuple[float, float]:
    """log int rho_N(t) e^{-N(t^2 - 2 sqrt2 m t)/2} dt from the exact density.

    Composite Gauss-Legendre; the error compares 16- and 10-point rules.
    """
    _check_m(m)
    # the integrand peaks near sqrt2 m (bulk) or just past the edge; beyond
    # t_hi it falls at least like exp(-N (t - t_peak)^2)
    t_hi = max(math.sqrt(2.0) * m, math.sqrt(2.0)) + 1.0 + math.sqrt(80.0 / N)
    t_lo = -math.sqrt(2.0) - 1.0 - math.sqrt(80.0 / N)
    width = min(0.05, 2.0 / N)
    k = int(math.ceil((t_hi - t_lo) / width))
    edges = np.linspace(t_lo, t_hi, k + 1)
    h = 0.5 * np.diff(edges)
    out = []
    for order in (16, 10):
        u, w = np.polynomial.legendre.leggauss(order)
        t = (edges[:-1, None] + h[:, None] * (u + 1.0)).ravel()
        wt = (h[:, None] * w).ravel()
        lf = goe.log_density_exact(N, t) + _tilt(N, m, t)
        top = np.max(lf)
        if max(lf[0], lf[-1]) > top - 30.0:
            raise RuntimeError(f"integration range too short for N={N}, m={m}")
        out.append(float(sps.logsumexp(lf + np.log(wt))))
    return out[0], abs(out[0] - out[1])


def mc_log_tilt(
    N: int, ms: Sequence[float], n_samples: int, stream: RandomStream, threads: int = 1
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """log (1/N) E sum_i e^{-N(l_i^2 - 2 sqrt2 m l_i)/2} for several m; with rel. stderr and dominance."""
    ms = np.atleast_1d(np.asarray(ms, dtype=float))

    def stat(ev):
        e = -0.5 * N * (ev[:, None, :] ** 2 - 2.0 * math.sqrt(2.0) * ms[None, :, None] * ev[:, None, :])
        return sps.logsumexp(e, axis=2) - math.log(N)

    logs = mc_eigen_statistic(GoeEnsembleSpec.standardized(N), stat, n_samples, stream, threads)
    lg, rel = _log_mean(logs)
    return lg, rel, _dominance(logs)


def count_stationary_parab(
    m: float,
    N: int,
    source: str = "exact",
    n_samples: int = 10000,
    stream: RandomStream | None = None,
    threads: int = 1,
) -> CountReport:
    """Finite-N mean number of stationary points in the parabolic well.

    ``source="exact"`` integrates the Hermite-function density (even N);
    ``source="mc"`` averages the tilt over GOE spectra.
    """
    _check_m(m)
    if source == "exact":
        li, err = log_tilt_integral_exact(N, m)
        method, warn = "exact-quadrature", ()
    elif source == "mc":
        stream = stream or RandomStream(0)
        lgs, rel, dom = mc_log_tilt(N, [m], n_samples, stream, threads)
        li, err = float(lgs[0]), float(rel[0])
        method, warn = "mc-oracle", _mc_warnings(float(dom[0]))
    else:
        raise ValueError(f"unknown source {source!r}")
    return CountReport(log_prefactor(N, m) + li, err, method, regime_label(N, m), {"N": N, "m": m}, warn)


def stationary_complexity_parab(m: float) -> float:
    """(m^2 - 1)/2 - ln m, the growth rate of stationary points for m < 1."""
    _check_m(m)
    return 0.5 * (m * m - 1.0) - math.log(m)


def _window_warning(N: int, m: float, threshold: float) -> tuple:
    x = abs(m - 1.0) * N ** (1 / 3)
    if x < threshold:
        msg = f"|m-1| N^(1/3) = {x:.3g} < {threshold}: outside the asymptotic window"
        warnings.warn(msg, RegimeWarning, stacklevel=3)
        return (msg,)
    return ()


def asymptotic_parab(m: float, N: int, threshold: float = ASYMPTOTIC_MIN_BN13) -> CountReport:
    """Large-N stationary count: 4 sqrt(N/pi) m sqrt(1-m^2) e^{N Sigma_s(m)} for m < 1, and 1 for m > 1."""
    _check_m(m)
    if m == 1.0:
        raise ValueError("no asymptotic form at m = 1")
    warn = _window_warning(N, m, threshold)
    if m > 1.0:
        return CountReport(0.0, math.nan, "asymptotic", "m>1", {"N": N, "m": m}, warn)
    lv = N * stationary_complexity_parab(m) + math.log(4.0 * math.sqrt(N / math.pi) * m * math.sqrt(1.0 - m * m))
    return CountReport(lv, math.nan, "asymptotic", "m<1", {"N": N, "m": m}, warn)


# -- edge crossover ----------------------------------------------------------


def _ai_upper(z: np.ndarray) -> np.ndarray:
    """int_z^inf Ai for an array of z."""
    return np.asarray(airy_ai_tail_integral(np.asarray(z, dtype=float)))


def _panel_rule(a: float, b: float, width: float, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    u, w = np.polynomial.legendre.leggauss(order)
    k = max(1, int(math.ceil((b - a) / width)))
    e = np.linspace(a, b, k + 1)
    h = 0.5 * np.diff(e)
    return (e[:-1, None] + h[:, None] * (u + 1.0)).ravel(), (h[:, None] * w).ravel()


def log_crossover_edge_parab(kappa: float) -> float:
    """log of 2 e^{-kappa^3/24} int e^{kappa z/2} rho_edge(z) dz, kappa > 0.

    Evaluated through Laplace transforms rather than the density itself.  With
    s = kappa/2 and A(z) = int_z^inf Ai,

        int e^{sz} (Ai'^2 - z Ai^2) dz = e^{s^3/12} / (2 sqrt(pi) s^{3/2}),
        int e^{sz} Ai dz = e^{s^3/3},
        int e^{sz} Ai A dz = (s/2) int e^{sz} A^2 dz,

    the last by parts since Ai = -A'.  Only the smooth, non-negative A^2 is
    integrated numerically.
    """
    if kappa < 0:
        raise ValueError("kappa must be >= 0 (the integral diverges for kappa < 0)")
    if kappa == 0:
        return math.inf
    s = 0.5 * kappa
    # left half-line: int_{-inf}^0 e^{sz} (A^2 - 1) dz + 1/s, cut where e^{sz} < e^{-32}
    left = min(2400.0, max(60.0, 32.0 / s))
    z, w = _panel_rule(-left, 0.0, 0.25)
    a = _ai_upper(z)
    j_left = float(np.dot(w, np.exp(s * z) * (a * a - 1.0))) + 1.0 / s
    # right half-line in log form: A^2 e^{sz} peaks near z = s^2/4
    z_hi = max(40.0, 0.25 * s * s + 30.0)
    z, w = _panel_rule(0.0, z_hi, 0.25)
    with np.errstate(divide="ignore"):
        lr = np.log(w) + s * z + 2.0 * np.log(_ai_upper(z))
    log_j = float(sps.logsumexp([math.log(j_left), float(sps.logsumexp(lr))]))
    # 2 e^{-s^3/3} [e^{s^3/12}/(2 sqrt(pi) s^{3/2}) + e^{s^3/3}/2 - (s/4) J]
    parts = np.array([-0.25 * s**3 - 0.5 * math.log(math.pi) - 1.5 * math.log(s), 0.0])
    pos = float(sps.logsumexp(parts))
    neg = math.log(0.5 * s) - s**3 / 3.0 + log_j
    return pos + math.log1p(-math.exp(neg - pos))


def crossover_edge_parab(kappa: float) -> float:
    """Limiting stationary count at m = 1 + kappa / (2 N^{1/3})."""
    return math.exp(log_crossover_edge_parab(kappa))


def small_kappa_parab(kappa: float) -> float:
    """2 sqrt(2) / (sqrt(pi) kappa^{3/2}), the kappa -> 0 asymptote of the edge law."""
    return 2.0 * math.sqrt(2.0) / (math.sqrt(math.pi) * kappa**1.5)


# -- bulk crossover ----------------------------------------------------------

BULK_QUAD = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-11, max_subdivisions=500)


def log_crossover_bulk_parab(gamma: float, spec: QuadratureSpec = BULK_QUAD) -> float:
    """log of (4 sqrt2/pi) |g|^{3/2} int_0^inf sqrt(q) e^{-g^2 (q^2 + 2 q sgn g)} dq.

    The substitution q = x^2 removes the square-root endpoint; for g < 0 the
    peak value e^{g^2} at q = 1 is factored out.
    """
    if gamma == 0.0:
        return math.log(2.0 * math.sqrt(2.0) * math.gamma(0.75) / math.pi)
    g2 = gamma * gamma
    s = 1.0 if gamma > 0 else -1.0
    shift = 0.0 if gamma > 0 else g2

    def f(x):
        q = x * x
        return 2.0 * q * math.exp(-g2 * (q * q + 2.0 * s * q) - shift)

    # the integrand lives on x ~ 1/|g| (g > 0) or x ~ 1 (g < 0)
    scale = 1.0 / abs(gamma) if gamma > 0 else 1.0
    pts = [0.5 * scale, scale, 2.0 * scale, 4.0 * scale]
    head, _ = integrate(f, 0.0, 8.0 * scale + 4.0 / abs(gamma), spec, points=pts)
    tail, _ = integrate(f, 8.0 * scale + 4.0 / abs(gamma), math.inf, spec)
    return math.log(4.0 * math.sqrt(2.0) / math.pi) + 1.5 * math.log(abs(gamma)) + shift + math.log(head + tail)


def crossover_bulk_parab(gamma: float, spec: QuadratureSpec = BULK_QUAD) -> float:
    """lim N^{-1/4} E N_s at m = 1 + gamma N^{-1/2}."""
    return math.exp(log_crossover_bulk_parab(gamma, spec))


# ---------------------------------------------------------------------------
# minima


def log_tilt_lmax_pfaffian(N: int, m: float) -> tuple[float, float]:
    """log E e^{-N(lmax^2 - 2 sqrt2 m lmax)/2} from the exact lambda_max law (even N)."""
    _check_m(m)
    t, w, ld, _ = _lambda_max_table(N)
    lf = _tilt(N, m, t) + ld
    top = np.max(lf)
    excess = max(lf[0], lf[-1]) - top
    if excess > -10.0:
        raise RuntimeError(f"lambda_max table truncates the integrand (N={N}, m={m}, boundary/peak = e^{excess:.1f})")
    return float(sps.logsumexp(lf + np.log(w))), math.exp(excess) + 1e-10


def log_tilt_lmax_small_n(N: int, m: float) -> tuple[float, float]:
    """Same average by nested quadrature of the N <= 4 lambda_max density."""
    _check_m(m)
    a = 1.0 / N
    peak = max(math.sqrt(2.0) * m, 0.0)
    lo, hi = -6.0, peak + 6.0
    shift = N * m * m
    f = lambda t: math.exp(_tilt(N, m, t) - shift) * goe.lambda_max_density_exact(N, a, t, order=32)
    val, err = integrate(f, lo, hi, points=[peak])
    return math.log(val) + shift, err / val


def mc_log_tilt_lmax(
    N: int, ms: Sequence[float], n_samples: int, stream: RandomStream, threads: int = 1
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ms = np.atleast_1d(np.asarray(ms, dtype=float))
    lam = mc_eigen_statistic(GoeEnsembleSpec.standardized(N), lambda ev: ev[:, -1], n_samples, stream, threads)
    logs = -0.5 * N * (lam[:, None] ** 2 - 2.0 * math.sqrt(2.0) * ms[None, :] * lam[:, None])
    lg, rel = _log_mean(logs)
    return lg, rel, _dominance(logs)


def count_minima_parab(
    m: float,
    N: int,
    source: str = "auto",
    n_samples: int = 10000,
    stream: RandomStream | None = None,
    threads: int = 1,
) -> CountReport:
    """Finite-N mean number of minima: the stationary formula with rho_N replaced by the lambda_max density over N.

    Sources as in :func:`kacrice.sphere.count_minima_exact`.
    """
    _check_m(m)
    if source == "auto":
        source = "exact-smallN" if N <= 4 else ("pfaffian" if N % 2 == 0 else "mc")
    warn = ()
    if source == "exact-smallN":
        if N > 4:
            raise ValueError("exact-smallN needs N <= 4")
        li, err = log_tilt_lmax_small_n(N, m)
        method = "exact-quadrature"
    elif source == "pfaffian":
        li, err = log_tilt_lmax_pfaffian(N, m)
        method = "exact-quadrature"
    elif source == "mc":
        stream = stream or RandomStream(0)
        lgs, rel, dom = mc_log_tilt_lmax(N, [m], n_samples, stream, threads)
        li, err = float(lgs[0]), float(rel[0])
        method, warn = "mc-oracle", _mc_warnings(float(dom[0]))
    else:
        raise ValueError(f"unknown source {source!r}")
    # rho_N is the average of the N order-statistic densities, hence the 1/N
    lv = log_prefactor(N, m) - math.log(N) + li
    return CountReport(lv, err, method, regime_label(N, m), {"N": N, "m": m}, warn)


def minima_complexity_parab(calB: float) -> float:
    """Sigma(calB) = calB - calB^2/2 - ln(1 + calB)."""
    if not calB > -1.0:
        raise ValueError("need calB > -1")
    return calB - 0.5 * calB * calB - math.log1p(calB)


def asymptotic_minima_parab(m: float, N: int, threshold: float = ASYMPTOTIC_MIN_BN13) -> CountReport:
    """Leading large-N number of minima: e^{N Sigma(m-1)} for m < 1, and 1 for m > 1."""
    _check_m(m)
    if m == 1.0:
        raise ValueError("no asymptotic form at m = 1")
    warn = _window_warning(N, m, threshold)
    if m > 1.0:
        return CountReport(0.0, math.nan, "asymptotic", "m>1", {"N": N, "m": m}, warn)
    return CountReport(N * minima_complexity_parab(m - 1.0), math.nan, "asymptotic", "m<1", {"N": N, "m": m}, warn)


def log_crossover_minima_parab(delta: float, evaluator: Tw1Evaluator | None = None) -> float:
    """log of 2 e^{-delta^3/3} int e^{delta z} F1'(z) dz.

    Integrated by parts so that only F1 enters:
        delta > 0:  int e^{dz} F1' = d int e^{dz} (1 - F1) dz
        delta < 0:  int e^{dz} F1' = |d| int e^{dz} F1 dz
    """
    if delta == 0.0:
        return math.log(2.0)
    ev = evaluator or default_evaluator()
    tab = ev.table
    parts = []
    if delta > 0:
        z, w = _panel_rule(tab.zeta_lo, tab.zeta_hi, 0.25)
        st = tab.state(z)
        parts.append(np.log(w) + delta * z + np.log(-np.expm1(-0.5 * st[2] - 0.5 * st[4])))
        # right of the table q = Ai to O(Ai^3), so I1 = int Ai and I2 is negligible against it
        z_hi = max(40.0, delta * delta + 30.0)
        z, w = _panel_rule(tab.zeta_hi, z_hi, 0.5)
        with np.errstate(divide="ignore"):
            parts.append(np.log(w) + delta * z + np.log(-np.expm1(-0.5 * _ai_upper(z))))
        # left of the table 1 - F1 = 1 to within F1(zeta_lo) < 1e-21
        parts.append(np.array([delta * tab.zeta_lo - math.log(delta)]))
    else:
        z, w = _panel_rule(tab.zeta_lo, tab.zeta_hi, 0.25)
        st = tab.state(z)
        parts.append(np.log(w) + delta * z - 0.5 * st[2] - 0.5 * st[4])
        s_far = max(25.0, 2.0 * math.sqrt(8.0 * abs(delta)) + 20.0)
        z, w = _panel_rule(-s_far, tab.zeta_lo, 0.25)
        parts.append(np.log(w) + delta * z + np.array([log_f1_tail_left(x) for x in z]))
        # beyond zeta_hi F1 = 1 up to 1e-14: int_{zeta_hi}^inf e^{dz} dz = e^{d zeta_hi}/|d|
        parts.append(np.array([delta * tab.zeta_hi - math.log(-delta)]))
    log_int = math.log(abs(delta)) + float(sps.logsumexp(np.concatenate(parts)))
    return math.log(2.0) - delta**3 / 3.0 + log_int


def crossover_minima_parab(delta: float, evaluator: Tw1Evaluator | None = None) -> float:
    """Limiting mean number of minima at m = 1 + delta N^{-1/3}."""
    return math.exp(log_crossover_minima_parab(delta, evaluator))


class SaddleNotFound(RuntimeError):
    """The Laplace saddle equation has no root inside the Painleve table."""


def _log_f1p_derivatives(ev: Tw1Evaluator, zeta: float) -> tuple[float, float]:
    """First and second derivatives of ln F1' at zeta.

    With h = (q + u)/2, (ln F1')' = h + h'/h, h' = (q' - q^2)/2 and
    h'' = (zeta q + 2 q^3 - 2 q q')/2.
    """
    q, qp, _, u, _ = ev.table.state(zeta)
    h = 0.5 * (q + u)
    h1 = 0.5 * (qp - q * q)
    h2 = 0.5 * (zeta * q + 2.0 * q**3 - 2.0 * q * qp)
    return h + h1 / h, h1 + (h2 * h - h1 * h1) / (h * h)


def laplace_saddle(delta: float, evaluator: Tw1Evaluator | None = None) -> float:
    """Root of -d/dzeta ln F1'(zeta) = delta inside the table."""
    ev = evaluator or default_evaluator()
    tab = ev.table
    g = lambda z: -_log_f1p_derivatives(ev, z)[0] - delta
    lo, hi = tab.zeta_lo, tab.zeta_hi
    if g(lo) * g(hi) > 0:
        raise SaddleNotFound(f"no saddle for delta={delta} in [{lo}, {hi}]")
    return spo.brentq(g, lo, hi, xtol=1e-13, rtol=1e-13)


def log_laplace_minima_parab(delta: float, evaluator: Tw1Evaluator | None = None) -> float:
    """log of 2 e^{-d^3/3} e^{d z*} F1'(z*) sqrt(2 pi / -(ln F1')''(z*))."""
    ev = evaluator or default_evaluator()
    zs = laplace_saddle(delta, ev)
    _, d2 = _log_f1p_derivatives(ev, zs)
    if not d2 < 0:
        raise SaddleNotFound(f"saddle at {zs} is not a maximum")
    return (
        math.log(2.0)
        - delta**3 / 3.0
        + delta * zs
        + math.log(ev.f1_prime(zs))
        + 0.5 * math.log(2.0 * math.pi / -d2)
    )


def laplace_minima_parab(delta: float, evaluator: Tw1Evaluator | None = None) -> float:
    return math.exp(log_laplace_minima_parab(delta, evaluator))


# ---------------------------------------------------------------------------
# three-branch table for the number of minima


@dataclass
class Figure2Row:
    m: float
    branch: str
    log_count: float
    in_window: bool


def figure2_table(N: int = 10000, m_grid: Sequence[float] | None = None, evaluator: Tw1Evaluator | None = None) -> list[Figure2Row]:
    """Log mean number of minima along m from the three branches.

    Branch ``a`` is N Sigma(m - 1) (m < 1), ``b`` the Laplace form at
    delta = N^{1/3}(m - 1) (wherever the saddle exists), ``c`` the constant 1
    (m > 1).  ``in_window`` marks the branch that applies: ``b`` for
    |delta| <= 2, otherwise ``a`` or ``c``.
    """
    ev = evaluator or default_evaluator()
    if m_grid is None:
        m_grid = np.linspace(0.6, 1.4, 81)
    rows = []
    for m in m_grid:
        m = float(m)
        d = delta_of(N, m)
        edge = abs(d) <= EDGE_MAX_BN13
        if m < 1.0:
            rows.append(Figure2Row(m, "a", N * minima_complexity_parab(m - 1.0), not edge))
        try:
            rows.append(Figure2Row(m, "b", log_laplace_minima_parab(d, ev), edge))
        except SaddleNotFound:
            pass
        if m > 1.0:
            rows.append(Figure2Row(m, "c", 0.0, not edge))
    return rows


def figure2_csv(rows: Sequence[Figure2Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "branch", "log_count", "in_window"])
    for r in rows:
        w.writerow([repr(r.m), r.branch, repr(r.log_count), int(r.in_window)])
    return buf.getvalue()


def log_count_mismatch(a: float, b: float) -> float:
    """|a - b| relative to max(1, |a|, |b|): relative for large log-counts, absolute near log 1 = 0."""
    return abs(a - b) / max(1.0, abs(a), abs(b))


def branch_boundary_mismatch(N: int = 10000, evaluator: Tw1Evaluator | None = None) -> dict[str, float]:
    """Log-count mismatch between neighbouring branches at |delta| = 2."""
    ev = evaluator or default_evaluator()
    m_lo = 1.0 - EDGE_MAX_BN13 / N ** (1 / 3)
    m_hi = 1.0 + EDGE_MAX_BN13 / N ** (1 / 3)
    a = N * minima_complexity_parab(m_lo - 1.0)
    b_lo = log_laplace_minima_parab(delta_of(N, m_lo), ev)
    b_hi = log_laplace_minima_parab(delta_of(N, m_hi), ev)
    return {"a|b": log_count_mismatch(a, b_lo), "b|c": log_count_mismatch(b_hi, 0.0)}


# ---------------------------------------------------------------------------
# anisotropic fields


def log_anisotropic_factor(diag_A: Sequence[float]) -> float:
    """log sqrt(det A) for a positive diagonal A."""
    a = np.asarray(diag_A, dtype=float)
    if a.ndim != 1 or a.size == 0 or not np.all(a > 0):
        raise ValueError("diag_A must be a non-empty list of positive numbers")
    return 0.5 * float(np.sum(np.log(a)))


def anisotropic_factor(diag_A: Sequence[float]) -> float:
    """Ratio sqrt(det A) of anisotropic to isotropic stationary-point counts."""
    return math.exp(log_anisotropic_factor(diag_A))


def hessian_covariance(diag_A: Sequence[float], f2d0: float = 1.0) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Covariance of the upper-triangular Hessian entries of the anisotropic field.

    E{H_ik H_jl} = F''(0) [a_i a_k d_ij d_kl + a_i a_j d_ik d_jl + a_i a_j d_jk d_il].
    """
    a = np.asarray(diag_A, dtype=float)
    n = a.size
    idx = [(i, k) for i in range(n) for k in range(i, n)]
    c = np.zeros((len(idx), len(idx)))
    for p, (i, k) in enumerate(idx):
        for r, (j, l) in enumerate(idx):
            c[p, r] = f2d0 * (
                a[i] * a[k] * (i == j) * (k == l) + a[i] * a[j] * (i == k) * (j == l) + a[i] * a[j] * (j == k) * (i == l)
            )
    return idx, c


def sample_rescaled_hessians(
    diag_A: Sequence[float], n_samples: int, stream: RandomStream, f2d0: float = 1.0
) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Samples of A^{-1/2} H A^{-1/2} (upper-triangular entries) with H drawn from :func:`hessian_covariance`."""
    a = np.asarray(diag_A, dtype=float)
    idx, c = hessian_covariance(a, f2d0)
    rng = stream.generator()
    h = rng.multivariate_normal(np.zeros(len(idx)), c, size=n_samples, method="eigh")
    scale = np.array([1.0 / math.sqrt(a[i] * a[k]) for i, k in idx])
    return idx, h * scale
