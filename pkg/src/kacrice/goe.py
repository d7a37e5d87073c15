"""Gaussian Orthogonal Ensemble: sampling, spectra and mean densities.

Conventions follow the measure ``exp(-Tr H^2 / (2a)) dH`` so that diagonal
entries have variance ``a`` and off-diagonal entries ``a/2``.  The
"standardized" ensemble uses ``a = 1/N`` and has its spectral edge at
``sqrt(2)``.

Monte-Carlo functionals split the requested samples into fixed-size chunks,
each drawn from its own substream.  Results therefore depend only on
``(seed, n_samples)`` and never on how many worker threads are used.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special as sps

from .numerics import (
    RandomStream,
    airy_ai,
    airy_ai_prime,
    airy_ai_tail_integral,
    gauss_legendre,
    ln_gamma,
    log_hermite_phi_all,
)

SQRT2 = math.sqrt(2.0)

# largest even N accepted by the Hermite-function density
MAX_EXACT_N = 1000


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class GoeEnsembleSpec:
    n: int
    a: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"matrix size must be >= 1, got {self.n}")
        if not self.a > 0:
            raise ValueError(f"variance parameter must be > 0, got {self.a}")

    @classmethod
    def standardized(cls, n: int) -> "GoeEnsembleSpec":
        return cls(n, 1.0 / n)


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n_samples: int

    @classmethod
    def from_samples(cls, values: np.ndarray) -> "McEstimate":
        values = np.asarray(values, dtype=float)
        n = values.size
        mean = float(np.mean(values))
        sd = float(np.std(values, ddof=1)) if n > 1 else 0.0
        return cls(mean, sd / math.sqrt(n), n)


@dataclass
class DensityCurve:
    """Density values on a grid, with optional Monte-Carlo standard errors."""

    abscissae: np.ndarray
    values: np.ndarray
    provenance: str
    stderr: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.abscissae = np.asarray(self.abscissae, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.provenance not in ("exact", "asymptotic", "edge", "mc"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if np.any(np.diff(self.abscissae) < 0):
            raise ValueError("abscissae must be sorted")
        if np.any(self.values < 0):
            raise ValueError("density values must be nonnegative")

    def mass(self) -> float:
        return float(np.trapezoid(self.values, self.abscissae))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "value", "stderr", "provenance"])
        err = self.stderr if self.stderr is not None else [float("nan")] * len(self.values)
        for t, v, e in zip(self.abscissae, self.values, err):
            w.writerow([repr(float(t)), repr(float(v)), repr(float(e)), self.provenance])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# sampling and eigenvalues


def sample_goe_batch(spec: GoeEnsembleSpec, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` matrices of shape (n, n) as one array."""
    x = rng.normal(0.0, math.sqrt(spec.a), size=(size, spec.n, spec.n))
    return 0.5 * (x + np.swapaxes(x, -1, -2))


def sample_goe(spec: GoeEnsembleSpec, stream: RandomStream) -> np.ndarray:
    return sample_goe_batch(spec, 1, stream.generator())[0]


def _tridiagonalize(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Householder reduction of a symmetric matrix; returns (diag, offdiag)."""
    a = np.array(m, dtype=float, copy=True)
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1 :, k]
        norm = np.linalg.norm(x)
        if norm == 0.0:
            continue
        alpha = -math.copysign(norm, x[0])
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        # a <- P a P with P = I - 2 v v^T acting on rows/cols k+1..n-1
        a[k + 1 :, :] -= 2.0 * np.outer(v, v @ a[k + 1 :, :])
        a[:, k + 1 :] -= 2.0 * np.outer(a[:, k + 1 :] @ v, v)
    return np.diag(a).copy(), np.diag(a, -1).copy()


def _tql_eigenvalues(d: np.ndarray, e: np.ndarray, max_iter: int = 64) -> np.ndarray:
    """Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix."""
    d = np.array(d, dtype=float)
    n = d.size
    off = np.zeros(n)
    off[: n - 1] = e
    eps = np.finfo(float).eps
    # negligible relative to the matrix norm, as in EISPACK tql1; a purely local
    # test never fires when a block holds only rounding noise from larger entries
    tol = eps * float(np.max(np.abs(d) + np.abs(off))) if n else 0.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                if abs(off[m]) <= tol:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise ConvergenceError(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * off[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + off[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * off[i]
                b = c * off[i]
                r = math.hypot(f, g)
                off[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    off[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if deflated:
                continue
            d[l] -= p
            off[l] = g
            off[m] = 0.0
    return np.sort(d)


def eigen_sym(m: np.ndarray, method: str = "lapack") -> np.ndarray:
    """Ascending eigenvalues of a real symmetric matrix.

    ``method="ql"`` runs the in-package Householder + implicit QL solver
    (fine up to a few hundred rows); ``"lapack"`` defers to numpy.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(np.max(np.abs(m)), 1e-300)
    if np.max(np.abs(m - m.T)) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    if method == "lapack":
        return np.linalg.eigvalsh(m)
    if method == "ql":
        if m.shape[0] == 1:
            return m[0].copy()
        d, e = _tridiagonalize(m)
        return _tql_eigenvalues(d, e)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# normalisation constants


def selberg_log_z(n: int, a: float) -> float:
    """log of Z_n(a), the integral of exp(-sum lambda^2/2a) |Vandermonde|."""
    if n < 1 or not a > 0:
        raise ValueError("need n >= 1 and a > 0")
    s = sum(ln_gamma(1.0 + j / 2.0) for j in range(1, n + 1)) - n * ln_gamma(1.5)
    return 0.5 * n * math.log(2.0 * math.pi) + 0.25 * n * (n + 1) * math.log(a) + s


# ---------------------------------------------------------------------------
# exact finite-N mean density (even N)


def _log_kernel_goe(n: int, y: np.ndarray) -> np.ndarray:
    """log of the GOE one-point function for weight exp(-y^2/2), N even.

        K_N(y) = sum_{k<N} phi_k(y)^2 + sqrt(N/2) phi_{N-1}(y) * (1/2) S(y),
        S(y)   = int sgn(y - s) phi_N(s) ds = 2 Phi_N(y) - Phi_N(inf),

    with Phi_n the primitive of phi_n, built upward from the Gaussian CDF via
    Phi_{n+1} = sqrt(n/(n+1)) Phi_{n-1} - sqrt(2/(n+1)) phi_n.
    """
    logphi, sgn = log_hermite_phi_all(n, y)
    phi = sgn * np.exp(logphi)
    prim = SQRT2 * math.pi**0.25 * sps.ndtr(y)
    prim_inf = SQRT2 * math.pi**0.25
    for k in range(1, n, 2):
        prim = math.sqrt(k / (k + 1)) * prim - math.sqrt(2.0 / (k + 1)) * phi[k]
        prim_inf = math.sqrt(k / (k + 1)) * prim_inf
    s = 2.0 * prim - prim_inf

    log_sum_sq = sps.logsumexp(2.0 * logphi[:n], axis=0)
    coef = 0.5 * math.sqrt(n / 2.0)
    corr_sign = sgn[n - 1] * np.sign(s)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        log_corr = logphi[n - 1] + np.log(coef * np.abs(s))
        out = np.where(
            corr_sign >= 0,
            np.logaddexp(log_sum_sq, log_corr),
            log_sum_sq + np.log1p(-np.minimum(np.exp(log_corr - log_sum_sq), 1.0)),
        )
    return out


def _check_even(n: int):
    if n % 2 or n < 2 or n > MAX_EXACT_N:
        raise NotImplementedError(
            f"exact density is available for even 2 <= N <= {MAX_EXACT_N} (got N={n}); "
            "use mc_density_histogram for other sizes"
        )


def log_density_exact(n: int, t) -> np.ndarray | float:
    """log rho_N(t) of the standardized GOE (a = 1/N), N even."""
    _check_even(n)
    tt = np.asarray(t, dtype=float)
    y = math.sqrt(n) * tt
    out = _log_kernel_goe(n, y.ravel()).reshape(tt.shape) - 0.5 * math.log(n)
    return float(out) if np.ndim(t) == 0 else out


def density_exact(n: int, t):
    """Mean eigenvalue density rho_N(t) of the standardized GOE, N even."""
    lv = log_density_exact(n, t)
    return float(np.exp(lv)) if np.ndim(t) == 0 else np.exp(lv)


def density_exact_scaled(n: int, a: float, t):
    """rho_{n,a}(t) from the standardized density through the rescaling identity."""
    s = math.sqrt(a * n)
    return density_exact(n, np.asarray(t) / s) / s


# ---------------------------------------------------------------------------
# asymptotic and edge forms


def psi_plus(t):
    t = np.abs(np.asarray(t, dtype=float))
    r = np.sqrt(np.maximum(t * t - 2.0, 0.0))
    out = 0.5 * t * r - np.log((t + r) / SQRT2)
    return float(out) if out.ndim == 0 else out


def density_asymptotic(n: int, t: float) -> float:
    """Large-N density: semicircle inside, exponentially small tail outside."""
    at = abs(t)
    if abs(at - SQRT2) < 1e-6:
        raise ValueError("t is at the spectral edge; use density_edge")
    if at < SQRT2:
        return math.sqrt(2.0 - t * t) / math.pi
    r = math.sqrt(at * at - 2.0)
    return math.exp(-n * psi_plus(at)) / (2.0 * math.sqrt(math.pi * n) * r**0.5 * (at + r) ** 0.5)


def density_edge(zeta):
    """Edge-scaling density Ai'^2 - z Ai^2 + Ai (1 - int_z^inf Ai) / 2."""
    z = np.asarray(zeta, dtype=float)
    ai = airy_ai(z)
    aip = airy_ai_prime(z)
    # beyond z = 12 the Airy tail integral is < 1e-13 and drops out
    tail = np.zeros_like(z)
    near = z <= 12.0
    tail[near] = airy_ai_tail_integral(z[near])
    out = aip * aip - z * ai * ai + 0.5 * ai * (1.0 - tail)
    return float(out) if np.ndim(zeta) == 0 else out


# ---------------------------------------------------------------------------
# direct quadrature for small n


def _ordered_rule(k: int, lo: float, hi: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (M, k) and weights for lo < x_1 < ... < x_k < hi."""
    if k == 0:
        return np.zeros((1, 0)), np.ones(1)
    u, w = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (u + 1.0)
    w = 0.5 * w
    top = lo + (hi - lo) * u
    nodes = top[:, None]
    weights = (hi - lo) * w
    for _ in range(k - 1):
        upper = nodes[:, 0]
        new = lo + (upper[:, None] - lo) * u[None, :]
        wnew = weights[:, None] * (upper[:, None] - lo) * w[None, :]
        nodes = np.concatenate(
            [new.reshape(-1, 1), np.repeat(nodes, order, axis=0)], axis=1
        )
        weights = wnew.ravel()
    return nodes, weights


def _abs_vandermonde(x: np.ndarray) -> np.ndarray:
    out = np.ones(x.shape[0])
    m = x.shape[1]
    for i in range(m):
        for j in range(i + 1, m):
            out *= np.abs(x[:, j] - x[:, i])
    return out


def _check_small(n: int):
    if not 1 <= n <= 4:
        raise ValueError(f"direct quadrature supports 1 <= n <= 4, got {n}")


def lambda_max_density_exact(n: int, a: float, t: float, order: int = 48) -> float:
    """Density of the largest eigenvalue of the n x n GOE by direct quadrature."""
    _check_small(n)
    logz = selberg_log_z(n, a)
    pref = n * math.exp(-t * t / (2 * a) - logz)
    if n == 1:
        return pref
    lo = min(t, 0.0) - 12.0 * math.sqrt(a)
    x, w = _ordered_rule(n - 1, lo, t, order)
    f = np.prod(t - x, axis=1) * np.exp(-np.sum(x * x, axis=1) / (2 * a)) * _abs_vandermonde(x)
    return pref * math.factorial(n - 1) * float(np.dot(w, f))


def density_quadrature(n: int, a: float, t: float, order: int = 48) -> float:
    """rho_{n,a}(t) for n <= 4 by integrating out the other n-1 eigenvalues.

    The ordered region is split by how many eigenvalues lie below t, so every
    piece has a smooth integrand.
    """
    _check_small(n)
    logz = selberg_log_z(n, a)
    pref = math.exp(-t * t / (2 * a) - logz)
    if n == 1:
        return pref
    m = n - 1
    lo = min(t, 0.0) - 12.0 * math.sqrt(a)
    hi = max(t, 0.0) + 12.0 * math.sqrt(a)
    total = 0.0
    for k in range(m + 1):
        xl, wl = _ordered_rule(k, lo, t, order)
        xr, wr = _ordered_rule(m - k, t, hi, order)
        x = np.concatenate([np.repeat(xl, len(wr), axis=0), np.tile(xr, (len(wl), 1))], axis=1)
        w = np.repeat(wl, len(wr)) * np.tile(wr, len(wl))
        f = np.prod(np.abs(t - x), axis=1) * np.exp(-np.sum(x * x, axis=1) / (2 * a)) * _abs_vandermonde(x)
        total += float(np.dot(w, f))
    return pref * math.factorial(m) * total


def density_nonstandard(n: int, a: float, t: float) -> float:
    """rho_{n,a}(t) from whichever deterministic route is available."""
    if n % 2 == 0 and n <= MAX_EXACT_N:
        return float(density_exact_scaled(n, a, t))
    return density_quadrature(n, a, t)


# ---------------------------------------------------------------------------
# Monte Carlo


def _chunk_size(n: int) -> int:
    return max(1, min(20000, (1 << 20) // (n * n)))


def mc_eigen_statistic(
    spec: GoeEnsembleSpec,
    stat: Callable[[np.ndarray], np.ndarray],
    n_samples: int,
    stream: RandomStream,
    threads: int = 1,
) -> np.ndarray:
    """Apply ``stat`` to batches of sorted spectra and stack the results.

    ``stat`` receives an array of shape (batch, n) of ascending eigenvalues
    and returns an array whose first axis is the batch.  The output row order
    is the sample order, independent of ``threads``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    size = _chunk_size(spec.n)
    counts = [size] * (n_samples // size)
    if n_samples % size:
        counts.append(n_samples % size)

    def run(i: int) -> np.ndarray:
        rng = stream.substream(i).generator()
        h = sample_goe_batch(spec, counts[i], rng)
        return np.asarray(stat(np.linalg.eigvalsh(h)))

    if threads <= 1 or len(counts) == 1:
        parts = [run(i) for i in range(len(counts))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(len(counts))))
    return np.concatenate(parts, axis=0)


def mc_spectral_functional(
    spec: GoeEnsembleSpec,
    g: Callable[[np.ndarray], np.ndarray],
    n_samples: int,
    stream: RandomStream,
    threads: int = 1,
) -> McEstimate:
    """Estimate E{(1/n) sum_i g(lambda_i)} = int g rho_{n,a}."""
    vals = mc_eigen_statistic(spec, lambda ev: np.mean(g(ev), axis=1), n_samples, stream, threads)
    return McEstimate.from_samples(vals)


def mc_order_statistic_functional(
    spec: GoeEnsembleSpec,
    k: int,
    g: Callable[[np.ndarray], np.ndarray],
    n_samples: int,
    stream: RandomStream,
    threads: int = 1,
) -> McEstimate:
    """Estimate E{g(lambda_(k))} where lambda_(1) is the largest eigenvalue."""
    if not 1 <= k <= spec.n:
        raise ValueError(f"k must lie in [1, {spec.n}], got {k}")
    vals = mc_eigen_statistic(spec, lambda ev: g(ev[:, spec.n - k]), n_samples, stream, threads)
    return McEstimate.from_samples(vals)


def mc_density_histogram(
    spec: GoeEnsembleSpec,
    edges: Sequence[float],
    n_samples: int,
    stream: RandomStream,
    threads: int = 1,
) -> DensityCurve:
    """Histogram estimate of rho_{n,a} with per-bin standard errors."""
    edges = np.asarray(edges, dtype=float)
    widths = np.diff(edges)

    def stat(ev):
        idx = np.searchsorted(edges, ev, side="right") - 1
        out = np.zeros((ev.shape[0], len(widths)))
        inside = (idx >= 0) & (idx < len(widths))
        rows = np.broadcast_to(np.arange(ev.shape[0])[:, None], ev.shape)
        np.add.at(out, (rows[inside], idx[inside]), 1.0)
        return out / (spec.n * widths)

    vals = mc_eigen_statistic(spec, stat, n_samples, stream, threads)
    mean = vals.mean(axis=0)
    se = vals.std(axis=0, ddof=1) / math.sqrt(n_samples)
    centers = 0.5 * (edges[1:] + edges[:-1])
    return DensityCurve(centers, mean, "mc", se, meta={"edges": edges, "n": spec.n, "a": spec.a})


def check_goe5(
    n: int, a: float, t: float, n_samples: int, stream: RandomStream, threads: int = 1
) -> tuple[McEstimate, float]:
    """Both sides of E|det(t - H')| = Z_n/Z_{n-1} e^{t^2/2a} rho_{n,a}(t), H' of size n-1."""
    if n < 2:
        raise ValueError("n must be >= 2")
    lhs = mc_eigen_statistic(
        GoeEnsembleSpec(n - 1, a), lambda ev: np.abs(np.prod(t - ev, axis=1)), n_samples, stream, threads
    )
    log_ratio = selberg_log_z(n, a) - selberg_log_z(n - 1, a)
    rhs = math.exp(log_ratio + t * t / (2 * a)) * density_nonstandard(n, a, t)
    return McEstimate.from_samples(lhs), rhs


# ---------------------------------------------------------------------------
# exact largest-eigenvalue law for even N (de Bruijn Pfaffian)


def _hermite_primitives(n: int, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """phi_0..phi_{n-1} and their primitives from -inf, shape (n, len(y))."""
    logphi, sgn = log_hermite_phi_all(n, y)
    phi = sgn * np.exp(logphi)
    prim = np.empty((n, y.size))
    prim[0] = SQRT2 * math.pi**0.25 * sps.ndtr(y)
    if n > 1:
        prim[1] = -SQRT2 * phi[0]
    for k in range(1, n - 1):
        prim[k + 1] = math.sqrt(k / (k + 1)) * prim[k - 1] - math.sqrt(2.0 / (k + 1)) * phi[k]
    return phi[:n], prim


@dataclass
class LambdaMaxLaw:
    """Distribution of the largest eigenvalue of the standardized GOE, N even.

    By de Bruijn's identity F_N(t)^2 = det M(t) / det M(inf) with

        M_jk(t) = int_{-inf}^{y} (Phi_j phi_k - Phi_k phi_j),   y = sqrt(N) t,

    and since dM/dy is the rank-two matrix Phi phi^T - phi Phi^T the density
    follows exactly as F_N'(t) = sqrt(N) F_N(t) phi(y)^T M(t)^{-1} Phi(y).
    Panels of width ``panel`` (in y) with ``order``-point Gauss-Legendre
    resolve the oscillation of the Hermite functions.
    """

    n: int
    panel: float = 0.25
    order: int = 20

    # log F below this is dominated by rounding in the determinant ratio
    RELIABLE_LOG_CDF = -45.0

    def __post_init__(self):
        _check_even(self.n)
        self._y_lo = -math.sqrt(2.0 * self.n) - 12.0
        # beyond y_hi every phi_j is below 1e-30 of its peak, so M(y) = M(inf)
        self._y_hi = math.sqrt(2.0 * self.n) + 12.0
        m_inf = self._increment(self._y_lo, self._y_hi)
        self._logdet_inf = np.linalg.slogdet(m_inf)[1]
        _, prim = _hermite_primitives(self.n, np.array([self._y_hi]))
        self._c_inf = np.linalg.solve(m_inf, prim[:, 0])

    def _increment(self, y0: float, y1: float) -> np.ndarray:
        """int_{y0}^{y1} (Phi phi^T - phi Phi^T) by composite Gauss-Legendre."""
        k = max(1, int(math.ceil((y1 - y0) / self.panel)))
        edges = np.linspace(y0, y1, k + 1)
        u, w = np.polynomial.legendre.leggauss(self.order)
        h = 0.5 * np.diff(edges)
        nodes = (edges[:-1, None] + h[:, None] * (u + 1.0)).ravel()
        weights = (h[:, None] * w).ravel()
        phi, prim = _hermite_primitives(self.n, nodes)
        a = (prim * weights) @ phi.T
        return a - a.T

    def _log_density_far(self, y: float) -> float:
        # F = 1 and Phi = Phi(inf) to double precision: F' = sqrt(N) phi(y) . c_inf
        logphi, sgn = log_hermite_phi_all(self.n - 1, np.array([y]))
        val, sign = sps.logsumexp(
            logphi[:, 0] + np.log(np.abs(self._c_inf)), b=sgn[:, 0] * np.sign(self._c_inf), return_sign=True
        )
        return 0.5 * math.log(self.n) + float(val) if sign > 0 else -math.inf

    def _log_pair(self, m: np.ndarray, y: float) -> tuple[float, float]:
        sign, logdet = np.linalg.slogdet(m)
        if sign == 0:
            return -math.inf, -math.inf
        logf = 0.5 * (logdet - self._logdet_inf)
        phi, prim = _hermite_primitives(self.n, np.array([y]))
        ratio = float(phi[:, 0] @ np.linalg.solve(m, prim[:, 0]))
        logd = 0.5 * math.log(self.n) + logf + math.log(ratio) if ratio > 0 else -math.inf
        return logf, logd

    def log_cdf(self, t: float) -> float:
        y = math.sqrt(self.n) * t
        if y >= self._y_hi:
            return 0.0
        if y <= self._y_lo:
            return -math.inf
        sign, logdet = np.linalg.slogdet(self._increment(self._y_lo, y))
        return 0.5 * (logdet - self._logdet_inf) if sign != 0 else -math.inf

    def cdf(self, t: float) -> float:
        return math.exp(self.log_cdf(t))

    def log_density(self, t: float) -> float:
        """log F_N'(t) for the standardized ensemble."""
        y = math.sqrt(self.n) * t
        if y >= self._y_hi:
            return self._log_density_far(y)
        if y <= self._y_lo:
            return -math.inf
        return self._log_pair(self._increment(self._y_lo, y), y)[1]

    def density(self, t: float) -> float:
        return math.exp(self.log_density(t))

    def tabulate(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(log F_N, log F_N') on an ascending grid, building M(t) cumulatively."""
        t = np.asarray(t, dtype=float)
        if np.any(np.diff(t) <= 0):
            raise ValueError("grid must be strictly ascending")
        logf = np.full(t.size, -np.inf)
        logd = np.full(t.size, -np.inf)
        m = np.zeros((self.n, self.n))
        y_prev = self._y_lo
        for i, y in enumerate(math.sqrt(self.n) * t):
            if y <= self._y_lo:
                continue
            if y >= self._y_hi:
                logf[i] = 0.0
                logd[i] = self._log_density_far(y)
                continue
            m = m + self._increment(y_prev, y)
            y_prev = y
            logf[i], logd[i] = self._log_pair(m, y)
        return logf, logd
