"""Numerical primitives shared by the counting modules.

Special functions, quadrature on finite and infinite domains, an adaptive
ODE integrator and seeded random streams.  Airy, modified Bessel and the
log-gamma function are thin wrappers over :mod:`scipy.special` and
:mod:`math` (AMOS/Cephes give ~1e-14 relative accuracy for Ai on [-15, 15],
well past anything a hand-rolled series/asymptotic switch achieves near
|x| ~ 6).  The oscillator wavefunctions are evaluated here with a rescaled
three-term recurrence so that they stay finite where ``exp(-x**2/2)``
underflows.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _spi
from scipy import special as _sps


class QuadratureWarning(UserWarning):
    """Adaptive quadrature stopped before reaching the requested tolerance."""


class IntegrationError(RuntimeError):
    """Raised when the ODE integrator cannot continue (step-size underflow)."""


# ---------------------------------------------------------------------------
# random streams


@dataclass(frozen=True)
class RandomStream:
    """A reproducible, splittable source of random numbers.

    Streams are keyed by ``(seed, stream_id)`` and backed by the counter-based
    Philox generator, so two streams with different ids never overlap and the
    same key always yields the same sequence.  ``stream_id`` may be an integer
    or a tuple of integers (the latter is what :meth:`substream` produces).
    """

    seed: int
    stream_id: int | tuple[int, ...] = 0

    def _key(self) -> tuple[int, ...]:
        if isinstance(self.stream_id, tuple):
            return self.stream_id
        return (int(self.stream_id),)

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed) & (2**64 - 1), spawn_key=self._key())
        return np.random.Generator(np.random.Philox(ss))

    def substream(self, index: int) -> "RandomStream":
        return RandomStream(self.seed, self._key() + (int(index),))


# ---------------------------------------------------------------------------
# special functions


def ln_gamma(x: float) -> float:
    """log Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _check_finite(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("argument must be finite")
    return arr


def _as_output(arr: np.ndarray, like):
    return float(arr) if np.ndim(like) == 0 else arr


def airy_ai(x):
    """Airy function Ai(x); accepts scalars or arrays."""
    arr = _check_finite(x)
    return _as_output(_sps.airy(arr)[0], x)


def airy_ai_prime(x):
    """Derivative Ai'(x); accepts scalars or arrays."""
    arr = _check_finite(x)
    return _as_output(_sps.airy(arr)[1], x)


_GL20 = np.polynomial.legendre.leggauss(20)


def _composite_ai(lo: np.ndarray, hi: np.ndarray, panels: int) -> np.ndarray:
    """int_lo^hi Ai for arrays of endpoints, with a fixed number of GL20 panels."""
    u = np.linspace(0.0, 1.0, panels + 1)
    edges = lo[:, None] + (hi - lo)[:, None] * u
    a = edges[:, :-1, None]
    h = 0.5 * (edges[:, 1:, None] - a)
    t = a + h * (_GL20[0] + 1.0)
    return np.sum(h * _GL20[1] * _sps.airy(t)[0], axis=(1, 2))


def _ai_tail_flat(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0.0
    far = x <= -20.0
    mid = ~pos & ~far
    # Ai(x + s) decays like exp(-sqrt(x) s): cover ~40 e-folds
    xp = x[pos]
    out[pos] = _composite_ai(xp, xp + 40.0 / np.maximum(1.0, np.sqrt(xp)), 24)
    # int_0^inf Ai = 1/3; panels of at most one unit resolve the oscillation
    xm = x[mid]
    out[mid] = 1.0 / 3.0 + _composite_ai(xm, np.zeros_like(xm), 20)
    # scipy's integral is accurate to ~1e-15 there (but not near 0)
    out[far] = 1.0 / 3.0 + _sps.itairy(-x[far])[2]
    return out


def airy_ai_tail_integral(x):
    """Return the integral of Ai from x to +infinity."""
    arr = _check_finite(x)
    flat = arr.ravel()
    out = np.concatenate([_ai_tail_flat(flat[k : k + 4096]) for k in range(0, flat.size, 4096)] or [np.empty(0)])
    return _as_output(out.reshape(arr.shape), x)


def bessel_i(order: int, x, log_scaled: bool = False):
    """Modified Bessel function I_0 or I_1.

    With ``log_scaled=True`` returns ``(log|I|, sign)`` so that arguments far
    beyond the overflow threshold (~713) remain usable.
    """
    if order not in (0, 1):
        raise ValueError("only orders 0 and 1 are supported")
    arr = _check_finite(x)
    scaled = _sps.i0e(arr) if order == 0 else _sps.i1e(arr)
    if log_scaled:
        sign = np.sign(scaled)
        with np.errstate(divide="ignore"):
            logv = np.log(np.abs(scaled)) + np.abs(arr)
        if np.ndim(x) == 0:
            return float(logv), float(sign)
        return logv, sign
    with np.errstate(over="ignore"):
        val = scaled * np.exp(np.abs(arr))
    if not np.all(np.isfinite(val)):
        raise OverflowError("I_nu(x) overflows; use log_scaled=True")
    return _as_output(val, x)


def hermite_phi(j: int, x):
    """Orthonormal oscillator wavefunction phi_j(x).

    phi_j(x) = (2^j j! sqrt(pi))^{-1/2} exp(-x^2/2) H_j(x), evaluated with the
    recurrence on the normalised functions.
    """
    logabs, sign = log_hermite_phi_all(j, x)
    out = sign[-1] * np.exp(logabs[-1])
    return _as_output(out, x)


def log_hermite_phi_all(jmax: int, x) -> tuple[np.ndarray, np.ndarray]:
    """Log-magnitudes and signs of phi_0..phi_jmax at every point of ``x``.

    Returns arrays of shape ``(jmax + 1,) + shape(x)``.  The recurrence

        phi_{k+1} = sqrt(2/(k+1)) x phi_k - sqrt(k/(k+1)) phi_{k-1}

    runs on the polynomial part with a per-point running scale, so nothing
    overflows or underflows for |x| up to several hundred.
    """
    if jmax < 0:
        raise ValueError("j must be nonnegative")
    xs = _check_finite(x)
    shape = xs.shape
    xs = xs.ravel()
    logabs = np.empty((jmax + 1, xs.size))
    sign = np.empty((jmax + 1, xs.size))
    base = -0.5 * xs * xs - 0.25 * math.log(math.pi)
    # p_k is phi_k * exp(x^2/2) * pi^{1/4} / exp(scale)
    scale = np.zeros_like(xs)
    p_prev = np.zeros_like(xs)
    p_cur = np.ones_like(xs)
    logabs[0] = base
    sign[0] = 1.0
    for k in range(jmax):
        p_next = math.sqrt(2.0 / (k + 1)) * xs * p_cur - math.sqrt(k / (k + 1)) * p_prev
        p_prev, p_cur = p_cur, p_next
        big = np.abs(p_cur) > 1e150
        if np.any(big):
            f = np.where(big, 1e-150, 1.0)
            p_cur = p_cur * f
            p_prev = p_prev * f
            scale = scale - np.log(f)
        with np.errstate(divide="ignore"):
            logabs[k + 1] = base + scale + np.log(np.abs(p_cur))
        sign[k + 1] = np.sign(p_cur)
    return logabs.reshape((jmax + 1,) + shape), sign.reshape((jmax + 1,) + shape)


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for :func:`integrate`.

    Infinite endpoints are mapped by scipy's QUADPACK (``x = a + (1-u)/u`` on
    half-lines; the full line is split at zero).
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 500
    semi_infinite_map: str = "x = a + (1 - u)/u, u in (0, 1]"

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_QUAD = QuadratureSpec()


def integrate(
    f: Callable[[float], float],
    lower: float,
    upper: float,
    spec: QuadratureSpec = DEFAULT_QUAD,
    points: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Adaptive Gauss-Kronrod integral of ``f`` over [lower, upper].

    Either bound may be infinite.  ``points`` marks interior breakpoints
    (finite domains only).  A :class:`QuadratureWarning` is issued, and the
    partial value returned, when the subdivision limit is hit.
    """
    kw = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions, full_output=1)
    finite = math.isfinite(lower) and math.isfinite(upper)
    if points is not None and len(points) and finite:
        kw["points"] = list(points)
    elif points is not None and len(points):
        # QUADPACK rejects breakpoints on infinite ranges: split manually.
        pts = sorted(p for p in points if lower < p < upper)
        edges = [lower, *pts, upper]
        total, err = 0.0, 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            v, e = integrate(f, a, b, spec)
            total += v
            err += e
        return total, err
    res = _spi.quad(f, lower, upper, **kw)
    value, err = res[0], res[1]
    if len(res) > 3:
        warnings.warn(f"quadrature did not converge: {res[3]}", QuadratureWarning, stacklevel=2)
    return value, err


def gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


# ---------------------------------------------------------------------------
# ODE


@dataclass
class Trajectory:
    """Solution of :func:`ode_solve` on the requested output grid.

    ``dense`` is the continuous interpolant of the underlying Runge-Kutta
    solver and may be evaluated anywhere between ``x0`` and ``x1``.
    """

    x: np.ndarray
    y: np.ndarray
    dense: Callable[[np.ndarray], np.ndarray]
    n_steps: int


def ode_solve(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    init: Sequence[float],
    x0: float,
    x1: float,
    tol: float = 1e-10,
    grid: Sequence[float] | None = None,
    atol: float | None = None,
) -> Trajectory:
    """Integrate ``y' = rhs(x, y)`` from x0 to x1 (either direction) with DOP853.

    ``tol`` is the relative error target per step; ``atol`` defaults to
    ``tol * 1e-3``.  Raises :class:`IntegrationError` if the step size
    collapses, which is how blow-up of the solution shows itself.
    """
    y0 = np.asarray(init, dtype=float)
    if grid is None:
        grid = np.linspace(x0, x1, 201)
    grid = np.asarray(grid, dtype=float)
    sol = _spi.solve_ivp(
        rhs,
        (x0, x1),
        y0,
        method="DOP853",
        rtol=tol,
        atol=tol * 1e-3 if atol is None else atol,
        dense_output=True,
    )
    if sol.status != 0:
        raise IntegrationError(f"integration stopped at x={sol.t[-1]:.6g}: {sol.message}")
    return Trajectory(x=grid, y=sol.sol(grid), dense=sol.sol, n_steps=len(sol.t) - 1)
