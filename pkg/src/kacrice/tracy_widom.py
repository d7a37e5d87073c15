"""GOE Tracy-Widom distribution F1 from the Hastings-McLeod Painleve II solution.

The solution of q'' = x q + 2 q^3 that decays like Ai(x) is integrated from a
point on the right, where q and q' are set to their Airy values, down to the
left end of the table.  Three running integrals ride along with (q, q'):

    I1(z) = int_z^inf q,   u(z) = int_z^inf q^2,   I2(z) = int_z^inf u = int_z^inf (x - z) q^2

so that F1 = exp(-I1/2 - I2/2) and F1' = F1 (q + u)/2 are read off without
differencing anything.  Everything right of the starting point is closed with
the Airy function (the cubic term is below 1e-23 there).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import IntegrationError, airy_ai, airy_ai_prime, airy_ai_tail_integral, gauss_legendre, ode_solve

# numerical value of the derivative of Riemann zeta used in the tail constant
ZETA_PRIME = -0.1654211437
LN_TAIL_A = -(169.0 / 96.0) * math.log(2.0) + 0.5 * ZETA_PRIME
TAIL_A = math.exp(LN_TAIL_A)


class PainleveBlowUp(IntegrationError):
    """The integration left the Hastings-McLeod branch."""

    def __init__(self, zeta: float, msg: str):
        super().__init__(f"Painleve II solution lost at zeta={zeta:.6g}: {msg}")
        self.zeta = zeta


def _airy_closure(z: float) -> tuple[float, float, float, float, float]:
    """(q, q', I1, u, I2) at z using the linearised (Airy) solution."""
    ai = airy_ai(z)
    aip = airy_ai_prime(z)
    i1 = airy_ai_tail_integral(z)
    u = aip * aip - z * ai * ai
    # int_z^inf (x - z) Ai(x)^2 dx in closed form (its derivative is -u)
    i2 = (2.0 * z * z * ai * ai - 2.0 * z * aip * aip - ai * aip) / 3.0
    return ai, aip, i1, u, i2


@dataclass
class PainleveTable:
    """Hastings-McLeod solution sampled on a descending grid.

    ``u`` is the running integral of q^2; ``I2`` is int_z^inf (x - z) q(x)^2 dx.
    """

    grid: np.ndarray
    q: np.ndarray
    q_prime: np.ndarray
    I1: np.ndarray
    u: np.ndarray
    I2: np.ndarray
    zeta_hi: float
    zeta_lo: float
    dense: object = field(repr=False, default=None)

    def state(self, zeta):
        """Interpolated (q, q', I1, u, I2) at ``zeta`` (inside the table)."""
        return self.dense(np.asarray(zeta, dtype=float))


def solve_painleve2(zeta_hi: float = 12.0, zeta_lo: float = -10.0, tol: float = 1e-13, n_grid: int = 2201) -> PainleveTable:
    """Integrate Painleve II backward from the Airy boundary at ``zeta_hi``.

    Raises
    ------
    PainleveBlowUp
        If q turns negative or grows past the left asymptote by more than a
        factor 2, which is how the unstable branches announce themselves.
    """
    if zeta_hi < 6:
        raise ValueError("zeta_hi must be >= 6")
    if zeta_lo < -10:
        raise ValueError("zeta_lo must be >= -10")
    if not zeta_hi > zeta_lo:
        raise ValueError("need zeta_hi > zeta_lo")

    def rhs(x, y):
        q, qp, _, u, _ = y
        return np.array([qp, x * q + 2.0 * q**3, -q, -q * q, -u])

    init = _airy_closure(zeta_hi)
    grid = np.linspace(zeta_hi, zeta_lo, n_grid)
    try:
        traj = ode_solve(rhs, init, zeta_hi, zeta_lo, tol=tol, grid=grid, atol=1e-300)
    except IntegrationError as exc:
        raise PainleveBlowUp(zeta_lo, str(exc)) from exc
    q = traj.y[0]
    bad = (q <= 0) | (q > 2.0 * np.sqrt(np.maximum(-grid / 2.0, 0.0)) + 1.0)
    if np.any(bad):
        z = float(grid[np.argmax(bad)])
        raise PainleveBlowUp(z, "q left the Hastings-McLeod branch")
    return PainleveTable(
        grid=grid, q=q, q_prime=traj.y[1], I1=traj.y[2], u=traj.y[3], I2=traj.y[4],
        zeta_hi=zeta_hi, zeta_lo=zeta_lo, dense=traj.dense,
    )


def log_f1_tail_left(zeta: float) -> float:
    """log of the left-tail asymptote of F1, valid for zeta <= -4."""
    if zeta > -4:
        raise ValueError("left-tail formula requires zeta <= -4")
    z = -zeta
    return (49.0 / 32.0) * math.log(2.0) + LN_TAIL_A - math.log(z) / 16.0 - z**3 / 24.0 - z**1.5 / (3.0 * math.sqrt(2.0))


def f1_tail_left(zeta: float) -> float:
    """Left-tail asymptote 2^{49/32} A |z|^{-1/16} exp(-|z|^3/24 - |z|^{3/2}/(3 sqrt2))."""
    return math.exp(log_f1_tail_left(zeta))


def f1_tail_left_log_slope(zeta: float) -> float:
    """d/dzeta of ln f1_tail_left."""
    z = -zeta
    return 1.0 / (16.0 * z) + z * z / 8.0 + math.sqrt(z) / (2.0 * math.sqrt(2.0))


def f1_tail_right_density(zeta: float) -> float:
    """Right-tail asymptote of F1', namely Ai(zeta)/2, valid for zeta >= 4."""
    if zeta < 4:
        raise ValueError("right-tail formula requires zeta >= 4")
    return 0.5 * airy_ai(zeta)


@dataclass
class Tw1Evaluator:
    """F1 and F1' backed by a Painleve table, with analytic tails outside it.

    With ``tail_fallback=False``, arguments outside the table raise.
    """

    table: PainleveTable = None
    tail_const_A: float = TAIL_A
    tail_fallback: bool = True

    def __post_init__(self):
        if self.table is None:
            self.table = solve_painleve2()

    def _state(self, zeta: float):
        t = self.table
        if zeta > t.zeta_hi:
            if not self.tail_fallback:
                raise ValueError(f"zeta={zeta} beyond table right end {t.zeta_hi}")
            return np.array(_airy_closure(zeta))
        if zeta < t.zeta_lo:
            return None
        return t.state(zeta)

    def _check_left(self, zeta):
        if not self.tail_fallback:
            raise ValueError(f"zeta={zeta} beyond table left end {self.table.zeta_lo}")

    def f1(self, zeta: float) -> float:
        s = self._state(zeta)
        if s is None:
            self._check_left(zeta)
            return f1_tail_left(zeta)
        return math.exp(-0.5 * s[2] - 0.5 * s[4])

    def f1_prime(self, zeta: float) -> float:
        s = self._state(zeta)
        if s is None:
            self._check_left(zeta)
            return f1_tail_left(zeta) * f1_tail_left_log_slope(zeta)
        return math.exp(-0.5 * s[2] - 0.5 * s[4]) * 0.5 * (s[0] + s[3])

    def f1_prime_array(self, zeta: np.ndarray) -> np.ndarray:
        """Vectorised F1' for points inside the table."""
        zeta = np.asarray(zeta, dtype=float)
        if np.any(zeta < self.table.zeta_lo) or np.any(zeta > self.table.zeta_hi):
            return np.array([self.f1_prime(z) for z in zeta])
        s = self.table.state(zeta)
        return np.exp(-0.5 * s[2] - 0.5 * s[4]) * 0.5 * (s[0] + s[3])

    def log_f1_prime_derivative(self, zeta: float) -> float:
        """d/dzeta ln F1' = (q + u)/2 + (q' - q^2)/(q + u), inside the table."""
        s = self.table.state(zeta)
        q, qp, _, u, _ = s
        return 0.5 * (q + u) + (qp - q * q) / (q + u)

    def moments(self, panels: int = 220, order: int = 12) -> tuple[float, float, float]:
        """Mass of F1' inside the table plus the tail masses, mean and variance.

        The mean and variance use the table interval only; the tails beyond
        it carry less than 1e-12 of the mass.
        """
        t = self.table
        edges = np.linspace(t.zeta_lo, t.zeta_hi, panels + 1)
        parts = [gauss_legendre(order, a, b) for a, b in zip(edges[:-1], edges[1:])]
        x = np.concatenate([p[0] for p in parts])
        w = np.concatenate([p[1] for p in parts])
        d = self.f1_prime_array(x)
        m0, m1, m2 = w @ d, w @ (x * d), w @ (x * x * d)
        mass = m0 + self.f1(t.zeta_lo) + (1.0 - self.f1(t.zeta_hi))
        mean = m1 / m0
        return float(mass), float(mean), float(m2 / m0 - mean * mean)

    def to_csv(self, zetas=None) -> str:
        t = self.table
        if zetas is None:
            zetas = t.grid[::-1]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["zeta", "q", "F1", "F1_prime"])
        for z in zetas:
            s = self._state(float(z))
            if s is None:
                w.writerow([repr(float(z)), "nan", repr(self.f1(z)), repr(self.f1_prime(z))])
            else:
                w.writerow([repr(float(z)), repr(float(s[0])), repr(self.f1(z)), repr(self.f1_prime(z))])
        return buf.getvalue()


_DEFAULT: Tw1Evaluator | None = None


def default_evaluator() -> Tw1Evaluator:
    """A lazily built, shared evaluator on [-10, 12]."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Tw1Evaluator()
    return _DEFAULT


def f1(zeta: float) -> float:
    return default_evaluator().f1(zeta)


def f1_prime(zeta: float) -> float:
    return default_evaluator().f1_prime(zeta)
