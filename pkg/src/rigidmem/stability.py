"""Equilibrium stability analysis for the delayed and fractional systems.

Covers the quadratic characteristic polynomials of the fractional rigid
body at its axis equilibria (classified through the sector condition on
w = lambda^order), the transcendental characteristic function of the
delayed Euler-Poincare system with its critical-delay bound and numerical
crossing, and argument-principle root counting for scalar and planar
fractional-delay benchmarks.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels as _kern
from .models import InertiaSetup, RigidBodyParams

__all__ = [
    "STABLE",
    "MARGINAL",
    "UNSTABLE",
    "CharQuadratic",
    "StabilityReport",
    "char_frac_equilibrium",
    "matignon_classify",
    "char_ep_eval",
    "tau_c_formula",
    "critical_delay_scan",
    "frac_delay_char_eval",
    "count_rhp_roots",
    "scalar_frac_delay_check",
    "planar_frac_delay_check",
]

STABLE = "asymptotically-stable"
MARGINAL = "marginal"
UNSTABLE = "unstable"

#: sector-margin tolerance separating "marginal" from a strict verdict
SECTOR_TOL = 1e-12

#: residual below which a located characteristic root is accepted
RESIDUAL_TOL = 1e-10

#: relative |f| on a contour below which a boundary root is flagged
_BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class CharQuadratic:
    """Quadratic c2 w^2 + c1 w + c0 in the variable w = lambda^order.

    ``zero_factor_order`` records how many structural lambda^order factors
    were split off (the neutral direction along the equilibrium axis).
    """

    c2: float
    c1: float
    c0: float
    zero_factor_order: int = 0

    def __post_init__(self):
        if self.c2 == 0:
            raise ValueError("leading coefficient c2 must be nonzero")

    def roots(self) -> tuple[complex, complex]:
        disc = complex(self.c1 * self.c1 - 4.0 * self.c2 * self.c0)
        sq = cmath.sqrt(disc)
        r1 = (-self.c1 + sq) / (2.0 * self.c2)
        r2 = (-self.c1 - sq) / (2.0 * self.c2)
        return tuple(sorted((r1, r2), key=lambda w: (w.real, w.imag)))


@dataclass
class StabilityReport:
    """Root data, sector margins, and the resulting verdict.

    ``margins`` holds |arg(w)| - order*pi/2 per root where applicable;
    contour-based checks leave the root list empty and record the
    right-half-plane count in ``metadata``.
    """

    verdict: str
    roots: list = field(default_factory=list)
    margins: list = field(default_factory=list)
    alpha: float | None = None
    critical_delay: float | None = None
    structural_zero_roots: int = 0
    metadata: dict = field(default_factory=dict)

    @property
    def min_margin(self) -> float | None:
        return min(self.margins) if self.margins else None

    @property
    def dominant_root(self) -> complex | None:
        if not self.roots:
            return None
        idx = int(np.argmin(self.margins)) if self.margins else 0
        return self.roots[idx]

    def to_text(self) -> str:
        lines = [f"verdict = {self.verdict}"]
        if self.alpha is not None:
            lines.append(f"alpha = {self.alpha!r}")
        for i, w in enumerate(self.roots, start=1):
            lines.append(f"root{i}_re = {w.real!r}")
            lines.append(f"root{i}_im = {w.imag!r}")
        for i, m in enumerate(self.margins, start=1):
            lines.append(f"margin{i} = {m!r}")
        if self.critical_delay is not None:
            lines.append(f"critical_delay = {self.critical_delay!r}")
        if self.structural_zero_roots:
            lines.append(
                f"structural_zero_roots = {self.structural_zero_roots}")
        for key in sorted(self.metadata):
            lines.append(f"{key} = {self.metadata[key]}")
        return "\n".join(lines) + "\n"


_WHICH = {"M1": 1, "M2": 2, "M3": 3, 1: 1, 2: 2, 3: 3}


def char_frac_equilibrium(p: RigidBodyParams, which, m: float,
                          revised: bool = False) -> CharQuadratic:
    """Characteristic quadratic in w = lambda^order at an axis equilibrium.

    The plain system yields w^2 + const; the revised system adds a linear
    term from the dissipative part.  A common lambda^order factor (the
    neutral axis direction) is recorded, not expanded.
    """
    if m == 0:
        raise ValueError("equilibrium magnitude m must be nonzero")
    try:
        idx = _WHICH[which]
    except (KeyError, TypeError):
        raise ValueError(f"equilibrium must be one of M1, M2, M3, got {which!r}")
    a1, a2, a3 = p.a1, p.a2, p.a3
    m2 = m * m
    if not revised:
        const = {
            1: (a1 - a3) * (a1 - a2) * m2,
            2: -(a1 - a2) * (a2 - a3) * m2,
            3: (a1 - a3) * (a2 - a3) * m2,
        }[idx]
        return CharQuadratic(1.0, 0.0, const, zero_factor_order=1)
    lin = {
        1: -a1 * (a2 + a3 - 2.0 * a1) * m2,
        2: -a2 * (a1 + a3 - 2.0 * a2) * m2,
        3: -a3 * (a1 + a2 - 2.0 * a3) * m2,
    }[idx]
    const = {
        1: (a1 - a3) * (a1 - a2) * m2 * (a1 * a1 * m2 + 1.0),
        2: -(a1 - a2) * (a2 - a3) * m2 * (a2 * a2 * m2 + 1.0),
        3: (a1 - a3) * (a2 - a3) * m2 * (a3 * a3 * m2 + 1.0),
    }[idx]
    return CharQuadratic(1.0, lin, const, zero_factor_order=1)


def matignon_classify(q: CharQuadratic, order: float) -> StabilityReport:
    """Sector classification of the quadratic's roots in the w-plane.

    Asymptotically stable iff every root satisfies |arg(w)| > order*pi/2
    strictly; equality within SECTOR_TOL is marginal.  The recorded
    lambda^order factor is reported as a structural zero root (neutral
    direction), not entered into the verdict.
    """
    if not 0 < order <= 1:
        raise ValueError("order must lie in (0, 1]")
    roots = list(q.roots())
    half_sector = order * math.pi / 2.0
    margins = []
    for w in roots:
        if w == 0:
            margins.append(0.0)
        else:
            margins.append(abs(cmath.phase(w)) - half_sector)
    worst = min(margins)
    if worst > SECTOR_TOL:
        verdict = STABLE
    elif worst < -SECTOR_TOL:
        verdict = UNSTABLE
    else:
        verdict = MARGINAL
    return StabilityReport(
        verdict=verdict, roots=roots, margins=margins, alpha=order,
        structural_zero_roots=q.zero_factor_order,
        metadata={"sector_half_angle": half_sector})


def _ep_coeffs(s: InertiaSetup) -> tuple[float, float, float]:
    I1, I2, I3, cp, m = s.I1, s.I2, s.I3, s.coupling, s.m
    m2 = m * m
    q1 = cp * m2 / I1 * ((I2 - I1) / I2 + (I3 - I1) / I3)
    q2 = cp * cp * m2 * m2 * (I2 - I1) * (I3 - I1) / (I1 * I1 * I2 * I3)
    q0 = (I1 - I2) * (I3 - I1) * m2 / (I1 * I1 * I2 * I3)
    return q1, q2, q0


def char_ep_eval(s: InertiaSetup, kernel, lam) -> complex:
    """Characteristic function of the delayed Euler-Poincare equilibrium.

    Evaluates the reduced (tangent-space) quadratic-in-lambda bracket
    lambda^2 - q1 lambda k1(lambda) + q2 k1(lambda)^2 - q0; the full
    characteristic equation carries an extra structural lambda factor.
    Equals the 2x2 block determinant of the linearization for every kernel.
    """
    lam = complex(lam)
    k1 = _kern.laplace(kernel, lam)
    q1, q2, q0 = _ep_coeffs(s)
    return lam * lam - q1 * lam * k1 + q2 * k1 * k1 - q0


def tau_c_formula(s: InertiaSetup) -> float:
    """Sufficient critical-delay bound for the sharp-lag kernel.

    Requires I1 > I2 and I1 > I3, nonzero coupling and m.  This bound is
    exposed side by side with the numerically located crossing from
    :func:`critical_delay_scan`; the two need not coincide.
    """
    I1, I2, I3 = s.I1, s.I2, s.I3
    if not (I1 > I2 and I1 > I3):
        raise ValueError("tau_c requires I1 > I2 and I1 > I3")
    if s.coupling == 0:
        raise ValueError("tau_c requires nonzero delay coupling")
    if s.m == 0:
        raise ValueError("tau_c requires nonzero equilibrium magnitude m")
    num = I1 * (I3 * (I1 - I2) + I2 * (I1 - I3))
    den = 3.0 * abs(s.coupling) * s.m * s.m * (I1 - I2) * (I1 - I3)
    return num / den


def _newton_root_pair(s: InertiaSetup, tau: float, omega: float):
    """Polish (tau, omega) so bracket(i*omega) = 0 for the lag-tau kernel."""

    def fun(t, w):
        val = char_ep_eval(s, _kern.DiracKernel(max(t, 0.0)), 1j * w)
        return np.array([val.real, val.imag])

    x = np.array([tau, omega])
    for _ in range(50):
        f0 = fun(*x)
        if np.linalg.norm(f0) < 1e-14:
            break
        jac = np.empty((2, 2))
        for j in range(2):
            eps = 1e-7 * (1.0 + abs(x[j]))
            xp = x.copy()
            xp[j] += eps
            jac[:, j] = (fun(*xp) - f0) / eps
        try:
            step = np.linalg.solve(jac, f0)
        except np.linalg.LinAlgError:
            return None
        x = x - step
        if np.linalg.norm(step) < 1e-14 * (1.0 + np.linalg.norm(x)):
            break
    residual = float(np.linalg.norm(fun(*x)))
    if residual > RESIDUAL_TOL or x[0] < -1e-12 or x[1] <= 0:
        return None
    return max(x[0], 0.0), x[1], residual


def critical_delay_scan(s: InertiaSetup, omega_max: float = 50.0,
                        grid: int = 4000) -> float | None:
    """Smallest lag tau >= 0 placing a characteristic root on i*omega.

    Substitutes z = exp(-i omega tau) into the bracket, solves the
    resulting quadratic in z along an omega grid, and looks for |z| = 1
    crossings; each candidate is polished by a 2-d Newton iteration on the
    real and imaginary parts.  Returns None when no crossing exists below
    ``omega_max`` (coupling 0 never produces one).
    """
    if grid < 2:
        raise ValueError("grid must have at least 2 points")
    if s.coupling == 0:
        return None
    q1, q2, q0 = _ep_coeffs(s)

    def unit_gaps(omega):
        b = -q1 * 1j * omega
        cc = -(omega * omega) - q0
        sq = cmath.sqrt(b * b - 4.0 * q2 * cc)
        roots = sorted(((-b + sq) / (2.0 * q2), (-b - sq) / (2.0 * q2)),
                       key=lambda z: (z.real, z.imag))
        return roots, [abs(z) - 1.0 for z in roots]

    omegas = np.linspace(omega_max / grid, omega_max, grid)
    candidates = []
    _, prev_gaps = unit_gaps(omegas[0])
    for i in range(1, len(omegas)):
        roots, gaps = unit_gaps(omegas[i])
        for slot in range(2):
            if prev_gaps[slot] == 0.0 or prev_gaps[slot] * gaps[slot] < 0.0:
                lo, hi = omegas[i - 1], omegas[i]
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    _, g = unit_gaps(mid)
                    if prev_gaps[slot] * g[slot] <= 0.0:
                        hi = mid
                    else:
                        lo = mid
                omega_star = 0.5 * (lo + hi)
                z_star, gap = unit_gaps(omega_star)
                z = z_star[slot]
                if abs(gap[slot]) < 1e-6 and abs(z) > 0:
                    tau0 = (-cmath.phase(z)) % (2.0 * math.pi) / omega_star
                    candidates.append((tau0, omega_star))
        prev_gaps = gaps
    taus = []
    for tau0, omega0 in candidates:
        polished = _newton_root_pair(s, tau0, omega0)
        if polished is not None:
            taus.append(polished[0])
    return min(taus) if taus else None


def frac_delay_char_eval(A, B, order: float, kernel, lam) -> complex:
    """det(lambda^order I - A - k1(lambda) B) on the principal branch.

    The branch cut lies on the negative real axis; evaluation close to the
    cut raises a RuntimeWarning because the power is discontinuous there.
    """
    lam = complex(lam)
    if lam.real < 0 and abs(lam.imag) < 1e-12 * max(1.0, -lam.real):
        warnings.warn("lambda is close to the principal branch cut; "
                      "the result is one-sided", RuntimeWarning, stacklevel=2)
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A and B must be square matrices of equal shape")
    w = lam**order
    mat = w * np.eye(A.shape[0]) - A - _kern.laplace(kernel, lam) * B
    return complex(np.linalg.det(mat))


def count_rhp_roots(f, sigma_max: float = 50.0, omega_max: float = 50.0, *,
                    samples_per_edge: int = 96,
                    max_depth: int = 28) -> tuple[int, float]:
    """Zeros of ``f`` inside the rectangle [0, sigma_max] x [-i, +i]*omega_max.

    Winding-number computation over the counterclockwise boundary with
    adaptive bisection of every segment whose phase increment exceeds
    pi/2.  Returns (count, min_boundary_ratio) where the second entry is
    the smallest |f| on the contour divided by the contour median |f|;
    values near zero flag a root on the boundary (a marginal case).
    """
    corners = [complex(0.0, -omega_max), complex(sigma_max, -omega_max),
               complex(sigma_max, omega_max), complex(0.0, omega_max),
               complex(0.0, -omega_max)]
    total = 0.0
    min_abs = math.inf
    all_abs = []

    for za, zb in zip(corners[:-1], corners[1:]):
        ts = np.linspace(0.0, 1.0, samples_per_edge + 1)
        pts = [za + (zb - za) * t for t in ts]
        vals = [f(z) for z in pts]
        all_abs.extend(abs(v) for v in vals)
        stack = [(pts[i], vals[i], pts[i + 1], vals[i + 1], 0)
                 for i in range(len(pts) - 1)][::-1]
        while stack:
            z1, f1, z2, f2, depth = stack.pop()
            min_abs = min(min_abs, abs(f1), abs(f2))
            if f1 == 0 or f2 == 0:
                return -1, 0.0
            dphi = cmath.phase(f2 / f1)
            if abs(dphi) > math.pi / 2.0 and depth < max_depth:
                zm = 0.5 * (z1 + z2)
                fm = f(zm)
                all_abs.append(abs(fm))
                stack.append((zm, fm, z2, f2, depth + 1))
                stack.append((z1, f1, zm, fm, depth + 1))
            else:
                total += dphi
    scale = float(np.median(all_abs)) or 1.0
    count = total / (2.0 * math.pi)
    rounded = int(round(count))
    if abs(count - rounded) > 0.25:
        raise RuntimeError(
            f"argument-principle count did not settle (got {count:.3f}); "
            "refine the contour")
    return rounded, min_abs / scale


def _count_verdict(count: int, boundary_ratio: float) -> str:
    if boundary_ratio < _BOUNDARY_TOL or count < 0:
        return MARGINAL
    return STABLE if count == 0 else UNSTABLE


def scalar_frac_delay_check(a: float, order: float,
                            tau: float) -> StabilityReport:
    """Verdict for the scalar fractional-delay equation D^order x = a x(t-tau).

    Counts right-half-plane roots of lambda^order - a exp(-lambda tau) by
    the argument principle.  The textbook non-resonance conditions for
    a < 0 are recorded as metadata only; they are not trusted as ground
    truth.
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if not 0 < order < 1:
        raise ValueError("order must lie in (0, 1)")

    def f(lam):
        return lam**order - a * cmath.exp(-lam * tau)

    count, boundary = count_rhp_roots(f)
    metadata = {
        "rhp_root_count": count,
        "hypothesis_a_negative": a < 0,
        "printed_condition": "(-a)^(1/order) != +/-((2k+1)*pi - order*pi/2)/tau",
    }
    if a < 0 and tau > 0:
        r = (-a) ** (1.0 / order)
        k_max = int(r * tau / (2.0 * math.pi)) + 2
        gaps = [abs(r - ((2 * k + 1) * math.pi - order * math.pi / 2.0) / tau)
                for k in range(k_max + 1)]
        metadata["nonresonance_gap"] = min(gaps)
    return StabilityReport(verdict=_count_verdict(count, boundary),
                           alpha=order, metadata=metadata)


def planar_frac_delay_check(k1: float, k2: float, order: float,
                            tau: float) -> StabilityReport:
    """Verdict for the planar fractional system with a lagged cross term.

    D^order x = y - k1 x, D^order y = -(k1 + k2) y + x(t - tau); the verdict
    comes from the 2x2 characteristic determinant with a sharp-lag kernel.
    The printed sufficient condition (which contains an unbound symbol) is
    recorded as metadata, never enforced.
    """
    if k1 < 0:
        raise ValueError("k1 must be >= 0")
    if not k2 > 0:
        raise ValueError("k2 must be > 0")
    if not tau > 0:
        raise ValueError("tau must be > 0")
    if not 0 < order <= 1:
        raise ValueError("order must lie in (0, 1]")
    A = np.array([[-k1, 1.0], [0.0, -(k1 + k2)]])
    B = np.array([[0.0, 0.0], [1.0, 0.0]])
    kernel = _kern.DiracKernel(tau)

    def f(lam):
        return frac_delay_char_eval(A, B, order, kernel, lam)

    count, boundary = count_rhp_roots(f)
    metadata = {
        "rhp_root_count": count,
        "printed_condition": "k1 > 0 and k2 > 1/k1 - k (symbol k unbound)",
    }
    return StabilityReport(verdict=_count_verdict(count, boundary),
                           alpha=order, metadata=metadata)
