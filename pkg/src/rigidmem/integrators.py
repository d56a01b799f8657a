"""Time-stepping engines with dense trajectory output and diagnostics.

Four integration paths are provided:

* classical fixed-step RK4 for ordinary systems,
* method-of-steps RK4 for distributed-delay systems, where the delayed
  argument is rebuilt at every stage from the stored trajectory (cubic
  Hermite dense output) and the initial function,
* an exact ODE chain augmentation for exponential and Erlang kernels,
* the fractional Adams-Bashforth-Moulton predictor-corrector for Caputo
  systems, with and without a delayed argument.

Every integrator emits a :class:`Trajectory`: uniformly spaced samples with
a derivative estimate per node and per-sample diagnostics recomputed from
the states (never accumulated).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels as _kern
from .errors import DivergenceError, HistoryCoverageError

__all__ = [
    "DIVERGENCE_NORM",
    "Trajectory",
    "HistorySpec",
    "FracConfig",
    "integrate_rk4",
    "integrate_dde",
    "integrate_chain",
    "integrate_frac_abm",
    "integrate_frac_dde",
    "dense_eval",
    "write_trajectory_csv",
]

#: states with a larger norm abort the run with a DivergenceError
DIVERGENCE_NORM = 1e8

#: relative tolerance for snapping dense queries onto grid nodes
_NODE_SNAP = 1e-9


def _n_steps(span: float, h: float) -> int:
    if not (h > 0 and math.isfinite(h)):
        raise ValueError("step h must be > 0")
    if not (span > 0 and math.isfinite(span)):
        raise ValueError("t_end must be > 0")
    n = int(round(span / h))
    if n >= 1 and abs(n * h - span) <= 1e-9 * max(span, 1.0):
        return n
    return max(1, int(math.ceil(span / h - 1e-12)))


def _check_state(x: np.ndarray, t: float) -> None:
    if not np.all(np.isfinite(x)) or float(np.linalg.norm(x)) > DIVERGENCE_NORM:
        raise DivergenceError(
            f"state diverged; last valid time t = {t:.6g}", t_last=t)


def _hermite_eval(t0, h, states, derivs, count, ts, slack=0.0):
    """Cubic Hermite evaluation on the first ``count`` grid nodes.

    ``slack`` extends the admissible range past the last node (used for
    stage-level extrapolation inside a step).  Queries within _NODE_SNAP of
    a node return the stored sample exactly.
    """
    ts = np.asarray(ts, dtype=float)
    t_last = t0 + (count - 1) * h
    tol = _NODE_SNAP * h
    if np.any(ts < t0 - tol) or np.any(ts > t_last + slack + tol):
        raise ValueError(
            f"dense evaluation outside [{t0}, {t_last + slack}]")
    if count == 1:
        return states[0] + np.outer(ts - t0, derivs[0])
    pos = (ts - t0) / h
    idx = np.clip(np.floor(pos).astype(int), 0, count - 2)
    theta = pos - idx
    t2 = theta * theta
    t3 = t2 * theta
    h00 = 2 * t3 - 3 * t2 + 1
    h10 = t3 - 2 * t2 + theta
    h01 = -2 * t3 + 3 * t2
    h11 = t3 - t2
    out = (h00[:, None] * states[idx] + (h * h10)[:, None] * derivs[idx]
           + h01[:, None] * states[idx + 1] + (h * h11)[:, None] * derivs[idx + 1])
    near = np.rint(pos)
    snap = (np.abs(pos - near) < _NODE_SNAP) & (near >= 0) & (near <= count - 1)
    if np.any(snap):
        out[snap] = states[near[snap].astype(int)]
    return out


@dataclass
class Trajectory:
    """Uniformly sampled solution with nodewise derivatives and diagnostics.

    ``states`` and ``derivs`` have shape (N+1, dim); sample k lives at time
    t0 + k*h.  ``core_dim`` marks how many leading components form the
    model state when auxiliary chain stages are appended.  Diagnostics are
    arrays of per-sample scalars recomputed from the states.
    """

    t0: float
    h: float
    states: np.ndarray
    derivs: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    core_dim: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=float)
        self.derivs = np.asarray(self.derivs, dtype=float)
        if self.states.shape != self.derivs.shape or self.states.ndim != 2:
            raise ValueError("states and derivs must share shape (N+1, dim)")
        if self.core_dim is None:
            self.core_dim = self.states.shape[1]

    @property
    def n_samples(self) -> int:
        return self.states.shape[0]

    @property
    def t_end(self) -> float:
        return self.t0 + (self.n_samples - 1) * self.h

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.n_samples)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def eval_many(self, ts) -> np.ndarray:
        return _hermite_eval(self.t0, self.h, self.states, self.derivs,
                             self.n_samples, ts)

    def eval(self, t: float) -> np.ndarray:
        return self.eval_many(np.array([float(t)]))[0]


def dense_eval(traj: Trajectory, t: float) -> np.ndarray:
    """Cubic Hermite interpolation of ``traj`` at time ``t`` (exact at nodes)."""
    return traj.eval(t)


class HistorySpec:
    """Initial function phi on (-inf, 0]: constant, callable, or a trajectory."""

    def __init__(self, kind, payload, dim):
        self._kind = kind
        self._payload = payload
        self.dim = dim

    @classmethod
    def constant(cls, value) -> "HistorySpec":
        arr = np.atleast_1d(np.asarray(value, dtype=float))
        return cls("constant", arr, arr.size)

    @classmethod
    def from_callable(cls, fn) -> "HistorySpec":
        probe = np.atleast_1d(np.asarray(fn(0.0), dtype=float))
        return cls("callable", fn, probe.size)

    @classmethod
    def from_trajectory(cls, traj: Trajectory) -> "HistorySpec":
        return cls("trajectory", traj, traj.states.shape[1])

    @property
    def is_constant(self) -> bool:
        return self._kind == "constant"

    @property
    def constant_value(self) -> np.ndarray:
        if not self.is_constant:
            raise ValueError("history is not constant")
        return self._payload

    def eval_many(self, ss) -> np.ndarray:
        ss = np.asarray(ss, dtype=float)
        if self._kind == "constant":
            return np.broadcast_to(self._payload, (ss.size, self.dim))
        if self._kind == "trajectory":
            try:
                return self._payload.eval_many(ss)
            except ValueError as exc:
                raise HistoryCoverageError(
                    f"history segment does not cover requested times: {exc}"
                ) from exc
        return np.stack([np.atleast_1d(np.asarray(self._payload(s), dtype=float))
                         for s in ss])

    def __call__(self, s: float) -> np.ndarray:
        return self.eval_many(np.array([float(s)]))[0]


class _RunningGrid:
    """Partially built trajectory spliced with phi, for delayed lookups.

    Evaluation below t0 defers to phi; within the accepted nodes it uses
    cubic Hermite; up to one step past the last node it extrapolates the
    final cubic piece (stage evaluations during the current step).
    """

    def __init__(self, phi: HistorySpec, t0: float, h: float, n_steps: int,
                 dim: int):
        self.phi = phi
        self.t0 = t0
        self.h = h
        self.states = np.empty((n_steps + 1, dim))
        self.derivs = np.zeros((n_steps + 1, dim))
        self.count = 0

    def append(self, x, f=None) -> None:
        k = self.count
        self.states[k] = x
        if f is not None:
            self.derivs[k] = f
        else:
            self._refresh_fd(k)
        self.count = k + 1

    def set_last_deriv(self, f) -> None:
        self.derivs[self.count - 1] = f

    def replace_last(self, x) -> None:
        k = self.count - 1
        self.states[k] = x
        if k >= 1:
            self._refresh_fd(k)

    def _refresh_fd(self, k: int) -> None:
        # finite-difference slopes; the newest node gets a one-sided estimate
        h = self.h
        if k >= 1:
            self.derivs[k] = (self.states[k] - self.states[k - 1]) / h
            if k == 1:
                self.derivs[0] = self.derivs[1]
        if k >= 2:
            self.derivs[k - 1] = (self.states[k] - self.states[k - 2]) / (2 * h)

    def eval_many(self, us) -> np.ndarray:
        us = np.asarray(us, dtype=float)
        past = us <= self.t0
        if np.all(past):
            return self.phi.eval_many(us)
        out = np.empty((us.size, self.states.shape[1]))
        if np.any(past):
            out[past] = self.phi.eval_many(us[past])
        here = ~past
        try:
            out[here] = _hermite_eval(self.t0, self.h, self.states,
                                      self.derivs, self.count, us[here],
                                      slack=self.h * (1 + 1e-9))
        except ValueError as exc:
            raise HistoryCoverageError(str(exc)) from exc
        return out


def _compute_diagnostics(states, core_dim, diagnostics):
    if not diagnostics:
        return {}
    core = states[:, :core_dim]
    return {name: np.array([fn(row) for row in core])
            for name, fn in diagnostics.items()}


def integrate_rk4(rhs, x0, t_end, h, *, diagnostics=None,
                  core_dim=None) -> Trajectory:
    """Classical fixed-step 4th-order Runge-Kutta for dx/dt = rhs(x).

    ``rhs`` maps a state vector to its derivative.  Aborts with
    :class:`DivergenceError` when the state leaves the finite trust region.
    """
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    n = _n_steps(t_end, h)
    dim = x.size
    states = np.empty((n + 1, dim))
    derivs = np.empty((n + 1, dim))
    states[0] = x
    derivs[0] = rhs(x)
    half = 0.5 * h
    sixth = h / 6.0
    for k in range(n):
        k1 = derivs[k]
        k2 = rhs(x + half * k1)
        k3 = rhs(x + half * k2)
        k4 = rhs(x + h * k3)
        x = x + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        _check_state(x, k * h)
        states[k + 1] = x
        derivs[k + 1] = rhs(x)
    core = dim if core_dim is None else core_dim
    diag = _compute_diagnostics(states, core, diagnostics)
    return Trajectory(0.0, h, states, derivs, diag, core_dim=core)


def _default_quad_step(kernel, h: float) -> float:
    lo, hi = _kern.effective_support(kernel)
    span = hi - lo
    if span <= 0:
        return h
    return min(h, span / 16.0)


def integrate_dde(rhs_pair, kernel, phi: HistorySpec, t_end, h, *,
                  quad_step=None, diagnostics=None) -> Trajectory:
    """Method-of-steps RK4 for dx/dt = rhs_pair(x, xd) with delayed xd.

    At every stage the delayed argument xd is the kernel-weighted average
    of the stored trajectory and phi; Dirac kernels sample the lagged time
    exactly, and a zero-lag Dirac kernel substitutes the stage state itself
    so the run reduces bitwise to the ordinary RK4 path.
    """
    dirac = isinstance(kernel, _kern.DiracKernel)
    if not dirac and quad_step is None:
        quad_step = _default_quad_step(kernel, h)
    x0 = phi(0.0)
    n = _n_steps(t_end, h)
    grid = _RunningGrid(phi, 0.0, h, n, x0.size)
    dirac_zero = dirac and kernel.lag == 0.0

    def delayed_state(tq, stage_state):
        if dirac_zero:
            return stage_state
        if dirac:
            return grid.eval_many(np.array([tq - kernel.lag]))[0]
        return _kern.convolve_history(kernel, grid, tq, quad_step)

    f0 = rhs_pair(x0, delayed_state(0.0, x0))
    grid.append(x0, f0)
    half = 0.5 * h
    sixth = h / 6.0
    for k in range(n):
        tn = k * h
        xn = grid.states[k]
        k1 = grid.derivs[k]
        xs = xn + half * k1
        k2 = rhs_pair(xs, delayed_state(tn + half, xs))
        xs = xn + half * k2
        k3 = rhs_pair(xs, delayed_state(tn + half, xs))
        xs = xn + h * k3
        k4 = rhs_pair(xs, delayed_state(tn + h, xs))
        x_next = xn + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        _check_state(x_next, tn)
        grid.append(x_next, k4)
        f_next = rhs_pair(x_next, delayed_state(tn + h, x_next))
        grid.set_last_deriv(f_next)
    diag = _compute_diagnostics(grid.states, x0.size, diagnostics)
    return Trajectory(0.0, h, grid.states, grid.derivs, diag)


def integrate_chain(rhs_pair, chain: _kern.ChainSpec, phi: HistorySpec,
                    t_end, h, *, quad_step=None,
                    diagnostics=None) -> Trajectory:
    """Exact chain augmentation for exponential/Erlang delayed systems.

    Auxiliary stages obey eta1' = rate*(x - eta1), eta2' = rate*(eta1 -
    eta2); the delayed argument is the last stage.  Initial stage values
    are the kernel-weighted averages of phi.
    """
    if not isinstance(chain, _kern.ChainSpec):
        raise TypeError("chain must come from chain_reduce()")
    x0 = phi(0.0)
    dim = x0.size
    rate = chain.rate
    if phi.is_constant:
        stage0 = [x0.copy() for _ in range(chain.stages)]
    else:
        stage_kernels = [_kern.ExponentialKernel(rate)]
        if chain.stages == 2:
            stage_kernels.append(_kern.ErlangKernel(rate))
        qs = quad_step
        if qs is None:
            qs = _kern.effective_support(stage_kernels[-1])[1] / 256.0
        stage0 = [_kern.convolve_history(kern, phi, 0.0, qs)
                  for kern in stage_kernels]
    y0 = np.concatenate([x0] + stage0)

    if chain.stages == 1:
        def aug_rhs(y):
            x, eta1 = y[:dim], y[dim:]
            return np.concatenate([rhs_pair(x, eta1), rate * (x - eta1)])
    else:
        def aug_rhs(y):
            x, eta1, eta2 = y[:dim], y[dim:2 * dim], y[2 * dim:]
            return np.concatenate([
                rhs_pair(x, eta2), rate * (x - eta1), rate * (eta1 - eta2)])

    return integrate_rk4(aug_rhs, y0, t_end, h,
                         diagnostics=diagnostics, core_dim=dim)


@dataclass(frozen=True)
class FracConfig:
    """Settings for the fractional predictor-corrector.

    ``order`` is the Caputo order in (0, 1] (1 recovers the classical
    limit); ``memory_window`` of None keeps the full history, otherwise
    only the newest ``memory_window`` nodes enter the memory sums and the
    induced bound on the dropped contribution is reported in the
    trajectory metadata.
    """

    order: float
    h: float
    corrector_iters: int = 1
    memory_window: int | None = None

    def __post_init__(self):
        if not 0 < self.order <= 1:
            raise ValueError("order must lie in (0, 1]")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ValueError("step h must be > 0")
        if not 1 <= self.corrector_iters <= 5:
            raise ValueError("corrector_iters must lie in 1..5")
        if self.memory_window is not None:
            if self.memory_window < 1:
                raise ValueError("memory_window must be >= 1")
            if self.memory_window * self.h < 1.0:
                raise ValueError("truncated memory must span >= 1 time unit")


def _abm_weights(alpha: float, n_steps: int):
    """Product-quadrature weight tables for the Adams scheme.

    beta[k] are the rectangle (predictor) weights, c[k] the interior
    trapezoid (corrector) weights, a0[n] the left-endpoint corrector
    weight for step n, plus the h^alpha scale factors.
    """
    k = np.arange(n_steps + 1, dtype=float)
    pow_a = k**alpha
    pow_a1 = k ** (alpha + 1)
    beta = np.diff(pow_a)
    c = pow_a1[2:] + pow_a1[:-2] - 2.0 * pow_a1[1:-1]
    a0 = pow_a1[:-1] - (k[:-1] - alpha) * pow_a[1:]
    return pow_a, beta, c, a0


def _frac_loop(cfg: FracConfig, x0: np.ndarray, n: int, eval_g):
    """Shared PECE loop; ``eval_g`` supplies the right-hand side per phase.

    eval_g(step, phase, x) is called with phase "init" (node 0),
    "predict"/"correct" (iterates at t_{step+1}), and "accept" (the final
    node value); it returns the Caputo right-hand side at that state.
    """
    h = cfg.h
    alpha = cfg.order
    pow_a, beta, c, a0 = _abm_weights(alpha, n)
    pred_scale = h**alpha / math.gamma(alpha + 1.0)
    corr_scale = h**alpha / math.gamma(alpha + 2.0)
    dim = x0.size
    states = np.empty((n + 1, dim))
    gs = np.empty((n + 1, dim))
    states[0] = x0
    gs[0] = eval_g(0, "init", x0)
    window = cfg.memory_window
    trunc_bound = 0.0
    max_g_norm = float(np.linalg.norm(gs[0]))
    for step in range(n):
        j0 = 0 if window is None else max(0, step + 1 - window)
        pred_hist = beta[: step + 1 - j0][::-1] @ gs[j0: step + 1]
        x_pred = x0 + pred_scale * pred_hist
        if j0 == 0:
            hist = a0[step] * gs[0]
            jc = 1
        else:
            hist = np.zeros(dim)
            jc = j0
        if step >= jc:
            hist = hist + c[: step - jc + 1][::-1] @ gs[jc: step + 1]
        xc = x_pred
        phase = "predict"
        for _ in range(cfg.corrector_iters):
            g = eval_g(step, phase, xc)
            xc = x0 + corr_scale * (g + hist)
            phase = "correct"
        _check_state(xc, step * h)
        states[step + 1] = xc
        gs[step + 1] = eval_g(step, "accept", xc)
        max_g_norm = max(max_g_norm, float(np.linalg.norm(gs[step + 1])))
        if j0 > 0:
            dropped_mass = pred_scale * (pow_a[step + 1] - pow_a[step + 1 - j0])
            trunc_bound = max(trunc_bound, dropped_mass * max_g_norm)
    derivs = np.gradient(states, h, axis=0)
    meta = {"order": alpha, "scheme": "abm-pece",
            "corrector_iters": cfg.corrector_iters}
    if window is not None:
        meta["memory_window"] = window
        meta["memory_truncation_bound"] = trunc_bound
    return states, derivs, meta


def integrate_frac_abm(rhs, cfg: FracConfig, x0, t_end, *,
                       diagnostics=None) -> Trajectory:
    """Adams-Bashforth-Moulton predictor-corrector for D^alpha x = rhs(x).

    Product-rectangle predictor, product-trapezoid corrector, applied
    ``cfg.corrector_iters`` times (PECE by default), full memory unless a
    window is configured.  Node derivatives in the returned trajectory are
    finite-difference estimates: for fractional orders the classical slope
    is not directly available from the right-hand side.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    n = _n_steps(t_end, cfg.h)

    def eval_g(step, phase, x):
        return rhs(x)

    states, derivs, meta = _frac_loop(cfg, x0, n, eval_g)
    diag = _compute_diagnostics(states, x0.size, diagnostics)
    return Trajectory(0.0, cfg.h, states, derivs, diag, meta=meta)


def integrate_frac_dde(rhs_pair, cfg: FracConfig, kernel, phi: HistorySpec,
                       t_end, *, quad_step=None,
                       diagnostics=None) -> Trajectory:
    """Fractional predictor-corrector with a distributed-delay argument.

    The delayed argument at each node is the kernel average over the grid
    (Hermite-interpolated, finite-difference slopes) and phi; the current
    step's provisional value participates so short-range kernels see a
    consistent sliver.  A zero-lag Dirac kernel reduces the scheme bitwise
    to :func:`integrate_frac_abm`.
    """
    dirac = isinstance(kernel, _kern.DiracKernel)
    if not dirac and quad_step is None:
        quad_step = _default_quad_step(kernel, cfg.h)
    x0 = phi(0.0)
    n = _n_steps(t_end, cfg.h)
    grid = _RunningGrid(phi, 0.0, cfg.h, n, x0.size)
    dirac_zero = dirac and kernel.lag == 0.0

    def delayed_state(tq, cur):
        if dirac_zero:
            return cur
        if dirac:
            return grid.eval_many(np.array([tq - kernel.lag]))[0]
        return _kern.convolve_history(kernel, grid, tq, quad_step)

    def eval_g(step, phase, x):
        t_next = (step + 1) * cfg.h
        if phase == "init":
            grid.append(x)
            return rhs_pair(x, delayed_state(0.0, x))
        if phase == "predict":
            grid.append(x)
        else:
            grid.replace_last(x)
        return rhs_pair(x, delayed_state(t_next, x))

    states, derivs, meta = _frac_loop(cfg, x0, n, eval_g)
    diag = _compute_diagnostics(states, x0.size, diagnostics)
    return Trajectory(0.0, cfg.h, states, derivs, diag, meta=meta)


def _fmt(v: float) -> str:
    return format(v, ".17g")


def trajectory_columns(traj: Trajectory) -> list[str]:
    """Column labels of the CSV export for ``traj``."""
    core = traj.core_dim
    cols = ["t"] + [f"x{i + 1}" for i in range(core)]
    cols += list(traj.diagnostics.keys())
    extra = traj.states.shape[1] - core
    if extra > 0:
        if extra % core == 0:
            stages = extra // core
            cols += [f"eta{s + 1}_{i + 1}"
                     for s in range(stages) for i in range(core)]
        else:
            cols += [f"aux{i + 1}" for i in range(extra)]
    return cols


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Write ``traj`` as CSV with 17-significant-digit decimal floats.

    Columns: t, the core state components, the diagnostics, then any
    auxiliary chain stages.  Output is byte-deterministic for identical
    trajectories.
    """
    core = traj.core_dim
    lines = [",".join(trajectory_columns(traj))]
    times = traj.times
    diag_arrays = list(traj.diagnostics.values())
    for i in range(traj.n_samples):
        row = [_fmt(times[i])]
        row += [_fmt(v) for v in traj.states[i, :core]]
        row += [_fmt(arr[i]) for arr in diag_arrays]
        row += [_fmt(v) for v in traj.states[i, core:]]
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)
