"""Command-line front end: simulate, stability, scan.

Configs are line-oriented ``key = value`` files grouped into ``[section]``
blocks (full-line ``#`` comments allowed).  Sections:

``[system]``
    ``kind`` plus its parameters.  Rigid-body kinds (``classical``,
    ``revised``, ``delayed``, ``revised-delayed``, ``fractional``,
    ``fractional-revised``) take ``a1 > a2 > a3 > 0``; ``ep-delayed``
    takes ``I1 > I2 > I3 > 0``, ``coupling`` and ``m``; ``scalar-18``
    takes ``a``; ``planar-19`` takes ``k1`` and ``k2``.
``[kernel]``
    Required for the delayed kinds: ``kind`` one of ``uniform`` (``offset``,
    ``width``), ``exponential`` (``rate``), ``erlang`` (``rate``), ``dirac``
    (``lag``).  The scalar/planar benchmarks require ``dirac``.
``[fractional]``
    Required for the fractional kinds: ``order``; optional
    ``corrector_iterations`` (1..5) and ``memory`` (``full`` or a window
    length in nodes).
``[run]``
    ``x0`` (comma-separated components, also the constant history),
    ``t_end``, ``step``; optional ``quad_step``.
``[output]``
    Optional ``path`` (the ``--out`` flag wins).
``[stability]``
    Optional ``equilibrium`` (``M1``/``M2``/``M3``) and ``m`` for the
    fractional kinds.
``[scan]``
    ``axis`` (``tau``/``alpha``/``m``), ``min``, ``max``, ``steps``.

Values can be overridden with ``--set section.key=value``.  Summaries go
to standard output; data goes only to files.  Exit codes: 0 success,
2 validation error, 3 integrator divergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import kernels as _kern
from . import models as _models
from . import stability as _stab
from .errors import ConfigError, DivergenceError
from .integrators import (FracConfig, HistorySpec, integrate_chain,
                          integrate_dde, integrate_frac_abm,
                          integrate_frac_dde, integrate_rk4,
                          write_trajectory_csv)

__all__ = ["RunConfig", "ScanSpec", "parse_config", "cmd_simulate",
           "cmd_stability", "cmd_scan", "main"]

_RIGID_KINDS = ("classical", "revised", "delayed", "revised-delayed",
                "fractional", "fractional-revised")
_ALL_KINDS = _RIGID_KINDS + ("ep-delayed", "scalar-18", "planar-19")
_NEEDS_KERNEL = {"delayed", "revised-delayed", "ep-delayed",
                 "scalar-18", "planar-19"}
_NEEDS_FRAC = {"fractional", "fractional-revised", "scalar-18", "planar-19"}
_DIM = {"scalar-18": 1, "planar-19": 2}
_KNOWN_SECTIONS = ("system", "kernel", "fractional", "run", "output",
                   "stability", "scan")


@dataclass(frozen=True)
class ScanSpec:
    axis: str
    lo: float
    hi: float
    steps: int


@dataclass(frozen=True)
class RunConfig:
    kind: str
    body: _models.RigidBodyParams | None
    inertia: _models.InertiaSetup | None
    scalar_a: float | None
    planar_k: tuple[float, float] | None
    kernel: object | None
    frac: FracConfig | None
    x0: np.ndarray
    t_end: float
    step: float
    quad_step: float | None
    out: str | None
    equilibrium: str
    eq_m: float
    scan: ScanSpec | None


def _parse_raw(text: str):
    """Split config text into {section: {key: (value, line)}} plus errors."""
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    section_lines: dict[str, int] = {}
    errors: list[str] = []
    current = None
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current in sections:
                errors.append(f"line {lineno}: duplicate section [{current}]")
            sections.setdefault(current, {})
            section_lines.setdefault(current, lineno)
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value' "
                          f"or '[section]', got {line!r}")
            continue
        if current is None:
            errors.append(f"line {lineno}: key outside of any [section]")
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in sections[current]:
            errors.append(f"line {lineno}: duplicate key '{key}' "
                          f"in [{current}]")
        sections[current][key] = (value, lineno)
    return sections, section_lines, errors


def _loc(line: int) -> str:
    return "--set" if line == 0 else f"line {line}"


class _Getter:
    """Typed access into the raw sections with error accumulation."""

    def __init__(self, sections, section_lines, errors):
        self.sections = sections
        self.section_lines = section_lines
        self.errors = errors
        self.consumed: set[tuple[str, str]] = set()

    def has_section(self, section: str) -> bool:
        return section in self.sections

    def section_line(self, section: str) -> int:
        return self.section_lines.get(section, 0)

    def get(self, section, key, conv=float, required=False, default=None):
        self.consumed.add((section, key))
        sec = self.sections.get(section, {})
        if key not in sec:
            if required:
                self.errors.append(
                    f"line {self.section_line(section)}: [{section}] "
                    f"missing required key '{key}'")
            return default
        value, line = sec[key]
        try:
            return conv(value)
        except (TypeError, ValueError):
            self.errors.append(
                f"{_loc(line)}: [{section}] {key} = {value!r}: "
                f"cannot convert to {conv.__name__}")
            return default

    def line_of(self, section, key, fallback=0):
        sec = self.sections.get(section, {})
        if key in sec:
            return sec[key][1]
        return fallback

    def sweep_unknown(self):
        for section, entries in self.sections.items():
            if section not in _KNOWN_SECTIONS:
                self.errors.append(
                    f"line {self.section_line(section)}: "
                    f"unknown section [{section}]")
                continue
            for key, (_, line) in entries.items():
                if (section, key) not in self.consumed:
                    self.errors.append(
                        f"{_loc(line)}: unknown key '{key}' in [{section}]")


def _floats_csv(value: str) -> list[float]:
    return [float(tok) for tok in value.split(",")]


def parse_config(text: str, overrides=()) -> RunConfig:
    """Parse and fully cross-validate a config; raises ConfigError."""
    sections, section_lines, errors = _parse_raw(text)
    for item in overrides:
        head, eq, value = item.partition("=")
        if not eq or "." not in head:
            errors.append(f"--set {item!r}: expected section.key=value")
            continue
        section, _, key = head.partition(".")
        sections.setdefault(section.strip(), {})[key.strip()] = \
            (value.strip(), 0)
        section_lines.setdefault(section.strip(), 0)
    g = _Getter(sections, section_lines, errors)

    kind = g.get("system", "kind", conv=str, required=True)
    kind_line = g.line_of("system", "kind")
    if kind is not None and kind not in _ALL_KINDS:
        errors.append(f"{_loc(kind_line)}: [system] kind = {kind!r}: "
                      f"must be one of {', '.join(_ALL_KINDS)}")
        kind = None

    body = inertia = scalar_a = planar_k = None
    if kind in _RIGID_KINDS:
        a1 = g.get("system", "a1", required=True)
        a2 = g.get("system", "a2", required=True)
        a3 = g.get("system", "a3", required=True)
        if None not in (a1, a2, a3):
            try:
                body = _models.RigidBodyParams(a1, a2, a3)
            except ValueError as exc:
                errors.append(
                    f"{_loc(g.line_of('system', 'a1', kind_line))}: "
                    f"[system] {exc}")
    elif kind == "ep-delayed":
        vals = [g.get("system", k, required=True)
                for k in ("I1", "I2", "I3", "coupling", "m")]
        if None not in vals:
            try:
                inertia = _models.InertiaSetup(*vals)
            except ValueError as exc:
                errors.append(
                    f"{_loc(g.line_of('system', 'I1', kind_line))}: "
                    f"[system] {exc}")
    elif kind == "scalar-18":
        scalar_a = g.get("system", "a", required=True)
    elif kind == "planar-19":
        k1 = g.get("system", "k1", required=True)
        k2 = g.get("system", "k2", required=True)
        if None not in (k1, k2):
            planar_k = (k1, k2)

    kernel = None
    if kind is not None:
        if kind in _NEEDS_KERNEL and not g.has_section("kernel"):
            errors.append(f"{_loc(kind_line)}: kind = {kind} requires a "
                          f"[kernel] section")
        if kind not in _NEEDS_KERNEL and g.has_section("kernel"):
            errors.append(f"line {g.section_line('kernel')}: [kernel] "
                          f"section is not allowed for kind = {kind}")
    if g.has_section("kernel") and (kind in _NEEDS_KERNEL):
        kkind = g.get("kernel", "kind", conv=str, required=True)
        kline = g.line_of("kernel", "kind", g.section_line("kernel"))
        try:
            if kkind == "uniform":
                kernel = _kern.UniformKernel(
                    g.get("kernel", "offset", default=0.0),
                    g.get("kernel", "width", required=True, default=1.0))
            elif kkind == "exponential":
                kernel = _kern.ExponentialKernel(
                    g.get("kernel", "rate", required=True, default=1.0))
            elif kkind == "erlang":
                kernel = _kern.ErlangKernel(
                    g.get("kernel", "rate", required=True, default=1.0))
            elif kkind == "dirac":
                kernel = _kern.DiracKernel(
                    g.get("kernel", "lag", required=True, default=0.0))
            elif kkind is not None:
                errors.append(f"{_loc(kline)}: [kernel] kind = {kkind!r}: "
                              f"must be uniform, exponential, erlang or dirac")
        except ValueError as exc:
            errors.append(f"{_loc(kline)}: [kernel] {exc}")
        if kind in ("scalar-18", "planar-19") and kkind not in (None, "dirac"):
            errors.append(f"{_loc(kline)}: kind = {kind} requires a dirac "
                          f"kernel")

    t_end = g.get("run", "t_end", required=True, default=0.0)
    step = g.get("run", "step", required=True, default=1e-3)
    quad_step = g.get("run", "quad_step")
    run_line = g.section_line("run")
    if t_end is not None and t_end < 0:
        errors.append(f"{_loc(g.line_of('run', 't_end', run_line))}: "
                      f"[run] t_end must be >= 0")
    if step is not None and step <= 0:
        errors.append(f"{_loc(g.line_of('run', 'step', run_line))}: "
                      f"[run] step must be > 0")

    frac = None
    if kind is not None:
        if kind in _NEEDS_FRAC and not g.has_section("fractional"):
            errors.append(f"{_loc(kind_line)}: kind = {kind} requires a "
                          f"[fractional] section")
        if kind not in _NEEDS_FRAC and g.has_section("fractional"):
            errors.append(f"line {g.section_line('fractional')}: "
                          f"[fractional] section is not allowed for "
                          f"kind = {kind}")
    if g.has_section("fractional") and kind in _NEEDS_FRAC:
        order = g.get("fractional", "order", required=True, default=0.5)
        iters = g.get("fractional", "corrector_iterations", conv=int,
                      default=1)
        memory = g.get("fractional", "memory", conv=str, default="full")
        window = None
        mem_line = g.line_of("fractional", "memory",
                             g.section_line("fractional"))
        if memory != "full":
            try:
                window = int(memory)
            except ValueError:
                errors.append(f"{_loc(mem_line)}: [fractional] memory must "
                              f"be 'full' or an integer window")
        if order is not None and step is not None and step > 0:
            try:
                frac = FracConfig(order=order, h=step,
                                  corrector_iters=iters,
                                  memory_window=window)
            except ValueError as exc:
                errors.append(
                    f"{_loc(g.line_of('fractional', 'order', mem_line))}: "
                    f"[fractional] {exc}")

    dim = _DIM.get(kind, 3)
    x0_list = g.get("run", "x0", conv=_floats_csv, required=True)
    x0 = np.zeros(dim)
    if x0_list is not None:
        if len(x0_list) != dim:
            errors.append(f"{_loc(g.line_of('run', 'x0', run_line))}: "
                          f"[run] x0 needs {dim} components for "
                          f"kind = {kind}, got {len(x0_list)}")
        else:
            x0 = np.array(x0_list)

    out = g.get("output", "path", conv=str)
    equilibrium = g.get("stability", "equilibrium", conv=str, default="M1")
    if equilibrium not in ("M1", "M2", "M3"):
        errors.append(f"{_loc(g.line_of('stability', 'equilibrium'))}: "
                      f"[stability] equilibrium must be M1, M2 or M3")
        equilibrium = "M1"
    eq_m = g.get("stability", "m", default=1.0)

    scan = None
    if g.has_section("scan"):
        axis = g.get("scan", "axis", conv=str, required=True)
        lo = g.get("scan", "min", required=True, default=0.0)
        hi = g.get("scan", "max", required=True, default=0.0)
        steps = g.get("scan", "steps", conv=int, required=True, default=0)
        axis_line = g.line_of("scan", "axis", g.section_line("scan"))
        if axis is not None and axis not in ("tau", "alpha", "m"):
            errors.append(f"{_loc(axis_line)}: [scan] axis must be "
                          f"tau, alpha or m")
        elif axis == "tau" and not isinstance(kernel, _kern.DiracKernel):
            errors.append(f"{_loc(axis_line)}: [scan] axis = tau requires "
                          f"a dirac kernel")
        elif axis == "alpha" and kind not in _NEEDS_FRAC:
            errors.append(f"{_loc(axis_line)}: [scan] axis = alpha requires "
                          f"a fractional kind")
        elif axis == "m" and kind not in ("fractional", "fractional-revised",
                                          "ep-delayed"):
            errors.append(f"{_loc(axis_line)}: [scan] axis = m is not "
                          f"defined for kind = {kind}")
        if steps is not None and steps < 0:
            errors.append(f"{_loc(g.line_of('scan', 'steps'))}: [scan] "
                          f"steps must be >= 0")
        if None not in (axis, lo, hi, steps):
            scan = ScanSpec(axis, lo, hi, max(steps, 0))

    g.sweep_unknown()
    if errors:
        raise ConfigError(errors)
    return RunConfig(kind=kind, body=body, inertia=inertia,
                     scalar_a=scalar_a, planar_k=planar_k, kernel=kernel,
                     frac=frac, x0=x0, t_end=t_end, step=step,
                     quad_step=quad_step, out=out, equilibrium=equilibrium,
                     eq_m=eq_m, scan=scan)


def _diagnostics_for(cfg: RunConfig):
    if cfg.kind in _RIGID_KINDS:
        p = cfg.body
        return {"h": lambda x: _models.hamiltonian(p, x),
                "c": _models.casimir}
    if cfg.kind == "ep-delayed":
        s = cfg.inertia
        inertia = np.array([s.I1, s.I2, s.I3])

        def energy(x):
            return 0.5 * float(np.dot(inertia * x, x))

        def momentum_c(x):
            return 0.5 * float(np.dot(inertia * x, inertia * x))

        return {"h": energy, "c": momentum_c}
    return {}


def _rhs_pair_for(cfg: RunConfig):
    if cfg.kind == "delayed":
        p = cfg.body
        return lambda x, xd: _models.rhs_delayed(p, x, xd)
    if cfg.kind == "revised-delayed":
        p = cfg.body
        return lambda x, xd: _models.rhs_revised_delayed(p, x, xd)
    if cfg.kind == "ep-delayed":
        s = cfg.inertia
        return lambda x, xd: _models.rhs_ep_delayed(s, x, xd)
    if cfg.kind == "scalar-18":
        a = cfg.scalar_a
        return lambda x, xd: a * xd
    if cfg.kind == "planar-19":
        k1, k2 = cfg.planar_k
        return lambda x, xd: np.array([x[1] - k1 * x[0],
                                       -(k1 + k2) * x[1] + xd[0]])
    raise ConfigError([f"kind = {cfg.kind} has no delayed right-hand side"])


def _run_simulation(cfg: RunConfig):
    diag = _diagnostics_for(cfg)
    if cfg.kind == "classical":
        p = cfg.body
        return integrate_rk4(lambda x: _models.rhs_classical(p, x), cfg.x0,
                             cfg.t_end, cfg.step, diagnostics=diag)
    if cfg.kind == "revised":
        p = cfg.body
        return integrate_rk4(lambda x: _models.rhs_revised(p, x), cfg.x0,
                             cfg.t_end, cfg.step, diagnostics=diag)
    if cfg.kind in ("delayed", "revised-delayed", "ep-delayed"):
        pair = _rhs_pair_for(cfg)
        phi = HistorySpec.constant(cfg.x0)
        chain = _kern.chain_reduce(cfg.kernel)
        if chain is not None:
            return integrate_chain(pair, chain, phi, cfg.t_end, cfg.step,
                                   quad_step=cfg.quad_step, diagnostics=diag)
        return integrate_dde(pair, cfg.kernel, phi, cfg.t_end, cfg.step,
                             quad_step=cfg.quad_step, diagnostics=diag)
    if cfg.kind in ("fractional", "fractional-revised"):
        p = cfg.body
        rhs = (lambda x: _models.rhs_classical(p, x)) \
            if cfg.kind == "fractional" \
            else (lambda x: _models.rhs_revised(p, x))
        return integrate_frac_abm(rhs, cfg.frac, cfg.x0, cfg.t_end,
                                  diagnostics=diag)
    if cfg.kind in ("scalar-18", "planar-19"):
        pair = _rhs_pair_for(cfg)
        phi = HistorySpec.constant(cfg.x0)
        return integrate_frac_dde(pair, cfg.frac, cfg.kernel, phi, cfg.t_end,
                                  quad_step=cfg.quad_step)
    raise ConfigError([f"cannot simulate kind = {cfg.kind}"])


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _header_only_columns(cfg: RunConfig) -> list[str]:
    dim = _DIM.get(cfg.kind, 3)
    cols = ["t"] + [f"x{i + 1}" for i in range(dim)]
    cols += list(_diagnostics_for(cfg).keys())
    return cols


def _rel_drift(series: np.ndarray) -> float:
    ref = max(abs(float(series[0])), 1e-300)
    return float(np.max(np.abs(series - series[0]))) / ref


def cmd_simulate(cfg: RunConfig, out_path: str) -> int:
    """Run the configured system and write the trajectory CSV."""
    if cfg.t_end == 0:
        with open(out_path, "w", newline="") as fh:
            fh.write(",".join(_header_only_columns(cfg)) + "\n")
        print(f"kind = {cfg.kind}")
        print("samples = 0")
        print(f"wrote = {out_path}")
        return 0
    start = time.perf_counter()
    traj = _run_simulation(cfg)
    runtime = time.perf_counter() - start
    write_trajectory_csv(traj, out_path)
    end_state = traj.final_state[: traj.core_dim]
    print(f"kind = {cfg.kind}")
    print(f"samples = {traj.n_samples}")
    print(f"step = {_fmt(traj.h)}")
    print(f"endpoint_t = {_fmt(traj.t_end)}")
    print("endpoint_x = " + ", ".join(_fmt(v) for v in end_state))
    for name, series in traj.diagnostics.items():
        print(f"{name}_drift_rel = {_rel_drift(series):.3e}")
    print(f"runtime_s = {runtime:.3f}")
    print(f"wrote = {out_path}")
    return 0


def _basic_report(cfg: RunConfig) -> _stab.StabilityReport:
    if cfg.kind in ("fractional", "fractional-revised"):
        q = _stab.char_frac_equilibrium(cfg.body, cfg.equilibrium, cfg.eq_m,
                                        revised=cfg.kind.endswith("revised"))
        rep = _stab.matignon_classify(q, cfg.frac.order)
        rep.metadata["char_poly"] = (f"w^2 + ({_fmt(q.c1)})*w "
                                     f"+ ({_fmt(q.c0)})")
        rep.metadata["equilibrium"] = cfg.equilibrium
        return rep
    if cfg.kind == "ep-delayed":
        s = cfg.inertia
        kernel = cfg.kernel
        count, boundary = _stab.count_rhp_roots(
            lambda lam: _stab.char_ep_eval(s, kernel, lam))
        if boundary < 1e-9 or count < 0:
            verdict = _stab.MARGINAL
        else:
            verdict = _stab.STABLE if count == 0 else _stab.UNSTABLE
        rep = _stab.StabilityReport(verdict=verdict, structural_zero_roots=1,
                                    metadata={"rhp_root_count": count})
        return rep
    if cfg.kind == "scalar-18":
        return _stab.scalar_frac_delay_check(cfg.scalar_a, cfg.frac.order,
                                             cfg.kernel.lag)
    if cfg.kind == "planar-19":
        return _stab.planar_frac_delay_check(*cfg.planar_k, cfg.frac.order,
                                             cfg.kernel.lag)
    raise ConfigError([f"stability analysis is not defined for "
                       f"kind = {cfg.kind}"])


def _report_param(cfg: RunConfig) -> float:
    if cfg.kind in ("fractional", "fractional-revised", "scalar-18",
                    "planar-19") and cfg.frac is not None:
        return cfg.frac.order
    if isinstance(cfg.kernel, _kern.DiracKernel):
        return cfg.kernel.lag
    return float("nan")


def _report_row(param: float, rep: _stab.StabilityReport) -> str:
    root = rep.dominant_root
    re = root.real if root is not None else float("nan")
    im = root.imag if root is not None else float("nan")
    margin = rep.min_margin if rep.min_margin is not None else float("nan")
    return ",".join([_fmt(param), _fmt(re), _fmt(im), _fmt(margin),
                     rep.verdict])


_SCAN_HEADER = "param,root_re,root_im,margin,verdict"


def cmd_stability(cfg: RunConfig, out_path: str) -> int:
    """Analyze the configured equilibrium; write a text block plus CSV rows."""
    try:
        rep = _basic_report(cfg)
        if cfg.kind == "ep-delayed":
            rep.metadata["tau_c_formula"] = repr(
                _stab.tau_c_formula(cfg.inertia))
            crossing = _stab.critical_delay_scan(cfg.inertia)
            rep.critical_delay = crossing
            if isinstance(cfg.kernel, _kern.DiracKernel):
                rep.metadata["kernel_lag"] = repr(cfg.kernel.lag)
    except ValueError as exc:
        raise ConfigError([str(exc)]) from exc
    text = f"kind = {cfg.kind}\n" + rep.to_text()
    with open(out_path, "w", newline="") as fh:
        fh.write(text)
    rows_path = out_path + ".rows.csv"
    with open(rows_path, "w", newline="") as fh:
        fh.write(_SCAN_HEADER + "\n")
        fh.write(_report_row(_report_param(cfg), rep) + "\n")
    print(f"kind = {cfg.kind}")
    print(f"verdict = {rep.verdict}")
    if rep.critical_delay is not None:
        print(f"critical_delay = {rep.critical_delay!r}")
    print(f"wrote = {out_path}")
    print(f"wrote = {rows_path}")
    return 0


def _cfg_with_axis(cfg: RunConfig, axis: str, value: float) -> RunConfig:
    if axis == "tau":
        return dataclasses.replace(cfg, kernel=_kern.DiracKernel(value))
    if axis == "alpha":
        frac = cfg.frac or FracConfig(order=0.5, h=cfg.step)
        return dataclasses.replace(
            cfg, frac=dataclasses.replace(frac, order=value))
    if axis == "m":
        if cfg.kind == "ep-delayed":
            return dataclasses.replace(
                cfg, inertia=dataclasses.replace(cfg.inertia, m=value))
        return dataclasses.replace(cfg, eq_m=value)
    raise ConfigError([f"unknown scan axis {axis!r}"])


def cmd_scan(cfg: RunConfig, out_path: str) -> int:
    """Sweep one parameter axis; one verdict row per grid point."""
    if cfg.scan is None:
        raise ConfigError(["scan requires a [scan] section "
                           "(axis, min, max, steps)"])
    sweep = cfg.scan
    grid = np.linspace(sweep.lo, sweep.hi, sweep.steps) if sweep.steps else []
    rows = []
    for value in grid:
        try:
            point = _cfg_with_axis(cfg, sweep.axis, float(value))
            rep = _basic_report(point)
            rows.append(_report_row(float(value), rep))
        except Exception as exc:  # per-point failure: record and continue
            msg = str(exc).replace(",", ";").replace("\n", " ")
            rows.append(",".join([_fmt(value), "nan", "nan", "nan",
                                  f"error: {msg}"]))
    with open(out_path, "w", newline="") as fh:
        fh.write(_SCAN_HEADER + "\n")
        for row in rows:
            fh.write(row + "\n")
    print(f"kind = {cfg.kind}")
    print(f"axis = {sweep.axis}")
    print(f"rows = {len(rows)}")
    print(f"wrote = {out_path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigidmem",
        description="Simulate and analyze rigid-body dynamics with "
                    "delay and fractional memory.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("simulate", "integrate the configured system, write CSV"),
            ("stability", "analyze the configured equilibrium"),
            ("scan", "sweep a parameter axis from the [scan] section")):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True,
                        help="path to the config file")
        sp.add_argument("--out", default=None,
                        help="output artifact path (wins over [output] path)")
        sp.add_argument("--set", action="append", default=[],
                        metavar="SECTION.KEY=VALUE", dest="overrides",
                        help="override a config value")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text, overrides=args.overrides)
        out = args.out or cfg.out
        if out is None:
            raise ConfigError(["no output path: pass --out or set "
                               "[output] path"])
        if args.command == "simulate":
            return cmd_simulate(cfg, out)
        if args.command == "stability":
            return cmd_stability(cfg, out)
        return cmd_scan(cfg, out)
    except ConfigError as exc:
        for msg in exc.messages:
            print(f"error: {msg}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
