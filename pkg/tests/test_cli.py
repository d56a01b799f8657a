import numpy as np
import pytest

from rigidmem import cli, models
from rigidmem.errors import ConfigError

CLASSICAL = """\
[system]
kind = classical
a1 = 3
a2 = 2
a3 = 1

[run]
x0 = 1, 1, 1
t_end = 0.5
step = 0.01
"""

FRACTIONAL = """\
[system]
kind = fractional
a1 = 3
a2 = 2
a3 = 1

[fractional]
order = 0.82

[run]
x0 = 1, 1, 1
t_end = 0.5
step = 0.01

[stability]
equilibrium = M1
m = 1
"""

EP_DELAYED = """\
[system]
kind = ep-delayed
I1 = 3
I2 = 2
I3 = 1
coupling = 1
m = 1

[kernel]
kind = dirac
lag = 0.5

[run]
x0 = 0.3333333333333333, 0.01, 0.01
t_end = 2
step = 0.01

[scan]
axis = tau
min = 0
max = 3
steps = 31
"""


def run_cli(tmp_path, config_text, command, out_name, overrides=()):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(config_text)
    out_path = tmp_path / out_name
    argv = [command, "--config", str(cfg_path), "--out", str(out_path)]
    for item in overrides:
        argv += ["--set", item]
    code = cli.main(argv)
    return code, out_path


class TestParseConfig:
    def test_minimal_classical(self):
        cfg = cli.parse_config(CLASSICAL)
        assert cfg.kind == "classical"
        assert isinstance(cfg.body, models.RigidBodyParams)
        assert np.array_equal(cfg.x0, [1.0, 1.0, 1.0])
        assert cfg.t_end == 0.5 and cfg.step == 0.01

    def test_fractional_order_accepted(self):
        cfg = cli.parse_config(FRACTIONAL)
        assert cfg.frac.order == 0.82

    def test_missing_kernel_section_named(self):
        text = CLASSICAL.replace("kind = classical", "kind = delayed")
        with pytest.raises(ConfigError) as info:
            cli.parse_config(text)
        assert any("[kernel]" in msg and "line 2" in msg
                   for msg in info.value.messages)

    def test_ordering_violation_reports_line(self):
        text = CLASSICAL.replace("a1 = 3", "a1 = 1.5")
        with pytest.raises(ConfigError) as info:
            cli.parse_config(text)
        assert any("a1 > a2 > a3" in msg and "line 3" in msg
                   for msg in info.value.messages)

    def test_unknown_key_reports_line(self):
        with pytest.raises(ConfigError) as info:
            cli.parse_config(CLASSICAL + "typo_key = 1\n")
        assert any("typo_key" in msg for msg in info.value.messages)

    def test_set_override(self):
        cfg = cli.parse_config(FRACTIONAL, overrides=["fractional.order=0.5"])
        assert cfg.frac.order == 0.5

    def test_bad_override_reported(self):
        with pytest.raises(ConfigError) as info:
            cli.parse_config(FRACTIONAL, overrides=["nonsense"])
        assert any("--set" in msg for msg in info.value.messages)

    def test_kernel_not_allowed_for_classical(self):
        text = CLASSICAL + "\n[kernel]\nkind = dirac\nlag = 0.1\n"
        with pytest.raises(ConfigError) as info:
            cli.parse_config(text)
        assert any("not allowed" in msg for msg in info.value.messages)

    def test_x0_dimension_checked(self):
        text = FRACTIONAL.replace("x0 = 1, 1, 1", "x0 = 1, 1")
        with pytest.raises(ConfigError) as info:
            cli.parse_config(text)
        assert any("x0" in msg for msg in info.value.messages)


class TestSimulate:
    def test_classical_run_writes_csv(self, tmp_path, capsys):
        code, out = run_cli(tmp_path, CLASSICAL, "simulate", "run.csv")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "t,x1,x2,x3,h,c"
        assert len(lines) == 52
        captured = capsys.readouterr().out
        assert "h_drift_rel" in captured and "runtime_s" in captured

    def test_zero_t_end_header_only(self, tmp_path):
        code, out = run_cli(tmp_path, CLASSICAL, "simulate", "empty.csv",
                            overrides=["run.t_end=0"])
        assert code == 0
        assert out.read_text() == "t,x1,x2,x3,h,c\n"

    def test_determinism_byte_identical(self, tmp_path):
        _, out1 = run_cli(tmp_path, FRACTIONAL, "simulate", "a.csv")
        _, out2 = run_cli(tmp_path, FRACTIONAL, "simulate", "b.csv")
        assert out1.read_bytes() == out2.read_bytes()

    def test_diagnostics_recompute_from_emitted_states(self, tmp_path):
        _, out = run_cli(tmp_path, CLASSICAL, "simulate", "diag.csv")
        rows = np.loadtxt(out, delimiter=",", skiprows=1)
        p = models.RigidBodyParams(3, 2, 1)
        for row in rows[:: 10]:
            x = row[1:4]
            assert row[4] == models.hamiltonian(p, x)
            assert row[5] == models.casimir(x)

    def test_divergence_exit_code(self, tmp_path, capsys):
        text = """\
[system]
kind = scalar-18
a = 2.0

[kernel]
kind = dirac
lag = 0.5

[fractional]
order = 0.7

[run]
x0 = 1
t_end = 40
step = 0.01
"""
        code, _ = run_cli(tmp_path, text, "simulate", "div.csv")
        assert code == 3
        assert "last valid time" in capsys.readouterr().err

    def test_validation_exit_code(self, tmp_path, capsys):
        bad = CLASSICAL.replace("a1 = 3", "a1 = 1")
        code, _ = run_cli(tmp_path, bad, "simulate", "bad.csv")
        assert code == 2

    def test_scalar_run_columns(self, tmp_path):
        text = """\
[system]
kind = scalar-18
a = -1.0

[kernel]
kind = dirac
lag = 0.5

[fractional]
order = 0.7

[run]
x0 = 1
t_end = 1
step = 0.01
"""
        code, out = run_cli(tmp_path, text, "simulate", "scalar.csv")
        assert code == 0
        assert out.read_text().splitlines()[0] == "t,x1"

    def test_exponential_kernel_uses_chain_columns(self, tmp_path):
        text = """\
[system]
kind = delayed
a1 = 3
a2 = 2
a3 = 1

[kernel]
kind = exponential
rate = 2.0

[run]
x0 = 0.3, 0.3, 0.3
t_end = 1
step = 0.01
"""
        code, out = run_cli(tmp_path, text, "simulate", "chain.csv")
        assert code == 0
        header = out.read_text().splitlines()[0]
        assert header.startswith("t,x1,x2,x3,h,c,eta1_1")


class TestStability:
    def test_ep_delayed_report_contains_tau_c(self, tmp_path, capsys):
        code, out = run_cli(tmp_path, EP_DELAYED, "stability", "rep.txt")
        assert code == 0
        text = out.read_text()
        assert "tau_c_formula = 2.5" in text
        assert "critical_delay" in text
        rows = (out.parent / "rep.txt.rows.csv").read_text().splitlines()
        assert rows[0] == "param,root_re,root_im,margin,verdict"
        assert len(rows) == 2

    def test_fractional_m1_verdict(self, tmp_path):
        code, out = run_cli(tmp_path, FRACTIONAL, "stability", "m1.txt")
        assert code == 0
        assert "verdict = asymptotically-stable" in out.read_text()

    def test_fractional_m2_unstable(self, tmp_path):
        for order in ("0.3", "0.82", "1.0"):
            code, out = run_cli(tmp_path, FRACTIONAL, "stability", "m2.txt",
                                overrides=["stability.equilibrium=M2",
                                           f"fractional.order={order}"])
            assert code == 0
            assert "verdict = unstable" in out.read_text()

    def test_stability_not_defined_for_classical(self, tmp_path):
        code, _ = run_cli(tmp_path, CLASSICAL, "stability", "no.txt")
        assert code == 2


class TestScan:
    def test_tau_scan_single_flip(self, tmp_path):
        code, out = run_cli(tmp_path, EP_DELAYED, "scan", "scan.csv")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "param,root_re,root_im,margin,verdict"
        verdicts = [line.split(",")[-1] for line in lines[1:]]
        assert len(verdicts) == 31
        flips = sum(1 for a, b in zip(verdicts, verdicts[1:]) if a != b)
        assert flips == 1

    def test_alpha_scan_marginal_at_one(self, tmp_path):
        text = FRACTIONAL + "\n[scan]\naxis = alpha\nmin = 0.5\nmax = 1.0\nsteps = 6\n"
        code, out = run_cli(tmp_path, text, "scan", "alpha.csv")
        assert code == 0
        verdicts = [line.split(",")[-1]
                    for line in out.read_text().splitlines()[1:]]
        assert verdicts[:-1] == ["asymptotically-stable"] * 5
        assert verdicts[-1] == "marginal"

    def test_empty_range_header_only(self, tmp_path):
        code, out = run_cli(tmp_path, EP_DELAYED, "scan", "empty.csv",
                            overrides=["scan.steps=0"])
        assert code == 0
        assert out.read_text() == "param,root_re,root_im,margin,verdict\n"

    def test_scan_determinism(self, tmp_path):
        _, out1 = run_cli(tmp_path, EP_DELAYED, "scan", "s1.csv")
        _, out2 = run_cli(tmp_path, EP_DELAYED, "scan", "s2.csv")
        assert out1.read_bytes() == out2.read_bytes()

    def test_scan_requires_section(self, tmp_path):
        code, _ = run_cli(tmp_path, FRACTIONAL, "scan", "no.csv")
        assert code == 2
