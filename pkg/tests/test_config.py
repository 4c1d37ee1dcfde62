import pytest

from strainmag.config import (
    SCHEMA,
    RunConfig,
    apply_overrides,
    emit_config,
    parse_config,
)
from strainmag.errors import ConfigError

MINIMAL = """\
magnet.major_axis = 100 nm
magnet.minor_axis = 99 nm
magnet.thickness = 5 nm
magnet.saturation_magnetization = 1e6 A/m
magnet.magnetostriction = -35 ppm
magnet.youngs_modulus = 209 GPa
"""


def test_parse_minimal_fills_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg["magnet.major_axis"] == pytest.approx(100e-9, rel=1e-15, abs=0)
    assert cfg["magnet.magnetostriction"] == pytest.approx(-35e-6, rel=1e-15, abs=0)
    assert cfg["magnet.youngs_modulus"] == pytest.approx(209e9)
    # defaults
    assert cfg["magnet.gilbert_damping"] == 0.01
    assert cfg["sim.time_step"] == 1e-13
    assert cfg["sim.decimation"] == 1000
    assert cfg["sim.integrator"] == "euler"
    assert set(cfg.values) == set(SCHEMA)


def test_parse_unit_conversions():
    cfg = parse_config(MINIMAL + "sim.stress = 6.5 MPa\nsim.duration = 10 us\n")
    assert cfg["sim.stress"] == pytest.approx(6.5e6)
    assert cfg["sim.duration"] == pytest.approx(10e-6, rel=1e-15, abs=0)


def test_parse_year_unit():
    cfg = parse_config(MINIMAL + "retention.targets = 1 us, 1 s, 10 year\n")
    assert cfg["retention.targets"][2] == pytest.approx(10 * 365.25 * 86400.0)


def test_missing_unit_rejected():
    with pytest.raises(ConfigError, match="missing unit"):
        parse_config(MINIMAL.replace("magnet.major_axis = 100 nm",
                                     "magnet.major_axis = 100"))


def test_unknown_unit_rejected():
    with pytest.raises(ConfigError, match="unknown unit"):
        parse_config(MINIMAL.replace("100 nm", "100 furlong"))


def test_unknown_key_reports_line():
    with pytest.raises(ConfigError, match="line 7: unknown key 'magnet.typo'"):
        parse_config(MINIMAL + "magnet.typo = 3\n")


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config(MINIMAL + "magnet.major_axis = 90 nm\n")


def test_malformed_line_rejected():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("this is not an assignment\n")


def test_comments_and_blank_lines():
    text = "# header comment\n\n" + MINIMAL + "sim.seed = 3  # inline comment\n"
    cfg = parse_config(text)
    assert cfg["sim.seed"] == 3


def test_non_numeric_rejected():
    with pytest.raises(ConfigError, match="not a number"):
        parse_config(MINIMAL + "sim.stress = lots MPa\n")


def test_integer_key_rejects_float():
    with pytest.raises(ConfigError, match="integer"):
        parse_config(MINIMAL + "sim.decimation = 10.5\n")


def test_validation_positive():
    with pytest.raises(ConfigError, match="positive"):
        parse_config(MINIMAL + "sim.time_step = -1 ps\n")
    with pytest.raises(ConfigError, match=">= 1"):
        parse_config(MINIMAL + "sim.decimation = 0\n")
    with pytest.raises(ConfigError, match="integrator"):
        parse_config(MINIMAL + "sim.integrator = rk4\n")


def test_apply_overrides():
    cfg = parse_config(MINIMAL)
    out = apply_overrides(cfg, ["sim.stress=5 MPa", "sim.seed=42"])
    assert out["sim.stress"] == pytest.approx(5e6)
    assert out["sim.seed"] == 42
    # original untouched
    assert cfg["sim.stress"] == 0.0


def test_override_errors():
    cfg = parse_config(MINIMAL)
    with pytest.raises(ConfigError, match="unknown key"):
        apply_overrides(cfg, ["nope.nope=1"])
    with pytest.raises(ConfigError, match="key=value"):
        apply_overrides(cfg, ["sim.stress 5 MPa"])
    with pytest.raises(ConfigError, match="missing unit"):
        apply_overrides(cfg, ["sim.stress=5"])


def test_emit_round_trip_law():
    cfg = parse_config(MINIMAL + "sim.stress = 6.5 MPa\nretention.targets = 1 ms, 2 s\n")
    text = emit_config(cfg)
    back = parse_config(text)
    assert back.values == cfg.values
    # and the canonical form is a fixed point
    assert emit_config(back) == text


def test_emit_uses_base_units():
    cfg = parse_config(MINIMAL)
    lines = dict(
        line.split(" = ", 1) for line in emit_config(cfg).splitlines() if " = " in line
    )
    number, unit = lines["magnet.major_axis"].rsplit(" ", 1)
    assert unit == "m"
    assert float(number) == pytest.approx(1e-7, rel=1e-12, abs=0)
    assert float(lines["magnet.magnetostriction"]) == pytest.approx(-3.5e-5, rel=1e-12, abs=0)


def test_builders(co_spec, pmn_pt_stack):
    cfg = parse_config(MINIMAL + "magnet.gilbert_damping = 0.01\n")
    spec = cfg.magnet_spec()
    for name in ("major_axis", "minor_axis", "thickness", "saturation_magnetization",
                 "magnetostriction", "youngs_modulus", "gilbert_damping", "temperature"):
        assert getattr(spec, name) == pytest.approx(getattr(co_spec, name), rel=1e-12, abs=0)
    stack = cfg.piezo_stack()
    for name in ("d33", "relative_permittivity", "layer_thickness", "pad_area"):
        assert getattr(stack, name) == pytest.approx(getattr(pmn_pt_stack, name), rel=1e-12, abs=0)
    assert stack.pad_count == pmn_pt_stack.pad_count
    sim = cfg.sim_config()
    assert sim.time_step == 1e-13
    assert sim.duration == 1e-6


def test_magnet_spec_requires_all_keys():
    cfg = RunConfig(values={k: d for k, (_, d) in SCHEMA.items()})
    with pytest.raises(ConfigError, match="missing required"):
        cfg.magnet_spec()
