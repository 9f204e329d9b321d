"""Tests for the four-box overturning simulator."""

import math

import pytest

from amocqa.boxmodel import (
    Constants,
    DEFAULT_CONSTANTS,
    InvalidParams,
    NumericalBlowup,
    Params,
    default_params,
    density,
    load_constants,
    run,
    total_salt,
)


@pytest.fixture(scope="module")
def default_run():
    return run(default_params())


def test_density_at_reference_point_is_rho0():
    assert density(0.0, 0.0) == DEFAULT_CONSTANTS.rho0


def test_density_linearity_in_salinity():
    c = DEFAULT_CONSTANTS
    diff = density(12.0, 35.0) - density(12.0, 34.0)
    assert diff == pytest.approx(c.rho0 * c.beta_S, rel=1e-12)


def test_density_hand_evaluated_value():
    # 1027 * (1 - 2e-4*5 + 8e-4*35) evaluated by hand
    assert density(5.0, 35.0) == pytest.approx(1054.729, rel=1e-9)


def test_default_params_are_canonical():
    p = default_params()
    assert p.Fwn == 4.5e4
    assert p.Fws == 7.5e4
    assert p.M_ek == 2.5e7
    assert p.D_low0 == 400.0
    assert p.epsilon == 1.2e-4
    assert p.N == 4000
    assert p.dt == 2.592e6
    assert default_params() == p


def test_initial_overturning_matches_closed_form(default_run):
    c = DEFAULT_CONSTANTS
    p = default_params()
    drho = density(c.T_n, c.S_n0) - density(c.T_low, c.S_low0)
    expected = c.K_n * (drho / c.rho0) * p.D_low0**2 / p.epsilon
    assert default_run.M_n[0] == pytest.approx(expected, rel=1e-12)
    assert default_run.M_n[0] == pytest.approx(1.44e7, rel=1e-3)


@pytest.mark.parametrize(
    "override",
    [{"Fwn": 9e4}, {"Fws": 1.5e5}, {"M_ek": 3e7}, {"N": 17}],
)
def test_initial_overturning_ignores_non_initial_params(override):
    base = run(Params(N=5))
    changed = run(Params(N=5, **{k: v for k, v in override.items() if k != "N"})) \
        if "N" not in override else run(Params(**override))
    assert changed.M_n[0] == base.M_n[0]


@pytest.mark.parametrize("override", [{"D_low0": 350.0}, {"epsilon": 2e-4}])
def test_initial_overturning_tracks_initial_state(override):
    base = run(Params(N=5))
    changed = run(Params(N=5, **override))
    assert changed.M_n[0] != base.M_n[0]


def test_series_lengths_and_index_zero(default_run):
    p = default_params()
    for name in ("M_n", "S_north", "S_south", "S_low", "S_deep", "T_low", "D_low"):
        assert len(default_run.series(name)) == p.N + 1
    c = DEFAULT_CONSTANTS
    assert default_run.S_north[0] == c.S_n0
    assert default_run.S_south[0] == c.S_s0
    assert default_run.S_low[0] == c.S_low0
    assert default_run.S_deep[0] == c.S_deep0
    assert default_run.D_low[0] == p.D_low0


def test_series_accessor_rejects_unknown_name(default_run):
    with pytest.raises(KeyError):
        default_run.series("S_n")


def test_low_box_temperature_series_is_constant(default_run):
    assert set(default_run.T_low) == {DEFAULT_CONSTANTS.T_low}


def test_salt_conserved_at_every_step(default_run):
    salt = total_salt(default_run)
    drift = max(abs(s - salt[0]) for s in salt) / abs(salt[0])
    assert drift < 1e-6


@pytest.mark.parametrize(
    "params",
    [
        Params(Fwn=1.2e5, N=500),
        Params(Fws=2e5, N=500),
        Params(M_ek=3.2e7, N=500),
        Params(D_low0=600.0, N=500),
        Params(epsilon=3e-4, N=500),
    ],
)
def test_salt_conserved_off_default(params):
    salt = total_salt(run(params))
    drift = max(abs(s - salt[0]) for s in salt) / abs(salt[0])
    assert drift < 1e-6


def test_depth_series_stays_inside_clamp_band(default_run):
    c = DEFAULT_CONSTANTS
    assert all(10.0 <= d <= c.H - 10.0 for d in default_run.D_low)


def test_volume_bookkeeping_is_exact(default_run):
    # V_low + V_deep = A_low * H regardless of D_low; spot-check the identity
    c = DEFAULT_CONSTANTS
    for d in default_run.D_low[::500]:
        total = c.A_low * d + c.A_low * (c.H - d)
        assert total == pytest.approx(c.A_low * c.H, rel=1e-14)


def test_repeated_runs_are_bitwise_identical():
    a = run(Params(N=200))
    b = run(Params(N=200))
    assert a.M_n == b.M_n
    assert a.S_north == b.S_north
    assert a.D_low == b.D_low


def test_step_halving_agrees_on_final_overturning():
    p = default_params()
    coarse = run(p)
    fine = run(Params(N=2 * p.N, dt=p.dt / 2))
    rel = abs(coarse.M_n[-1] - fine.M_n[-1]) / abs(fine.M_n[-1])
    assert rel < 1e-3


def test_truncation_error_shrinks_fourth_order():
    # With a deliberately coarse step the error against a fine reference
    # should drop by roughly 2^4 per halving.
    base_dt = 2.592e6 * 64
    steps = 40
    ref = run(Params(N=steps * 32, dt=base_dt / 32))
    errs = []
    for k in (1, 2, 4):
        out = run(Params(N=steps * k, dt=base_dt / k))
        errs.append(abs(out.M_n[-1] - ref.M_n[-1]))
    assert errs[0] / errs[1] > 8
    assert errs[1] / errs[2] > 8


def test_strong_freshwater_forcing_reverses_overturning():
    out = run(Params(Fwn=4.5e5))
    signs = [math.copysign(1.0, v) for v in out.M_n]
    assert signs[0] > 0
    assert any(s < 0 for s in signs)


def test_default_run_keeps_overturning_sign(default_run):
    sign0 = math.copysign(1.0, default_run.M_n[0])
    assert all(v * sign0 > 0 for v in default_run.M_n)


def test_clamp_event_recorded_as_warning():
    # Strong eddy return with no wind input drains the low box to the floor.
    c = Constants(K_GM=1e6, K_v=1e-9)
    out = run(Params(M_ek=0.0, D_low0=50.0, N=200), constants=c)
    assert min(out.D_low) == 10.0
    assert any("clamp" in w for w in out.warnings)


def test_default_run_has_no_warnings(default_run):
    assert default_run.warnings == []


def test_oversized_step_raises_blowup():
    with pytest.raises(NumericalBlowup):
        run(Params(dt=1e12, N=50))


@pytest.mark.parametrize(
    "bad",
    [
        Params(N=0),
        Params(dt=0.0),
        Params(dt=-5.0),
        Params(D_low0=0.0),
        Params(D_low0=4000.0),
        Params(epsilon=0.0),
        Params(M_ek=-1.0),
        Params(Fwn=-1.0),
        Params(Fws=-1.0),
        Params(Fwn=float("nan")),
    ],
)
def test_invalid_params_rejected(bad):
    with pytest.raises(InvalidParams):
        run(bad)


def test_load_constants_overrides_and_defaults(tmp_path):
    path = tmp_path / "constants.txt"
    path.write_text("# tuned table\nK_GM = 5e4\nT_low=12.0\n\n")
    c = load_constants(str(path))
    assert c.K_GM == 5e4
    assert c.T_low == 12.0
    assert c.A_low == DEFAULT_CONSTANTS.A_low


def test_load_constants_rejects_unknown_key(tmp_path):
    path = tmp_path / "constants.txt"
    path.write_text("K_gm=5e4\n")
    with pytest.raises(ValueError):
        load_constants(str(path))


def test_load_constants_rejects_malformed_line(tmp_path):
    path = tmp_path / "constants.txt"
    path.write_text("K_GM 5e4\n")
    with pytest.raises(ValueError):
        load_constants(str(path))
