"""Deterministic four-box ocean overturning simulator.

Boxes: north, south, low latitude, and deep. The prognostic state is the four
box salinities plus the depth of the low-latitude box; box temperatures are
held fixed. Density follows a linear equation of state, and the northern
sinking branch responds to the north/low density contrast, so sustained
freshening of the north can reverse the overturning. Integration is classical
fixed-step fourth-order Runge-Kutta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace


class InvalidParams(Exception):
    """Raised when run parameters violate their documented ranges."""


class NumericalBlowup(Exception):
    """Raised when the state becomes non-finite (step size too large)."""


@dataclass(frozen=True)
class Constants:
    """Geometry, equation-of-state, and mixing constants.

    Defaults describe a single-basin ocean with fixed north and south boxes,
    a variable-depth low-latitude box, and a deep box filling the remainder
    of the water column.
    """

    A_low: float = 2.6e14    # low-box surface area [m^2]
    V_n: float = 3e15        # north box volume [m^3]
    V_s: float = 9e15        # south box volume [m^3]
    H: float = 4000.0        # total depth [m]
    T_n: float = 5.0         # north box temperature [degC]
    T_s: float = 7.0         # south box temperature [degC]
    T_low: float = 10.0      # low box temperature [degC]
    T_deep: float = 3.0      # deep box temperature [degC]
    S_n0: float = 35.0       # initial north salinity [psu]
    S_s0: float = 34.5       # initial south salinity [psu]
    S_low0: float = 35.5     # initial low salinity [psu]
    S_deep0: float = 34.7    # initial deep salinity [psu]
    S0: float = 35.0         # reference salinity for virtual salt flux [psu]
    alpha_T: float = 2e-4    # thermal expansion coefficient [K^-1]
    beta_S: float = 8e-4     # haline contraction coefficient [psu^-1]
    rho0: float = 1027.0     # reference density [kg m^-3]
    K_n: float = 18.0        # overturning geometry constant [m s^-2]
    K_GM: float = 4.275e4    # eddy return constant [m^2 s^-1]
    K_v: float = 1e-5        # upwelling velocity constant [m s^-1]


DEFAULT_CONSTANTS = Constants()

# Depth clamp margin keeps the upwelling term K_v*A_low/D finite [m].
_D_MIN = 10.0


@dataclass(frozen=True)
class Params:
    """Run parameters: the knobs programs may set, plus step control."""

    Fwn: float = 4.5e4       # northern freshwater flux [m^3 s^-1]
    Fws: float = 7.5e4       # southern freshwater flux [m^3 s^-1]
    M_ek: float = 2.5e7      # Ekman transport [m^3 s^-1]
    D_low0: float = 400.0    # initial low-box depth [m]
    epsilon: float = 1.2e-4  # overturning friction coefficient [s^-1]
    N: int = 4000            # step count
    dt: float = 2.592e6      # step size [s] (30 days)


@dataclass(frozen=True)
class RunOutput:
    """Per-step series of length N+1, the effective params, and warnings."""

    M_n: list[float]         # northern overturning transport [m^3 s^-1]
    S_north: list[float]     # north box salinity [psu]
    S_south: list[float]     # south box salinity [psu]
    S_low: list[float]       # low box salinity [psu]
    S_deep: list[float]      # deep box salinity [psu]
    T_low: list[float]       # low box temperature, constant [degC]
    D_low: list[float]       # low box depth [m]
    params: Params
    warnings: list[str]

    def series(self, variable: str) -> list[float]:
        """Return the series for a variable name, e.g. ``"M_n"``."""
        if variable not in _SERIES_NAMES:
            raise KeyError(f"unknown variable {variable!r}")
        return getattr(self, variable)


_SERIES_NAMES = ("M_n", "S_north", "S_south", "S_low", "S_deep", "T_low", "D_low")


def default_params() -> Params:
    """Return the canonical default run parameters."""
    return Params()


def load_constants(path: str) -> Constants:
    """Read a ``key=value`` constants file, falling back to defaults.

    Blank lines and ``#`` comments are ignored. Unknown keys raise
    ``ValueError`` so typos do not silently leave a default in place.
    """
    known = {f.name for f in fields(Constants)}
    overrides: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown constant {key!r}")
            overrides[key] = float(value.strip())
    return replace(Constants(), **overrides)


def density(T: float, S: float, constants: Constants = DEFAULT_CONSTANTS) -> float:
    """Linear equation of state.

    Parameters
    ----------
    T : float
        Temperature [degC].
    S : float
        Salinity [psu].

    Returns
    -------
    float
        Density rho0 * (1 - alpha_T*T + beta_S*S) [kg m^-3].
    """
    return constants.rho0 * (1.0 - constants.alpha_T * T + constants.beta_S * S)


def _m_n(s_n: float, s_low: float, d: float, epsilon: float, c: Constants) -> float:
    """Diagnostic northern transport K_n * (drho/rho0) * D^2 / epsilon."""
    drho = density(c.T_n, s_n, c) - density(c.T_low, s_low, c)
    return c.K_n * (drho / c.rho0) * d * d / epsilon


def _upstream(q: float, s_from: float, s_to: float) -> float:
    """Salt carried by a directed flow, taken from the upstream box."""
    return q * (s_from if q >= 0.0 else s_to)


def _derivs(y: tuple[float, ...], p: Params, c: Constants) -> tuple[float, ...]:
    """Time derivatives of (S_n, S_s, S_low, S_deep, D_low)."""
    s_n, s_s, s_low, s_deep, d = y

    M_n = _m_n(s_n, s_low, d, p.epsilon, c)
    M_eddy = c.K_GM * d
    M_u = c.K_v * c.A_low / d
    M_ds = p.M_ek - M_eddy

    # Directed pathways; each term is the salt flux along one pathway.
    q_low_n = _upstream(M_n, s_low, s_n)       # low -> n
    q_n_deep = _upstream(M_n, s_n, s_deep)     # n -> deep
    q_deep_low = _upstream(M_u, s_deep, s_low)  # deep -> low
    q_s_low = _upstream(p.M_ek, s_s, s_low)    # s -> low
    q_low_s = _upstream(M_eddy, s_low, s_s)    # low -> s
    q_deep_s = _upstream(M_ds, s_deep, s_s)    # deep -> s

    # Box salt budgets [psu m^3 s^-1]; virtual salt fluxes stand in for
    # freshwater exchange and sum to zero across boxes.
    F_n = q_low_n - q_n_deep - p.Fwn * c.S0
    F_s = q_low_s + q_deep_s - q_s_low - p.Fws * c.S0
    F_low = q_deep_low + q_s_low - q_low_n - q_low_s + (p.Fwn + p.Fws) * c.S0
    F_deep = q_n_deep - q_deep_low - q_deep_s

    dD = (p.M_ek + M_u - M_eddy - M_n) / c.A_low

    # Fixed-volume boxes integrate V*dS/dt; the low and deep boxes share the
    # moving interface at depth D, so their budgets carry the d(V*S)/dt term.
    dS_n = F_n / c.V_n
    dS_s = F_s / c.V_s
    dS_low = (F_low - s_low * c.A_low * dD) / (c.A_low * d)
    dS_deep = (F_deep + s_deep * c.A_low * dD) / (c.A_low * (c.H - d))
    return (dS_n, dS_s, dS_low, dS_deep, dD)


def _rk4_step(y: tuple[float, ...], dt: float, p: Params, c: Constants) -> tuple[float, ...]:
    """One classical Runge-Kutta step of size dt."""
    k1 = _derivs(y, p, c)
    k2 = _derivs(tuple(y[i] + 0.5 * dt * k1[i] for i in range(5)), p, c)
    k3 = _derivs(tuple(y[i] + 0.5 * dt * k2[i] for i in range(5)), p, c)
    k4 = _derivs(tuple(y[i] + dt * k3[i] for i in range(5)), p, c)
    return tuple(
        y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(5)
    )


def validate_params(p: Params, c: Constants = DEFAULT_CONSTANTS) -> None:
    """Raise ``InvalidParams`` if any parameter violates its documented range."""
    for name in ("Fwn", "Fws", "M_ek", "D_low0", "epsilon", "dt"):
        value = getattr(p, name)
        if not math.isfinite(value):
            raise InvalidParams(f"{name} must be finite, got {value!r}")
    if p.N < 1 or p.N != int(p.N):
        raise InvalidParams(f"N must be an integer >= 1, got {p.N!r}")
    if p.dt <= 0:
        raise InvalidParams(f"dt must be positive, got {p.dt!r}")
    if not 0 < p.D_low0 < c.H:
        raise InvalidParams(f"D_low0 must lie in (0, {c.H}), got {p.D_low0!r}")
    if p.epsilon <= 0:
        raise InvalidParams(f"epsilon must be positive, got {p.epsilon!r}")
    if p.M_ek < 0:
        raise InvalidParams(f"M_ek must be nonnegative, got {p.M_ek!r}")
    if p.Fwn < 0 or p.Fws < 0:
        raise InvalidParams(f"freshwater fluxes must be nonnegative, got {p.Fwn!r}, {p.Fws!r}")


def run(params: Params | None = None, constants: Constants = DEFAULT_CONSTANTS) -> RunOutput:
    """Integrate the model for N steps from the initial state.

    Parameters
    ----------
    params : Params, optional
        Run parameters; defaults to ``default_params()``.
    constants : Constants, optional
        Model constants; defaults to the built-in table.

    Returns
    -------
    RunOutput
        Series of length N+1 per variable (index 0 is the initial state),
        with M_n computed diagnostically from the state at each step.

    Raises
    ------
    InvalidParams
        If parameters violate their documented ranges.
    NumericalBlowup
        If any state variable becomes non-finite during integration.
    """
    p = params if params is not None else default_params()
    c = constants
    validate_params(p, c)

    y = (c.S_n0, c.S_s0, c.S_low0, c.S_deep0, p.D_low0)
    m_n = [_m_n(y[0], y[2], y[4], p.epsilon, c)]
    s_north, s_south = [y[0]], [y[1]]
    s_low, s_deep = [y[2]], [y[3]]
    d_low = [y[4]]
    warnings: list[str] = []
    clamped = False

    d_max = c.H - _D_MIN
    for step in range(1, int(p.N) + 1):
        y = _rk4_step(y, p.dt, p, c)
        d = min(max(y[4], _D_MIN), d_max)
        if d != y[4]:
            clamped = True
            y = y[:4] + (d,)
        if not all(math.isfinite(v) for v in y):
            raise NumericalBlowup(f"non-finite state at step {step}; reduce dt")
        s_north.append(y[0])
        s_south.append(y[1])
        s_low.append(y[2])
        s_deep.append(y[3])
        d_low.append(y[4])
        m_n.append(_m_n(y[0], y[2], y[4], p.epsilon, c))

    if clamped:
        warnings.append(f"D_low clamped to [{_D_MIN}, {d_max}] during integration")

    return RunOutput(
        M_n=m_n,
        S_north=s_north,
        S_south=s_south,
        S_low=s_low,
        S_deep=s_deep,
        T_low=[c.T_low] * (int(p.N) + 1),
        D_low=d_low,
        params=p,
        warnings=warnings,
    )


def total_salt(out: RunOutput, constants: Constants = DEFAULT_CONSTANTS) -> list[float]:
    """Total salt content sum(V_i * S_i) at each step [psu m^3].

    The virtual salt fluxes sum to zero across boxes, so this is conserved
    by the dynamics up to integration error.
    """
    c = constants
    salt = []
    for i in range(len(out.D_low)):
        v_low = c.A_low * out.D_low[i]
        v_deep = c.A_low * (c.H - out.D_low[i])
        salt.append(
            c.V_n * out.S_north[i]
            + c.V_s * out.S_south[i]
            + v_low * out.S_low[i]
            + v_deep * out.S_deep[i]
        )
    return salt
