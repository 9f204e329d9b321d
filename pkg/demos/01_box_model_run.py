"""
Running the four-box overturning model
======================================

Integrates the model at its defaults, inspects the overturning series,
and sweeps the northern freshwater flux to find the collapse threshold.
"""

from amocqa import default_params, run, total_salt
from amocqa.boxmodel import Params

# A default run: 4000 monthly steps of the four-box ocean.
params = default_params()
out = run(params)

print(f"steps:           {len(out.M_n) - 1}")
print(f"initial M_n:     {out.M_n[0]:.4g} m^3/s")
print(f"final M_n:       {out.M_n[-1]:.4g} m^3/s")
print(f"final D_low:     {out.D_low[-1]:.1f} m")

# Salt is conserved to round-off; the drift is a numerical health check.
salt = total_salt(out)
drift = max(abs(s - salt[0]) / salt[0] for s in salt)
print(f"max salt drift:  {drift:.2e} (relative)")

# Sweep Fwn upward until the overturning reverses sign. The sign change
# is the model's collapse event: dense water stops forming in the north.
print("\nFwn sweep (multiples of default):")
for factor in (1, 2, 4, 5, 6, 8):
    swept = Params(
        N=params.N,
        dt=params.dt,
        Fwn=params.Fwn * factor,
        Fws=params.Fws,
        M_ek=params.M_ek,
        D_low0=params.D_low0,
        epsilon=params.epsilon,
    )
    series = run(swept).M_n
    collapsed = min(series) < 0
    print(f"  {factor:2d}x Fwn -> min M_n {min(series):12.4g}  "
          f"{'collapsed' if collapsed else 'stable'}")
