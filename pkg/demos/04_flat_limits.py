"""The k = 0 end of the family: Euclidean space.

With m = 0 the coefficients degenerate to two known monotone quantities. On
flat space both are identically zero, and the general coefficients approach
them continuously as k -> 0.
"""

from pcapmono import CoefficientChoice, PExponentParams, euclidean, solve
from pcapmono import coefficients, coefficients_k0, model_from_capacity, monotonicity_scan, preset_choice

for p in (1.5, 2.0, 2.5):
    P = PExponentParams.from_p(p)
    sol = solve(euclidean(1.0), P)
    model = model_from_capacity(P, sol.cp, 0.0)
    line = [f"p={p}: cp = {sol.cp:.12f} (a r0^a = {P.a:.12f})"]
    for name in ("AMMO", "HMT"):
        rep = monotonicity_scan(sol, preset_choice(name, model))
        line.append(f"{name} max|F| = {abs(rep.F).max():.1e}")
    print("   ".join(line))

P = PExponentParams.from_p(2.0)
flat = model_from_capacity(P, 1.0, 0.0)
print("\nalpha, beta, gamma at t = 5 with C1 = -0.4, C2 = 0.7:")
print(f"  k = 0      {coefficients_k0(flat, -0.4, 0.7, 5.0)}")
for k in (1e-2, 1e-4, 1e-6):
    near = model_from_capacity(P, 1.0, k)
    print(f"  k = {k:<7g}{coefficients(CoefficientChoice(near, -0.4, 0.7), 5.0)}")
