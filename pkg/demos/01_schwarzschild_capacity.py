"""Capacity of a Schwarzschild horizon, solved numerically and in closed form.

For g = (1 + m/2r)^4 delta the normalized p-capacity cp of the sphere r = r0
is tied to the mass by m = 2 (I_a(m/2r0) cp)^(1/a). We solve the radial
p-Laplace problem for several p and compare.
"""

from pcapmono import PExponentParams, incomplete_I, schwarzschild, solve
from pcapmono.schwarzschild import schwarzschild_u
from pcapmono.specfun import model_from_mass_radius

m = 2.0
print(f"{'p':>5} {'r0':>6} {'cp (solver)':>20} {'m recovered':>20} {'max |u - u_exact|':>18}")
for p in (1.25, 1.5, 2.0, 2.5, 2.9):
    P = PExponentParams.from_p(p)
    for r0 in (m / 2, 2 * m):
        sol = solve(schwarzschild(m, r0), P)
        k = m / (2 * r0)
        m_back = 2 * (incomplete_I(P.a, k) * sol.cp) ** (1 / P.a)
        model = model_from_mass_radius(P, m, r0)
        err = max(abs(float(sol.u(r)) - schwarzschild_u(r, model))
                  for r in (r0 * 1.5, r0 * 10, r0 * 1e3))
        print(f"{p:5.2f} {r0:6.2f} {sol.cp:20.15f} {m_back:20.15f} {err:18.2e}")

# At p = 2 everything is elementary: cp = r0 + m/2 and u = 1 - cp/(r + m/2).
sol = solve(schwarzschild(m, 1.0), PExponentParams.from_p(2.0))
print("\np = 2 horizon capacity:", sol.cp, "(expected 2)")
