"""Geometric inequalities: mass and area against the capacity.

Each report carries an oriented slack (nonnegative means satisfied). On
Schwarzschild every slack is zero up to roundoff; off the model they are
strictly positive.
"""

from pcapmono import PExponentParams, model_from_capacity, solve
from pcapmono import inequalities as ineq
from pcapmono.radial_metric import perturbed, schwarzschild


def show(title, reports):
    print(title)
    for r in reports:
        tag = "equality" if r.equality else ("ok" if r.satisfied else "VIOLATED")
        print(f"  {r.name:<28s} lhs={r.lhs:14.9f}  rhs={r.rhs:14.9f}  slack={r.slack:+.3e}  {tag}")


P = PExponentParams.from_p(2.5)
for label, metric in (("Schwarzschild horizon, m = 2", schwarzschild(2.0)),
                      ("Perturbed, A = 1, b = 0.1", perturbed(1.0, 0.1))):
    sol = solve(metric, P)
    reports = (ineq.willmore_bounds(sol) + ineq.minimal_boundary_bounds(sol)
               + ineq.horizon_inequalities(sol))
    show(label, reports)

print("\nA non-minimal boundary: the Willmore deficit picks k.")
sol = solve(schwarzschild(2.0, 2.0), P)
reports = ineq.willmore_bounds(sol)
k = reports[0].inputs["k"]
show(f"Schwarzschild, r0 = 2 (k from Willmore = {k:.12f})",
     reports + ineq.general_k_inequalities(sol, model_from_capacity(P, sol.cp, k)))
