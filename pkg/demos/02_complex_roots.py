"""Three seasons whose disk roots form a complex-conjugate pair.

The pair contributes the real and imaginary parts of a single equation, so
the initial system stays real.
"""

from seasonal_ruin import build_initial_system, build_model, find_unit_disk_roots, pmf_poisson, solve_initial_values, survival_ultimate

model = build_model([pmf_poisson(1 / 2), pmf_poisson(2 / 3), pmf_poisson(4 / 5)])
roots = find_unit_disk_roots(model)
for r in roots:
    print(f"alpha = {r.value:.6f}  multiplicity {r.multiplicity}")

system = build_initial_system(model, roots)
for tag, row in zip(system.row_provenance, system.matrix):
    print(f"{tag.describe():45s} {row}")
init = solve_initial_values(system)
print("m0 =", init.m0.round(6), f"(cond {init.condition:.1f})")

table = survival_ultimate(model, u_max=5)
print("phi(0..5) =", table.phi.round(6))
