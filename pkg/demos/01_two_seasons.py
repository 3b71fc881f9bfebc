"""Two seasons with Poisson claims (rates 0.3 and 1.4).

One root of G_{S_2}(s) = s^2 sits inside the unit disk. Together with the
mass identity it fixes P(M_1 = 0) and P(M_2 = 0). A closed form for two
seasons gives the same numbers without the general root finder.
"""

from seasonal_ruin import (
    bi_seasonal_closed_form,
    build_initial_system,
    build_model,
    find_unit_disk_roots,
    pmf_poisson,
    solve_initial_values,
    survival_ultimate,
)

model = build_model([pmf_poisson(0.3), pmf_poisson(1.4)])
print(f"E S_2 = {model.mean_s_n:.2f} < 2, so survival is possible")

roots = find_unit_disk_roots(model)
(alpha,) = roots.nonzero()
print(f"disk root alpha = {alpha.value.real:.10f} (residual {alpha.residual:.1e})")

init = solve_initial_values(build_initial_system(model, roots))
print("m0 =", init.m0)

table = survival_ultimate(model, u_max=10)
phi0, phi1 = bi_seasonal_closed_form(model)
print(f"phi(0) = {table.phi[0]:.10f}   closed form {phi0:.10f}")
print(f"phi(1) = {table.phi[1]:.10f}   closed form {phi1:.10f}")
for u, p in enumerate(table.phi):
    print(f"  u={u:2d}  phi={p:.6f}")
