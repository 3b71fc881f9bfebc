"""Bernoulli-type seasons where -4/11 is a double root.

The repeated root supplies one equation from the polynomial and one from its
derivative. Survival jumps to 1 once u >= 1 because at most one unit of claim
arrives per step.
"""

import numpy as np

from seasonal_ruin import build_initial_system, build_model, find_unit_disk_roots, pmf_from_table, solve_initial_values, survival_ultimate

model = build_model([pmf_from_table([0.8, 0.2]), pmf_from_table([0.2, 0.8]), pmf_from_table([0.8, 0.2])])
roots = find_unit_disk_roots(model)
print(roots.roots)

system = build_initial_system(model, roots)
np.set_printoptions(precision=4, suppress=True)
print("matrix:\n", system.matrix, "\nrhs:", system.rhs)
print("m0 =", solve_initial_values(system).m0)
print("phi(0..4) =", survival_ultimate(model, u_max=4).phi)
