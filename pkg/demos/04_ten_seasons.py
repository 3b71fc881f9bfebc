"""Ten seasons with Poisson rates k/(k+1): finite and ultimate survival.

Prints the (T, u) grid with three-decimal rounding next to the ultimate
probabilities, then the same grid's consistency diagnostics.
"""

import time

from seasonal_ruin import build_model, consistency_check, round_display, pmf_poisson, survival_ultimate

U = [0, 1, 2, 3, 4, 5, 10, 15]
T = [1, 2, 3, 4, 5, 10, 15]

model = build_model([pmf_poisson(k / (k + 1)) for k in range(1, 11)])
start = time.perf_counter()
table = survival_ultimate(model, u_max=max(U), t_values=T)
elapsed = time.perf_counter() - start

print("T   " + "".join(f"u={u:<15d}" for u in U))
for t in T:
    print(f"{t:<4d}" + "".join(f"{round_display(table.finite[u, t]):<17s}" for u in U))
print("inf " + "".join(f"{round_display(table.phi[u]):<17s}" for u in U))

report = consistency_check(model, table)
print(f"\nroots in disk: {len(table.roots)}, m0^(1) = {table.initial.m0[0]:.6f}")
print(f"recursion defect {report.max_recursion_defect:.1e}, "
      f"mass identity defect {report.mass_identity_defect:.1e}, {elapsed:.2f} s")
