"""Check one finite-time value by simulation.

Each path draws from its own block of a counter-based stream, so the
estimate depends only on the seed and the path count.
"""

from seasonal_ruin import build_model, mc_survival, pmf_poisson, survival_finite

model = build_model([pmf_poisson(k / (k + 1)) for k in range(1, 11)])
exact = survival_finite(model, u_max=0, t_max=10)[0, 10]
print(f"DP value phi(0, 10) = {exact:.6f}")
for seed in range(5):
    est = mc_survival(model, u=0, t=10, n_paths=200_000, seed=seed)
    verdict = "covers" if est.covers(exact) else "misses"
    print(f"seed {seed}: {est.point:.5f} +/- {est.half_width_95:.5f}  {verdict}")
