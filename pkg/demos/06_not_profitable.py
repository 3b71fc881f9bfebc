"""Models without the net profit condition.

Random claims with E S_N >= N ruin almost surely. Point-mass claims summing
to N give a deterministic walk that survives exactly when u clears its
lowest point.
"""

from seasonal_ruin import build_model, classify, pmf_poisson, point_mass, survival_ultimate

cases = {
    "Poisson(1.2) x 2": [pmf_poisson(1.2), pmf_poisson(1.2)],
    "Poisson(1) x 2": [pmf_poisson(1.0), pmf_poisson(1.0)],
    "deterministic 0, 3, 0": [point_mass(0), point_mass(3), point_mass(0)],
}
for name, claims in cases.items():
    model = build_model(claims)
    cls = classify(model)
    phi = survival_ultimate(model, u_max=4).phi
    extra = f" t*={cls.t_star} min drift={cls.min_drift}" if cls.t_star else ""
    print(f"{name:24s} {cls.tag.value:22s} phi(0..4)={phi}{extra}")
