"""Coefficient growth: the polynomial bound and its sharp dichotomy.

Cusp-form coefficients grow like n^(k/2 + alpha) where alpha measures the
polynomial growth of the representation; unitary images give alpha = 0.
The dichotomy: a representation has polynomial growth exactly when its
parabolic images have unitary spectra, and the one-parameter family below
shows the exponential alternative.
"""

import math

import numpy as np

from vvaf.forms import delta_form, eta4_theta_eta_form
from vvaf.growth import coefficient_growth_report, mean_square, supnorm_scan
from vvaf.representation import SamplerConfig, builtin, growth_exponent, parabolic_power_norms

print("empirical growth exponents of the built-in representations:")
for name in ("trivial", "theta-eta", "sym2"):
    fit = growth_exponent(builtin(name), SamplerConfig(seed=0, n_samples=200))
    print(f"  {name:10s}: {fit.classification}, alpha_emp = {fit.alpha_emp:.4f}")
fit = growth_exponent(builtin("nonpoly", a=1j))
print(f"  nonpoly(i) : {fit.classification}, rate log|rho(t^n)|/n = {fit.exp_rate:.4f}")
print(f"               (the golden ratio gives log phi = {math.log((1 + 5**0.5) / 2):.4f})")

print("\ncusp-form coefficient slopes against the k/2 + alpha targets:")
for label, form in [("eta^4 X (k=2)", eta4_theta_eta_form(2100)), ("discriminant (k=12)", delta_form(2100))]:
    report = coefficient_growth_report(form, 2000, alpha=0.0)
    print(
        f"  {label:20s}: fitted slope {report.beta_emp:.3f} "
        f"vs target {report.target:.1f} -> {report.verdict}"
    )
    ms = mean_square(form, 2000, alpha=0.0)
    print(f"  {'':20s}  mean-square slope {ms['slope']:.3f} vs target {ms['target']:.1f} -> {ms['verdict']}")

print("\nweighted sup-norm over a strip (boundedness proxy):")
scan = supnorm_scan(eta4_theta_eta_form(150), exponent=1.0)
print(
    f"  y^1 |X|: below unit height {scan['max_below_unit_height']:.4f}, "
    f"above {scan['max_above_unit_height']:.4f} -> {scan['verdict']}"
)

print("\nnorms of translation powers (the unipotent block grows like n^2):")
norms = parabolic_power_norms(builtin("sym2"), nmax=200)
print(f"  fitted log-log slope: {norms['loglog_slope']:.3f} (dimension 3 allows up to 2)")
