"""Exponential sums of Fourier coefficients against the predicted envelope.

Partial sums twisted by e(n theta) should stay below X^(k/2) log X for
cusp forms, uniformly in theta.  The scan tracks the normalized ratio
across cutoffs; a bounded ratio with no upward drift is the desk-scale
signature of the bound.
"""

import numpy as np

from vvaf.expsum import bound_scan, exp_sum
from vvaf.forms import delta_form, eta4_theta_eta_form

D = delta_form(2100)
print("alternating coefficient sum of the weight-12 form:")
value = exp_sum(D, 0.5, 10)
print(f"  sum over n < 10 of (-1)^n tau(n) = {value[0].real:.0f}")

thetas = [0.0, 1.0 / 3.0, 0.7071067811865475, 0.7]
cutoffs = [100, 250, 500, 1000, 1500, 2000]

for label, form in [("discriminant", D), ("eta^4 X", eta4_theta_eta_form(2100))]:
    scan = bound_scan(form, thetas, cutoffs, alpha=0.0)
    print(f"\n{label}: envelope X^{scan.target_exponent:.0f} log X, verdict {scan.verdict}")
    print("  theta      ratio at X=100   ratio at X=2000")
    for i, theta in enumerate(thetas):
        print(f"  {theta:8.4f}   {scan.ratios[i, 0]:14.4f}   {scan.ratios[i, -1]:15.4f}")
