"""Walk through the natural martingale measures of a symmetric VG model.

    python3 demos/martingale_measures.py
"""

import math

import numpy as np
from scipy import integrate

from symlevy.emm import ModelParams, solve_brownian_case, solve_discrete, solve_purejump_case
from symlevy.errors import NoNaturalEmmError

params = ModelParams.from_kurtosis("vg", mu=0.03, sigma=0.19, gamma=4.0, r=0.06)
print(f"real-world law: mu={params.mu}, sigma^2={params.sigma2:.4f}, lambda={params.shape}")

# With a Brownian component (or in discrete time) only the location moves.
for name, solve in (("brownian", solve_brownian_case), ("discrete", solve_discrete)):
    emm = solve(params)
    print(f"{name:>9}: mu~ = {emm.mu_tilde:.6f}, sigma~^2 = {emm.sigma2_tilde:.6f}, residual {emm.residual():.1e}")

# Pure jumps: the location stays put and the jumps are rescaled until e^{Y - r t}
# is a martingale.  Since mu < r the variance has to grow (0.0361 -> 0.0588).
emm = solve_purejump_case(params)
print(f"pure-jump: mu~ = {emm.mu_tilde:.6f}, sigma~^2 = {emm.sigma2_tilde:.7f}, residual {emm.residual():.1e}")
print(f"           closed form 2 lambda(1 - e^(-(r - mu)/lambda)) = {2 * 0.75 * -math.expm1(-0.03 / 0.75):.7f}")

# The share measure Q1 has density e^{y - r} f_Q(y).  Check it by quadrature.
q, q1 = emm.q_law_at(1.0), emm.q1_law_at(1.0)


def tilt(y):
    lp = q.logpdf_scalar(y)
    return math.exp(y - 0.06 + lp) if lp > -math.inf else 0.0


mass = sum(integrate.quad(tilt, a, b, limit=200)[0] for a, b in ((-np.inf, 0.03), (0.03, np.inf)))
print(f"Q1: mean {emm.mu1:.7f}, variance {emm.sigma2_1:.7f}; mass of e^(y-r) f_Q = {mass:.12f}")
for y in (-0.2, 0.1, 0.4):
    print(f"    y={y:+.1f}: tilt {tilt(y):.10f}  Q1 pdf {float(q1.pdf(y)):.10f}")

# No such measure exists once mu reaches r.
try:
    solve_purejump_case(params.with_(mu=0.06))
except NoNaturalEmmError as exc:
    print(f"mu = r: {exc}")
