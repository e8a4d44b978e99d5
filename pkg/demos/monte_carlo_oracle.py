"""Check the exact VG and NIG prices against seeded Monte Carlo.

Results are bit-identical for a given seed whatever the worker count.

    python3 demos/monte_carlo_oracle.py
"""

from symlevy.montecarlo import McConfig, martingale_check, mc_price
from symlevy.pricing import OptionContract, price_black_scholes, price_nig_exact, price_vg_exact
from symlevy.tables import table_params

config = McConfig(n_paths=2_000_000, seed=1, workers=4)

for tid, pricer in ((1, price_vg_exact), (2, price_nig_exact)):
    params = table_params(tid)
    print(f"\n{params.model.value.upper()}  (martingale E[e^(Y_1 - r)] by MC: "
          f"{martingale_check(params, 1.0, config).value:.5f})")
    print(f"{'K':>5} {'T':>5} {'BS':>8} {'exact':>8} {'MC':>8} {'SE':>7} {'z':>6}")
    for k in (8.0, 10.0, 12.0):
        for t in (0.25, 1.0):
            c = OptionContract(10.0, k, t)
            exact = pricer(c, params).price
            est = mc_price(c, params, config)
            bs = price_black_scholes(c, params.r, params.sigma2).price
            print(f"{k:>5.1f} {t:>5.2f} {bs:>8.5f} {exact:>8.5f} {est.value:>8.5f} {est.std_error:>7.5f} "
                  f"{est.z_score(exact):>6.2f}")
