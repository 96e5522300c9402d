"""Random graphs, power-law tails and firm-size concentration."""
import numpy as np

from econnet import randnet

ba = randnet.barabasi_albert(2000, 2, seed=1)
er = randnet.erdos_renyi(2000, 4 / 1999, seed=1)
for name, g in (("preferential attachment", ba), ("Erdos-Renyi", er)):
    dist = randnet.degree_distribution(g)
    print(f"{name}: max degree {np.flatnonzero(dist)[-1]}")

x = randnet.pareto_sample(1.0, 1.5, seed=3, n=100_000)
fit = randnet.empirical_ccdf_loglog(x, tail_fraction=0.05)
print(f"Pareto(1.5) tail slope {fit.slope:.3f}, R^2 {fit.r_squared:.3f}")

for alpha in (1.059, 1.32, 2.0):
    h = randnet.herfindahl_median_mc("pareto", 10**6, 20, 2024, alpha=alpha)
    print(f"alpha={alpha}: median Herfindahl over 20 draws of a million firms {h:.4f}")
