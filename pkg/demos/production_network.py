"""Input-output multipliers and how they relate to Katz centrality."""
import numpy as np

from econnet import centrality, production, spectral

Z = np.array([[10.0, 30.0, 5.0], [20.0, 5.0, 25.0], [5.0, 10.0, 15.0]])
d = np.array([55.0, 50.0, 70.0])
table = production.IOTable(Z, Z.sum(axis=1) + d, d, sectors=("agri", "manuf", "serv"))
coef = production.io_coefficients(table)
A = coef.A
print("r(A) =", round(spectral.spectral_radius(A), 6))
print("equilibrium output:", production.equilibrium_output(A, d), "vs table", table.x)

mult = production.output_multipliers(A)
print("output multipliers:", np.round(mult, 4))
print("same as authority Katz:", np.allclose(mult, centrality.katz_centrality(A, 1.0, "authority").values))

# a demand shock propagating through the network, round by round
rounds = production.shock_rounds(A, np.array([1.0, 0.0, 0.0]), 6)
print("cumulative response:", np.round(np.cumsum(rounds, axis=0)[-1], 4))
