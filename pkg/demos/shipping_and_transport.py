"""Shortest paths, min-cost flow and optimal transport on small networks."""
import numpy as np

from econnet import flows

# shipping network A..G with destination G
edges = [(0, 1, 1), (0, 2, 5), (0, 3, 3), (1, 3, 9), (1, 4, 6), (2, 5, 2),
         (3, 5, 4), (3, 6, 8), (4, 6, 4), (5, 6, 1)]
net = flows.FlowNetwork(7, edges, destination=6, labels=list("ABCDEFG"))
q, k = flows.min_cost_to_go(net)
print("cost-to-go:", dict(zip("ABCDEFG", q.tolist())), f"({k} Bellman iterations)")

# ten units from node 1 to node 4, then cap edge (1, 2) at five
mcf = [(0, 1, 1), (0, 3, 4), (1, 2, 1), (2, 3, 1)]
kw = dict(supply=[10, 0, 0, 0], demand=[0, 0, 0, 10])
print("flow:", flows.min_cost_flow(flows.FlowNetwork(4, mcf, **kw)).q)
print("capped flow:", flows.min_cost_flow(flows.FlowNetwork(4, mcf, capacity={(0, 1): 5}, **kw)).q)

# assignment problem as optimal transport with uniform marginals
g = np.random.Generator(np.random.Philox(7))
c = g.random((4, 4))
plan, pot = flows.solve_ot(np.full(4, 0.25), np.full(4, 0.25), c)
print("assignment:", np.argmax(plan.pi, axis=1), "cost", round(plan.cost, 6))
print("dual value:", round(pot.value(np.full(4, 0.25), np.full(4, 0.25)), 6))
