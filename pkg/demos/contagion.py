"""Clearing payments and equity cross-holding cascades."""
import numpy as np

from econnet import finance

# two banks owing each other one unit with no outside cash
Pi = np.array([[0.0, 1.0], [1.0, 0.0]])
st = finance.solve_clearing(Pi, [0.0, 0.0], [1.0, 1.0], "both")
print("least / greatest clearing vectors:", st.bracket[0], st.bracket[1])
print("certificate:", finance.uniqueness_certificate(Pi, [0.0, 0.0]).kind)

# giving bank 0 some outside cash restores uniqueness
cert = finance.uniqueness_certificate(Pi, [0.5, 0.0])
print("with cash at bank 0:", cert.kind, finance.solve_clearing(Pi, [0.5, 0.0], [1.0, 1.0]).p)

# cross-holdings: halve bank 0's assets and watch failures spread
C = np.array([[0.0, 0.4], [0.4, 0.0]])
for theta in (0.85, 0.95):
    ch = finance.CrossHoldings(C, [0.5, 1.0], beta=1.0, theta=theta, e_ref=[1.0, 1.0])
    out = finance.cascade(ch)
    print(f"theta={theta}: failures per wave {out.waves}, failed {out.failed}")
