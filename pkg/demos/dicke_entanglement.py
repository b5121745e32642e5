"""Entanglement of Dicke states and the Dicke-basis average.

Walks from the Schmidt weights of a single Dicke state to the basis
average at large N, comparing the exact sums with the large-N expansion
and with the two analytic bounds on the average.

    python3 demos/dicke_entanglement.py
"""
import numpy as np

from spinlab.analysis import (
    dicke_average,
    dicke_average_lower_bound,
    dicke_average_upper_bound,
)
from spinlab.entangle import dicke_ee_approx, dicke_ee_exact, one_qubit_entropy_closed_form
from spinlab.symspace import Bipartition, DickeIndex, dicke_schmidt_coefficients

# Schmidt weights of |N=4, k=2> across a 2:2 cut are hypergeometric
lam = dicke_schmidt_coefficients(DickeIndex(4, 2), Bipartition(2, 2)).coefficients
print("Schmidt weights of |4,2>:", np.round(lam, 6))
print("entropy [bits]:", dicke_ee_exact(DickeIndex(4, 2), Bipartition(2, 2)))

# exact sum vs. large-N expansion for the half-filled state
print("\nN      exact         expansion     difference")
for n in (100, 1_000, 10_000):
    idx, cut = DickeIndex(n, n // 2), Bipartition.half(n)
    exact, approx = dicke_ee_exact(idx, cut), dicke_ee_approx(idx, cut)
    print(f"{n:<6d} {exact:.9f}  {approx:.9f}  {exact - approx:.2e}")

# average over the whole Dicke basis sits between the two bounds
print("\nN       p     lower    average  upper    normalized")
for n in (1_000, 10_000, 40_000):
    for p in (0.25, 0.5):
        s = dicke_average(n, p)
        lo, hi = dicke_average_lower_bound(n, p), dicke_average_upper_bound(n, p)
        print(f"{n:<7d} {p:<5} {lo:.4f}   {s.avg_ee:.4f}   {hi:.4f}   {s.normalized:.5f}")

# a single qubit: the basis average tends to log2(e)/2
n = 10_000
avg = np.mean([one_qubit_entropy_closed_form(DickeIndex(n, k)) for k in range(n + 1)])
print(f"\none-qubit average at N={n}: {avg:.7f}  (log2(e)/2 = {np.log2(np.e) / 2:.7f})")
