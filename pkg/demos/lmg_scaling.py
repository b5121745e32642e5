"""Average eigenstate entanglement of the LMG model and its finite-size trend.

Builds the parity blocks, checks the isotropic case against Dicke states,
then fits ``S/S_max = a + b / S_max`` with the intercept held fixed and
scans the intercept. Sizes are kept small so the script runs in seconds.
At these sizes some parameter sets have not yet reached the regime where
the average decreases with N; raise SIZES to see the slower large-N trend.

    python3 demos/lmg_scaling.py
"""
import numpy as np

from spinlab.analysis import (
    dicke_average,
    fixed_intercept_fit,
    intercept_grid,
    intercept_scan,
    lmg_average,
    scaling_points,
)
from spinlab.lmg import LmgParams, build_parity_block, isotropic_spectrum, solve_sector

SIZES = [64, 128, 256, 512]

block = build_parity_block(LmgParams(5, -3, 1), 8, "positive")
print("positive block for N=8: m =", 4 - block.index_map)
print("  diag   ", np.round(block.diag, 4))
print("  offdiag", np.round(block.offdiag, 4))

# isotropic couplings: the Dicke states are the eigenbasis
params = LmgParams(1, 1, 1)
_, eig = solve_sector(params, 64, "positive")
closed = np.sort(isotropic_spectrum(1, 1, 64)[build_parity_block(params, 64, "positive").index_map])
print("\nisotropic N=64 max |E - E_closed|:", np.max(np.abs(eig.values - closed)))
print("sector averages equal:", lmg_average(params, 64, 0.5).avg_ee, dicke_average(64, 0.5, "positive").avg_ee)

grid = intercept_grid(0.48, 0.52, 0.001)
for triple in [(0.5, 1 / 3, 1), (2, 0.5, 1), (5, -3, 1), (5, 3, 1)]:
    samples = [lmg_average(LmgParams(*triple), n, 0.5) for n in SIZES]
    x, y = scaling_points(samples)
    fit = fixed_intercept_fit(x, y, 0.5)
    a, scores = intercept_scan(x, y, grid)
    print("\n({:g}, {:g}, {:g})".format(*triple))
    print("  normalized averages:", " ".join(f"{v:.5f}" for v in y))
    print(f"  a=0.5 fit: b={fit.slope_b:.4f}  1-R^2={fit.one_minus_r2:.3e}")
    print(f"  best intercept on the scan: {a[np.argmin(scores)]:.3f}")
