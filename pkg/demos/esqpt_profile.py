"""Classical zones, density of states and entanglement dips.

For each parameter set the classical analysis predicts the energies of
excited-state transitions; the quantum spectrum shows a peak in the density
of states and a dip in eigenstate entanglement at the same scaled energy.

    python3 demos/esqpt_profile.py [N]
"""
import sys

import numpy as np

from spinlab.analysis import dos_histogram, ee_distribution, entanglement_dips
from spinlab.classical import classify_zone
from spinlab.lmg import LmgParams

n = int(sys.argv[1]) if len(sys.argv) > 1 else 1024

for triple in [(0.5, 1 / 3, 1), (2, 0.5, 1), (5, -3, 1), (5, 3, 1)]:
    params = LmgParams(*triple)
    zone = classify_zone(params)
    print("({:g}, {:g}, {:g})  zone {}{}".format(*triple, zone.zone, zone.sub_case or ""))
    for fp in zone.fixed_points:
        if fp.exists:
            print(f"    {fp.label:7s} h0={fp.h0:+.4f}  {'stable' if fp.stable else 'unstable'}")
    prof = ee_distribution(params, n)
    hist = dos_histogram(prof.scaled_energies, 101)
    lo, hi = hist.mode_interval()
    dips = entanglement_dips(prof)
    print(f"  predicted transition energies: {zone.esqpt_energies}")
    print(f"  densest bin: [{lo:.3f}, {hi:.3f}]")
    for e in zone.esqpt_energies:
        near = dips[np.argmin(np.abs(dips - e))] if dips.size else float("nan")
        print(f"  nearest entanglement dip to {e:+.3f}: {near:+.3f}")
    print()
