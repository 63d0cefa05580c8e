"""Median of three trees in neighbouring quadrants of rooted 4-leaf tree space.

Runs the incremental method with the theory step and with the harmonic step,
then the stochastic method over a few seeds, and prints the gap at a handful
of iterations next to the worst-case bound.
"""

import numpy as np

from hadopt import EXAMPLE7_1, ExtensionPolicy, Harmonic, incremental_median, stochastic_median
from hadopt.reference import example7_1_fopt
from hadopt.treespace import serialize_newick

P = EXAMPLE7_1
f_opt = example7_1_fopt()
print(f"f_opt = {f_opt:.12f}")

theory = incremental_median(P.space, P.anchors, None, P.x0, 10000, f_opt=f_opt)
harmonic = incremental_median(P.space, P.anchors, None, P.x0, 10000, schedule=Harmonic(1.0), f_opt=f_opt)
print(f"{'k':>6} {'gap (theory)':>14} {'bound':>10} {'gap (1/(k+1))':>14}")
for k in (2, 10, 100, 1000, 10000):
    print(f"{k:>6} {theory.rows[k][3]:14.3e} {theory.rows[k][4]:10.3f} {harmonic.rows[k][3]:14.3e}")
print("best tree:", serialize_newick(harmonic.best))

gaps = []
for seed in range(5):
    tr = stochastic_median(P.space, P.anchors, None, P.x0, 2000, seed, f_opt=f_opt,
                           policy=ExtensionPolicy.CLAMP)
    gaps.append(tr.rows[-1][3])
print(f"stochastic, 2000 iterations, 5 seeds: mean gap {np.mean(gaps):.3e}")
