"""Geometric median of random points in the hyperbolic plane.

Compares the incremental and stochastic methods and the proximal variant
by the best objective value each reaches.
"""

import numpy as np

from hadopt import Hyperbolic, HyperbolicPoint, cyclic_proximal_median, incremental_median, stochastic_median

H = Hyperbolic()
rng = np.random.default_rng(3)
anchors = [HyperbolicPoint(float(r), float(a)) for r, a in zip(rng.uniform(0, 3, 7), rng.uniform(-np.pi, np.pi, 7))]
x0 = H.basepoint
runs = {
    "incremental": incremental_median(H, anchors, None, x0, 3000),
    "stochastic": stochastic_median(H, anchors, None, x0, 3000, seed=0),
    "proximal": cyclic_proximal_median(H, anchors, None, x0, None, 3000),
}
for name, tr in runs.items():
    b = tr.best
    print(f"{name:>11}: f_best {tr.rows[-1][2]:.10f} at radius {b.radius:.6f}, angle {b.angle:.6f}")
