"""Why rays are needed: the subgradient method on |x| overshoots the minimiser.

With steps 1/(k+2) + 1/(k+1) the iterates alternate sign, x^k = (-1)^k/(k+1),
so each step travels past 0 along the extended geodesic.  The proximal
variant stops at the anchor instead and decreases monotonically.
"""

from hadopt import DistPower, Euclidean, Explicit, Objective, WHOLE, cyclic_proximal_median
from hadopt import incremental_subgradient

R = Euclidean(1)
steps = Explicit(lambda k: 1 / (k + 2) + 1 / (k + 1))
obj = Objective(R, [DistPower(R.point(0.0))])
sub = incremental_subgradient(obj, WHOLE, R.point(1.0), steps, 8, keep_iterates=True)
prox = cyclic_proximal_median(R, [R.point(0.0)], None, R.point(1.0), steps, 8, keep_iterates=True)
print(f"{'k':>2} {'subgradient':>12} {'(-1)^k/(k+1)':>13} {'proximal':>9}")
for k, (x, y) in enumerate(zip(sub.iterates, prox.iterates)):
    print(f"{k:>2} {x.coords[0]:12.6f} {(-1) ** k / (k + 1):13.6f} {y.coords[0]:9.4f}")
