"""Three anchors in three quadrants sharing one axis (the spine).

The median sits on the spine.  The incremental method finds it, and the
off-spine edge lengths of its iterates shrink to zero.
"""

from hadopt import EXAMPLE7_2, Harmonic, incremental_median
from hadopt.presets import EXAMPLE7_2_COORDS, off_spine_length
from hadopt.reference import spine_fopt
from hadopt.treespace import serialize_newick

P = EXAMPLE7_2
y_opt, f_opt = spine_fopt(EXAMPLE7_2_COORDS)
print(f"spine height of the median {y_opt:.8f}, f_opt {f_opt:.10f}")

tr = incremental_median(P.space, P.anchors, None, P.x0, 10000, schedule=Harmonic(1.0), f_opt=f_opt,
                        keep_iterates=True)
for k in (10, 100, 1000, 10000):
    x = tr.iterates[k]
    print(f"k={k:>5}  gap {tr.rows[k][3]:.3e}  off-spine {off_spine_length(x):.3e}  "
          f"spine {x.length_of({'x', 'y', 'z'}):.6f}")
print("final:", serialize_newick(tr.final))
