"""Ready-made median problems in the space of rooted 4-leaf trees.

Rooted trees on four leaves are handled as unrooted trees on five leaves,
the extra leaf being named ``root``.  Each maximal orthant is then a
quadrant with two interior-edge coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .treespace import PhyloTree, TreeSpace, parse_newick

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class Preset:
    name: str
    anchors_newick: tuple
    weights: tuple
    x0_newick: str

    @property
    def anchors(self):
        return tuple(parse_newick(s) for s in self.anchors_newick)

    @property
    def x0(self):
        return parse_newick(self.x0_newick)

    @property
    def space(self):
        return TreeSpace(self.anchors[0].leaves)


def _r(x):
    return repr(float(x))


# Three trees in neighbouring quadrants of the rooted 4-leaf tree space.
# In the planar picture T1 sits at (1, 2), T2 at (2, -3/2), T3 at (-3, -1/2).
EXAMPLE7_1 = Preset(
    name="example7_1",
    anchors_newick=(
        "(root,(a,b):1,(c,d):2);",
        "(root,d,((a,b):2,c):1.5);",
        "(root,d,(a,(b,c):3):0.5);",
    ),
    weights=(1 / 3, 1 / 3, 1 / 3),
    x0_newick="(root,a,b,c,d);",
)

# Three quadrants sharing the split {x,y,z}|{L,root} (the spine).  Each
# anchor has equal spine and off-spine edge lengths.
_ALPHA = 2 * SQRT3 / (1 + 2 * SQRT3)
_GAMMA = (2 + 2 * SQRT3) / (1 + 2 * SQRT3)
EXAMPLE7_2 = Preset(
    name="example7_2",
    anchors_newick=(
        f"(root,L,((x,y):{_r(_ALPHA)},z):{_r(_ALPHA)});",
        "(root,L,((x,z):1.0,y):1.0);",
        f"(root,L,((y,z):{_r(_GAMMA)},x):{_r(_GAMMA)});",
    ),
    weights=(1 / 3, 1 / 3, 1 / 3),
    x0_newick="(root,L,x,y,z);",
)

PRESETS = {p.name: p for p in (EXAMPLE7_1, EXAMPLE7_2)}

# (off-spine length, spine length) of each EXAMPLE7_2 anchor
EXAMPLE7_2_COORDS = ((_ALPHA, _ALPHA), (1.0, 1.0), (_GAMMA, _GAMMA))
SPINE = frozenset({"x", "y", "z"})
OFF_SPINE = (frozenset({"x", "y"}), frozenset({"x", "z"}), frozenset({"y", "z"}))


def off_spine_length(tree: PhyloTree) -> float:
    """Largest off-spine interior edge length of a tree over the EXAMPLE7_2 leaves."""
    return max(tree.length_of(side) for side in OFF_SPINE)


def get_preset(name) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
