"""Leaf-labelled unrooted trees as sets of weighted splits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from ..errors import DomainError


@dataclass(frozen=True, order=True)
class Split:
    """Bipartition of the leaf set.

    ``mask`` has bit ``i`` set when leaf ``i`` (in the tree's sorted leaf
    order) is on the canonical side.  The canonical side never contains leaf
    0, so two splits over the same leaf set compare equal exactly when they
    describe the same bipartition.
    """
    mask: int
    length: float = 0.0

    def side(self, leaves):
        return frozenset(leaves[i] for i in range(len(leaves)) if self.mask >> i & 1)


def canonical_mask(mask, n):
    full = (1 << n) - 1
    mask &= full
    return full ^ mask if mask & 1 else mask


def split_from_labels(side, leaves, length=0.0):
    """Build a :class:`Split` from one side of the bipartition given by labels."""
    index = {name: i for i, name in enumerate(leaves)}
    mask = 0
    for name in side:
        mask |= 1 << index[name]
    return Split(canonical_mask(mask, len(leaves)), float(length))


def masks_compatible(m1, m2):
    # canonical sides both omit leaf 0, so the two complements always meet
    common = m1 & m2
    return common == 0 or common == m1 or common == m2


def compatible(s1: Split, s2: Split) -> bool:
    """Whether two splits can coexist in one tree."""
    return masks_compatible(s1.mask, s2.mask)


def _popcount(m):
    return bin(m).count("1")


@dataclass(frozen=True)
class PhyloTree:
    """Unrooted tree: sorted leaf labels, interior splits and optional pendant lengths.

    Zero-length splits are dropped, so two trees that differ only by
    degenerate edges compare equal.
    """
    leaves: tuple
    splits: tuple = ()
    pendants: tuple | None = None

    def __post_init__(self):
        leaves = tuple(self.leaves)
        if len(set(leaves)) != len(leaves):
            raise DomainError("duplicate leaf label")
        if len(leaves) < 3:
            raise DomainError("a tree needs at least three leaves")
        order = sorted(range(len(leaves)), key=lambda i: leaves[i])
        n = len(leaves)
        if list(order) != list(range(n)):
            remap = {old: new for new, old in enumerate(order)}
            splits = []
            for s in self.splits:
                m = 0
                for i in range(n):
                    if s.mask >> i & 1:
                        m |= 1 << remap[i]
                splits.append(Split(m, s.length))
            pend = None if self.pendants is None else tuple(self.pendants[i] for i in order)
            leaves = tuple(leaves[i] for i in order)
        else:
            splits = list(self.splits)
            pend = self.pendants
        merged = {}
        for s in splits:
            if not s.length >= 0 or math.isinf(s.length):
                raise DomainError("split lengths must be finite and nonnegative")
            m = canonical_mask(s.mask, n)
            if _popcount(m) < 2 or _popcount(m) > n - 2:
                raise DomainError(f"split mask {s.mask:#x} is not an interior split")
            if m in merged:
                raise DomainError("split listed twice")
            merged[m] = float(s.length)
        kept = tuple(Split(m, l) for m, l in sorted(merged.items()) if l > 0.0)
        for i, a in enumerate(kept):
            for b in kept[i + 1:]:
                if not compatible(a, b):
                    raise DomainError("tree contains incompatible splits")
        if pend is not None:
            pend = tuple(float(p) for p in pend)
            if len(pend) != n or any(not p >= 0 or math.isinf(p) for p in pend):
                raise DomainError("pendant lengths must be one nonnegative value per leaf")
        object.__setattr__(self, "leaves", leaves)
        object.__setattr__(self, "splits", kept)
        object.__setattr__(self, "pendants", pend)

    @classmethod
    def from_sides(cls, leaves, sides, pendants=None):
        """Build from ``{iterable_of_labels: length}`` describing one side of each split."""
        leaves = tuple(sorted(leaves))
        splits = [split_from_labels(side, leaves, length) for side, length in sides.items()]
        if isinstance(pendants, dict):
            pendants = tuple(float(pendants[name]) for name in leaves)
        return cls(leaves, tuple(splits), pendants)

    @classmethod
    def star(cls, leaves):
        return cls(tuple(sorted(leaves)))

    @property
    def n_leaves(self):
        return len(self.leaves)

    @cached_property
    def edge_lengths(self):
        return {s.mask: s.length for s in self.splits}

    def length_of(self, side):
        """Length of the split with the given side (0 when absent)."""
        return self.edge_lengths.get(split_from_labels(side, self.leaves).mask, 0.0)

    def same_leaves(self, other):
        return self.leaves == other.leaves
