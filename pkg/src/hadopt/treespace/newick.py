"""Newick reading and writing for unrooted, branch-length-carrying trees.

The reader flattens any root: every edge induces a bipartition of the leaves,
and edges inducing the same bipartition (the two edges at a degree-2 root)
have their lengths summed.  Edges to leaves become pendant lengths; leaves
may omit them, interior edges may not.
"""

from __future__ import annotations

import re

from ..errors import NewickError
from .tree import PhyloTree, Split, canonical_mask

_LABEL = re.compile(r"[A-Za-z0-9_]+")
_NUMBER = re.compile(r"[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?")


class _Node:
    __slots__ = ("children", "label", "length", "offset")

    def __init__(self, offset):
        self.children = []
        self.label = None
        self.length = None
        self.offset = offset


class _Reader:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def offset(self, pos=None):
        pos = self.pos if pos is None else pos
        return len(self.text[:pos].encode("utf-8"))

    def fail(self, message, pos=None):
        raise NewickError(message, self.offset(pos))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def subtree(self):
        node = _Node(self.pos)
        if self.peek() == "(":
            self.pos += 1
            node.children.append(self.subtree())
            while self.peek() == ",":
                self.pos += 1
                node.children.append(self.subtree())
            if self.peek() != ")":
                self.fail("expected ',' or ')'")
            self.pos += 1
            self.skip()
            m = _LABEL.match(self.text, self.pos)
            if m:
                self.pos = m.end()
        else:
            self.skip()
            m = _LABEL.match(self.text, self.pos)
            if not m:
                self.fail("expected a leaf label or '('")
            node.label = m.group()
            self.pos = m.end()
        if self.peek() == ":":
            self.pos += 1
            self.skip()
            m = _NUMBER.match(self.text, self.pos)
            if not m:
                self.fail("expected a branch length after ':'")
            node.length = float(m.group())
            if node.length < 0:
                self.fail("negative branch length", m.start())
            self.pos = m.end()
        return node


def parse_newick(text: str) -> PhyloTree:
    """Parse one Newick tree terminated by ``;`` into a canonical :class:`PhyloTree`.

    Raises
    ------
    NewickError
        On a syntax error (with its byte offset), a duplicate leaf label, a
        missing interior branch length, or fewer than three leaves.
    """
    r = _Reader(text)
    root = r.subtree()
    if r.peek() != ";":
        r.fail("expected ';'")
    r.pos += 1
    if r.peek():
        r.fail("unexpected text after ';'")

    leaves = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.label is not None and not node.children:
            leaves.append((node.label, node.offset))
        stack.extend(node.children)
    names = [name for name, _ in leaves]
    seen = set()
    for name, off in leaves:
        if name in seen:
            raise NewickError(f"duplicate leaf label {name!r}", r.offset(off))
        seen.add(name)
    if len(names) < 3:
        raise NewickError("a tree needs at least three leaves")
    names.sort()
    n = len(names)
    index = {name: i for i, name in enumerate(names)}

    interior = {}
    pendants = [0.0] * n
    any_pendant = False

    def walk(node, is_root):
        nonlocal any_pendant
        if not node.children:
            mask = 1 << index[node.label]
        else:
            mask = 0
            for child in node.children:
                mask |= walk(child, False)
        if is_root:
            return mask
        if node.length is None:
            if node.children:
                raise NewickError("interior edge without a branch length", r.offset(node.offset))
            return mask
        side = canonical_mask(mask, n)
        size = bin(side).count("1")
        if size == 1 or size == n - 1:
            leaf = (side if size == 1 else ((1 << n) - 1) ^ side).bit_length() - 1
            pendants[leaf] += node.length
            any_pendant = True
        elif 2 <= size <= n - 2:
            interior[side] = interior.get(side, 0.0) + node.length
        return mask

    walk(root, True)
    splits = tuple(Split(m, l) for m, l in interior.items())
    try:
        return PhyloTree(tuple(names), splits, tuple(pendants) if any_pendant else None)
    except ValueError as exc:
        raise NewickError(str(exc)) from exc


def _fmt(x):
    return repr(float(x))


def serialize_newick(tree: PhyloTree) -> str:
    """Write ``tree`` rooted at the node adjacent to its first leaf.

    ``parse_newick(serialize_newick(t)) == t`` for every canonical tree.
    """
    n = tree.n_leaves
    masks = sorted(tree.edge_lengths, key=lambda m: (bin(m).count("1"), m))
    # parent of each split/leaf is the smallest split strictly containing it
    children = {0: []}
    for m in masks:
        children[m] = []

    def parent_of(mask):
        for cand in masks:
            if cand != mask and cand & mask == mask:
                return cand
        return 0

    for m in masks:
        children[parent_of(m)].append(("split", m))
    for i in range(1, n):
        children[parent_of(1 << i)].append(("leaf", i))

    def low_bit(item):
        kind, v = item
        return v if kind == "leaf" else (v & -v).bit_length() - 1

    def render(item):
        kind, v = item
        if kind == "leaf":
            s = tree.leaves[v]
            if tree.pendants is not None:
                s += ":" + _fmt(tree.pendants[v])
            return s
        inner = ",".join(render(c) for c in sorted(children[v], key=low_bit))
        return f"({inner}):{_fmt(tree.edge_lengths[v])}"

    first = tree.leaves[0]
    if tree.pendants is not None:
        first += ":" + _fmt(tree.pendants[0])
    parts = [first] + [render(c) for c in sorted(children[0], key=low_bit)]
    return "(" + ",".join(parts) + ");"


def read_newick_file(path):
    """Read every ``;``-terminated tree from a file (blank lines and ``#`` comments ignored)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    trees = []
    buf = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        buf.append(stripped)
        if stripped.endswith(";"):
            trees.append(parse_newick(" ".join(buf)))
            buf = []
    if buf:
        raise NewickError("trailing tree without ';'")
    return trees
