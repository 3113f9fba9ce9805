"""Associated digraph, strongly connected components, and the block lower
triangular (Frobenius) normal form.

The digraph of a matrix has an edge (i, j) exactly when ``a_ij != 0`` for
``j != i``; zero means structurally zero, no tolerance is involved.  SCCs are
computed with an iterative single-pass Tarjan using an explicit stack, so
recursion depth is not a limit.  Tarjan emits components in reverse
topological order of the condensation: every condensation edge points from a
later component to an earlier one, which is exactly the order the normal
form needs.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .matrix import as_matrix

__all__ = [
    "Digraph",
    "FrobeniusForm",
    "associated_digraph",
    "support_digraph",
    "strongly_connected_components",
    "is_strongly_connected",
    "frobenius_normal_form",
    "frobenius_form_of",
    "permute",
]


@dataclass(frozen=True)
class Digraph:
    """Vertices 0..n-1 with sorted out-neighbour tuples, no self-loops."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def edges(self):
        for i, adj in enumerate(self.adjacency):
            for j in adj:
                yield (i, j)


def associated_digraph(a) -> Digraph:
    """Digraph on the structural nonzero pattern of a square matrix."""
    m = as_matrix(a)
    return support_digraph(m != 0)


def support_digraph(mask) -> Digraph:
    """Digraph from a boolean support mask (used by the exact-rational path)."""
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
        raise DimensionMismatch(f"expected a square mask, got shape {mask.shape}")
    n = mask.shape[0]
    off = mask.copy()
    np.fill_diagonal(off, False)
    adjacency = tuple(tuple(int(j) for j in np.nonzero(off[i])[0]) for i in range(n))
    return Digraph(n=n, adjacency=adjacency)


def strongly_connected_components(g: Digraph) -> tuple[tuple[int, ...], ...]:
    """SCCs in reverse topological order of the condensation.

    Members of each component are sorted ascending.  Iterative Tarjan: the
    work stack holds (vertex, next successor position) pairs and plays the
    role of the call stack.
    """
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[tuple[int, ...]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work[-1]
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            adj = g.adjacency[v]
            for k in range(pos, len(adj)):
                w = adj[k]
                if index[w] == -1:
                    work[-1] = (v, k + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    members.append(w)
                    if w == v:
                        break
                components.append(tuple(sorted(members)))
    return tuple(components)


def is_strongly_connected(g: Digraph) -> bool:
    return len(strongly_connected_components(g)) == 1


@dataclass(frozen=True)
class FrobeniusForm:
    """Permutation to block lower triangular form.

    permutation
        Maps old index to new index.
    blocks
        Contiguous runs of new indices, one per irreducible diagonal block.
        The first ``independent_count`` blocks have no entries outside
        themselves in their rows.
    independent_flags
        True for independent blocks; they always come first.
    """

    permutation: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    independent_flags: tuple[bool, ...]

    @property
    def n(self) -> int:
        return len(self.permutation)

    @property
    def independent_count(self) -> int:
        return sum(self.independent_flags)

    @property
    def dependent_count(self) -> int:
        return len(self.blocks) - self.independent_count

    def inverse_permutation(self) -> tuple[int, ...]:
        inv = [0] * len(self.permutation)
        for old, new in enumerate(self.permutation):
            inv[new] = old
        return tuple(inv)

    def original_members(self, block_id: int) -> tuple[int, ...]:
        """Original row indices of a block, ascending."""
        inv = self.inverse_permutation()
        return tuple(sorted(inv[x] for x in self.blocks[block_id]))


def frobenius_form_of(g: Digraph) -> FrobeniusForm:
    """Normal form from a digraph.

    Independent blocks (no outgoing condensation edges) come first, ordered
    by smallest original vertex; dependent blocks follow in an order where
    every block only references earlier ones, ties again broken by smallest
    original vertex.
    """
    comps = strongly_connected_components(g)
    m = len(comps)
    comp_of = [0] * g.n
    for c, members in enumerate(comps):
        for v in members:
            comp_of[v] = c

    out_sets: list[set[int]] = [set() for _ in range(m)]
    for i, j in g.edges():
        ci, cj = comp_of[i], comp_of[j]
        if ci != cj:
            out_sets[ci].add(cj)

    independent = sorted(
        (c for c in range(m) if not out_sets[c]), key=lambda c: comps[c][0]
    )

    preds: list[list[int]] = [[] for _ in range(m)]
    for c in range(m):
        for d in out_sets[c]:
            preds[d].append(c)

    remaining = [len(out_sets[c]) for c in range(m)]
    ready: list[tuple[int, int]] = []
    dependent_order: list[int] = []

    def release(c: int) -> None:
        for p in preds[c]:
            remaining[p] -= 1
            if remaining[p] == 0:
                heapq.heappush(ready, (comps[p][0], p))

    for c in independent:
        release(c)
    while ready:
        _, c = heapq.heappop(ready)
        dependent_order.append(c)
        release(c)

    order = independent + dependent_order
    permutation = [0] * g.n
    blocks = []
    flags = []
    pos = 0
    for c in order:
        members = comps[c]
        start = pos
        for v in members:
            permutation[v] = pos
            pos += 1
        blocks.append(tuple(range(start, pos)))
        flags.append(not out_sets[c])
    return FrobeniusForm(
        permutation=tuple(permutation),
        blocks=tuple(blocks),
        independent_flags=tuple(flags),
    )


def frobenius_normal_form(a) -> FrobeniusForm:
    return frobenius_form_of(associated_digraph(a))


def permute(a, form: FrobeniusForm) -> np.ndarray:
    """Apply the permutation: B[p(i), p(j)] = A[i, j]."""
    m = as_matrix(a)
    if m.shape[0] != form.n:
        raise DimensionMismatch(
            f"matrix of order {m.shape[0]} does not match form of order {form.n}"
        )
    inv = list(form.inverse_permutation())
    return m[np.ix_(inv, inv)]
