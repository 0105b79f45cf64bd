"""Bisimilarity, bisimulation collapse and homomorphisms of term graphs.

Term graphs are deterministic: a vertex's label and indexed successors fix
everything.  Backlinks are ordinary indexed edges, so no case needs special
treatment for them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .syntax import Term
from .termgraph import TermGraph
from .translate import graphsem

Hom = dict[int, int]


class Partition:
    """Disjoint-set forest over vertex ids (path halving, union by size)."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, v: int) -> int:
        parent = self.parent
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        return True

    def classes(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for v in range(len(self.parent)):
            groups.setdefault(self.find(v), []).append(v)
        return sorted(groups.values())


@dataclass(frozen=True)
class Witness:
    """A bisimulation between two graphs as a partition of their disjoint
    union: vertex v of the first graph is v, vertex w of the second is offset + w."""

    partition: Partition
    offset: int

    def related(self, v: int, w: int) -> bool:
        return self.partition.find(v) == self.partition.find(self.offset + w)


def bisimulation(g1: TermGraph, g2: TermGraph) -> Witness | None:
    """Union-find equivalence check from the root pair; None if the roots are not bisimilar."""
    offset = len(g1)
    labels = g1.labels + g2.labels
    succ = g1.succ + tuple(tuple(offset + w for w in out) for out in g2.succ)
    partition = Partition(len(labels))
    todo = [(g1.root, offset + g2.root)]
    while todo:
        v, w = todo.pop()
        if labels[v] != labels[w]:
            return None
        if partition.union(v, w):
            todo.extend(zip(succ[v], succ[w]))
    return Witness(partition, offset)


def bisimilar(g1: TermGraph, g2: TermGraph) -> bool:
    return bisimulation(g1, g2) is not None


def funbisim(g1: TermGraph, g2: TermGraph) -> Hom | None:
    """The homomorphism g1 -> g2 if one exists; it is unique since graphs are deterministic."""
    hom: Hom = {g1.root: g2.root}
    queue = deque([g1.root])
    while queue:
        v = queue.popleft()
        w = hom[v]
        if g1.labels[v] != g2.labels[w]:
            return None
        for x, y in zip(g1.succ[v], g2.succ[w]):
            if x in hom:
                if hom[x] != y:
                    return None
            else:
                hom[x] = y
                queue.append(x)
    return hom


def iso(g1: TermGraph, g2: TermGraph) -> bool:
    return len(g1) == len(g2) and funbisim(g1, g2) is not None and funbisim(g2, g1) is not None


def coarsest_partition(g: TermGraph) -> list[int]:
    """Class index per vertex for the largest bisimulation on g.

    Partition refinement: start from labels, then repeatedly split classes by
    the classes of their indexed successors.  Only classes with a member
    pointing into a moved part need another look, and the largest part of a
    split keeps its class, so each vertex moves O(log n) times.
    """
    n = len(g)
    preds: list[list[int]] = [[] for _ in range(n)]
    for v, _, w in g.edges():
        preds[w].append(v)

    block: list[int] = [0] * n
    members: list[list[int]] = []
    by_label: dict[str, int] = {}
    for v, label in enumerate(g.labels):
        if label not in by_label:
            by_label[label] = len(members)
            members.append([])
        block[v] = by_label[label]
        members[block[v]].append(v)

    dirty = set(range(len(members)))
    while dirty:
        b = min(dirty)
        dirty.discard(b)
        groups: dict[tuple[int, ...], list[int]] = {}
        for v in members[b]:
            groups.setdefault(tuple(block[w] for w in g.succ[v]), []).append(v)
        if len(groups) == 1:
            continue
        # keep the largest group in place; the smaller ones get new blocks
        parts = sorted(groups.values(), key=len, reverse=True)
        members[b] = parts[0]
        for part in parts[1:]:
            nb = len(members)
            members.append(part)
            for v in part:
                block[v] = nb
            for v in part:
                for u in preds[v]:
                    dirty.add(block[u])
    return block


def collapse(g: TermGraph) -> tuple[TermGraph, Hom]:
    """The bisimulation collapse of g and the homomorphism onto it.

    Classes are first ordered by their least member, then the quotient is
    renumbered breadth-first from the root.
    """
    block = coarsest_partition(g)
    representative: dict[int, int] = {}
    for v in range(len(g)):
        representative.setdefault(block[v], v)
    reps = sorted(representative.values())
    index = {block[v]: k for k, v in enumerate(reps)}
    quotient = TermGraph(
        tuple(g.labels[v] for v in reps),
        tuple(tuple(index[block[w]] for w in g.succ[v]) for v in reps),
        index[block[g.root]],
    )
    order = quotient.reachable()
    position = {old: k for k, old in enumerate(order)}
    result = quotient.renumbered(order)
    hom = {v: position[index[block[v]]] for v in range(len(g))}
    return result, hom


def is_collapsed(g: TermGraph) -> bool:
    block = coarsest_partition(g)
    return len(set(block)) == len(g)


def unshare_delimiters(g: TermGraph) -> TermGraph:
    """Give every edge from a non-delimiter vertex into a delimiter chain its own copy of the chain."""
    labels = list(g.labels)
    succ = [list(out) for out in g.succ]

    def copy_chain(d: int) -> int:
        head = len(labels)
        labels.append("del")
        succ.append([-1, g.succ[d][1]])
        nxt = g.succ[d][0]
        succ[head][0] = copy_chain(nxt) if g.labels[nxt] == "del" else nxt
        return head

    root = copy_chain(g.root) if g.labels[g.root] == "del" else g.root
    for v in range(len(g)):
        if g.labels[v] == "del":
            continue
        for i, w in enumerate(g.succ[v]):
            if g.labels[w] == "del" and not g.is_backlink(v, i):
                succ[v][i] = copy_chain(w)
    # the original delimiters are now unreachable and pruned
    return _prune(labels, succ, root)


def split_vars(g: TermGraph) -> TermGraph:
    """Give every edge into a variable vertex its own variable vertex."""
    labels = list(g.labels)
    succ = [list(out) for out in g.succ]
    for v in range(len(g)):
        for i, w in enumerate(g.succ[v]):
            if g.labels[w] == "var":
                succ[v][i] = len(labels)
                labels.append("var")
                succ.append(list(g.succ[w]))
    return _prune(labels, succ, g.root)


def _prune(labels: list[str], succ: list[list[int]], root: int) -> TermGraph:
    seen = {root}
    order = [root]
    queue = deque(order)
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    new_id = {v: k for k, v in enumerate(order)}
    return TermGraph(
        tuple(labels[v] for v in order),
        tuple(tuple(new_id[w] for w in succ[v]) for v in order),
        0,
    )


def equiv(t1: Term, t2: Term) -> bool:
    """Whether two closed terms have the same infinite unfolding."""
    return bisimilar(graphsem(t1), graphsem(t2))
