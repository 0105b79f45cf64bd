"""First-order lambda-term-graphs with scope delimiters and black holes.

A graph is nameless.  Vertex ids are list indices; `succ[v]` is the ordered
successor list.  Backlinks are ordinary indexed edges: index 0 of a `var`
vertex and index 1 of a `del` vertex point at the binding `lam` vertex.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

ARITY = {"lam": 1, "app": 2, "var": 1, "del": 2, "bh": 0}

Prefix = tuple[int, ...]


class NotALambdaTermGraph(ValueError):
    def __init__(self, vertex: int, reason: str):
        super().__init__(f"vertex {vertex}: {reason}")
        self.vertex = vertex
        self.reason = reason


class MalformedGraph(ValueError):
    pass


@dataclass(frozen=True)
class TermGraph:
    labels: tuple[str, ...]
    succ: tuple[tuple[int, ...], ...]
    root: int = 0

    def __post_init__(self):
        n = len(self.labels)
        if len(self.succ) != n:
            raise MalformedGraph("labels and successor lists differ in length")
        if not 0 <= self.root < n:
            raise MalformedGraph(f"root {self.root} is not a vertex")
        for v, (label, out) in enumerate(zip(self.labels, self.succ)):
            if label not in ARITY:
                raise MalformedGraph(f"vertex {v}: unknown label {label!r}")
            if len(out) != ARITY[label]:
                raise MalformedGraph(f"vertex {v}: {label} needs {ARITY[label]} successors, has {len(out)}")
            for w in out:
                if not 0 <= w < n:
                    raise MalformedGraph(f"vertex {v}: successor {w} is not a vertex")
        unreachable = set(range(n)) - set(self.reachable())
        if unreachable:
            raise MalformedGraph(f"vertices not reachable from the root: {sorted(unreachable)}")

    def __len__(self) -> int:
        return len(self.labels)

    def reachable(self) -> list[int]:
        """Vertices in breadth-first order from the root, successors in index order."""
        seen = {self.root}
        order = [self.root]
        queue = deque(order)
        while queue:
            v = queue.popleft()
            for w in self.succ[v]:
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    queue.append(w)
        return order

    def edges(self):
        for v, out in enumerate(self.succ):
            for i, w in enumerate(out):
                yield v, i, w

    def is_backlink(self, v: int, i: int) -> bool:
        return (self.labels[v], i) in (("var", 0), ("del", 1))

    def in_degrees(self, backlinks: bool = False) -> list[int]:
        deg = [0] * len(self)
        for v, i, w in self.edges():
            if backlinks or not self.is_backlink(v, i):
                deg[w] += 1
        return deg

    def renumbered(self, order: list[int]) -> TermGraph:
        """The same graph with `order[k]` becoming vertex k."""
        new_id = {old: k for k, old in enumerate(order)}
        return TermGraph(
            tuple(self.labels[v] for v in order),
            tuple(tuple(new_id[w] for w in self.succ[v]) for v in order),
            new_id[self.root],
        )

    def canonical(self) -> TermGraph:
        return self.renumbered(self.reachable())


def graph_size(g: TermGraph) -> int:
    return len(g)


def build(labels, succ, root: int = 0) -> TermGraph:
    return TermGraph(tuple(labels), tuple(tuple(s) for s in succ), root)


# ---------------------------------------------------------------- prefixes


def validate(g: TermGraph) -> dict[int, Prefix]:
    """Compute the unique correct abstraction-prefix function, or raise NotALambdaTermGraph."""
    prefix: dict[int, Prefix] = {g.root: ()}
    work = [g.root]

    def assign(v: int, p: Prefix, reason: str) -> None:
        if v in prefix:
            if prefix[v] != p:
                raise NotALambdaTermGraph(v, f"conflicting prefixes {list(prefix[v])} and {list(p)} ({reason})")
            return
        if v in p:
            raise NotALambdaTermGraph(v, "vertex occurs in its own prefix")
        prefix[v] = p
        work.append(v)

    # access paths: everything except var backlinks and del backlinks
    while work:
        v = work.pop()
        p = prefix[v]
        match g.labels[v]:
            case "lam":
                assign(g.succ[v][0], p + (v,), f"body of lam {v}")
            case "app":
                assign(g.succ[v][0], p, f"function of app {v}")
                assign(g.succ[v][1], p, f"argument of app {v}")
            case "del":
                if not p:
                    raise NotALambdaTermGraph(v, "delimiter with empty prefix")
                assign(g.succ[v][0], p[:-1], f"successor of del {v}")
            case "var":
                if not p:
                    raise NotALambdaTermGraph(v, "variable with empty prefix")
            case "bh":
                if p:
                    raise NotALambdaTermGraph(v, "black hole with non-empty prefix")

    for v in range(len(g)):
        if v not in prefix:
            raise NotALambdaTermGraph(v, "not reachable by an access path")
    for v, label in enumerate(g.labels):
        if label not in ("var", "del"):
            continue
        w = g.succ[v][0 if label == "var" else 1]
        if g.labels[w] != "lam":
            raise NotALambdaTermGraph(v, f"backlink targets {g.labels[w]} vertex {w}")
        if prefix[w] + (w,) != prefix[v]:
            raise NotALambdaTermGraph(v, f"backlink to lam {w} does not close the innermost scope")
    return prefix


def is_eager_scope(g: TermGraph, prefix: dict[int, Prefix] | None = None) -> bool:
    """Every non-delimiter vertex reaches, within the scope of its innermost
    abstraction w, a variable vertex bound by w."""
    if prefix is None:
        prefix = validate(g)
    for v, label in enumerate(g.labels):
        p = prefix[v]
        if label == "del" or not p:
            continue
        if not _reaches_own_variable(g, prefix, v):
            return False
    return True


def _reaches_own_variable(g: TermGraph, prefix: dict[int, Prefix], v: int) -> bool:
    p = prefix[v]
    w = p[-1]
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if g.labels[u] == "var" and g.succ[u][0] == w:
            return True
        for x in g.succ[u]:
            if x not in seen and prefix[x][: len(p)] == p:
                seen.add(x)
                queue.append(x)
    return False


# ---------------------------------------------------------------- serialization


def to_json(g: TermGraph) -> str:
    data = {
        "root": g.root,
        "vertices": [{"id": v, "label": label} for v, label in enumerate(g.labels)],
        "edges": [{"src": v, "idx": i, "tgt": w} for v, i, w in g.edges()],
    }
    return json.dumps(data, separators=(",", ":"))


def from_json(text: str) -> TermGraph:
    data = json.loads(text)
    try:
        ids = sorted(vertex["id"] for vertex in data["vertices"])
        index = {vid: k for k, vid in enumerate(ids)}
        labels = [""] * len(ids)
        for vertex in data["vertices"]:
            labels[index[vertex["id"]]] = vertex["label"]
        slots: list[dict[int, int]] = [{} for _ in ids]
        for edge in data["edges"]:
            src, idx = index[edge["src"]], edge["idx"]
            if idx in slots[src]:
                raise MalformedGraph(f"duplicate edge {edge['src']}.{idx}")
            slots[src][idx] = index[edge["tgt"]]
        succ = []
        for v, out in enumerate(slots):
            if sorted(out) != list(range(len(out))):
                raise MalformedGraph(f"vertex {ids[v]}: edge indices {sorted(out)} are not contiguous")
            succ.append(tuple(out[i] for i in range(len(out))))
        root = index[data["root"]]
    except (KeyError, TypeError) as exc:
        raise MalformedGraph(f"bad graph JSON: {exc!r}") from exc
    return TermGraph(tuple(labels), tuple(succ), root)


_DOT_LABEL = {"lam": "λ", "app": "@", "var": "0", "del": "S", "bh": "•"}
_DOT_SHAPE = {"lam": "triangle", "app": "circle", "var": "box", "del": "diamond", "bh": "doublecircle"}


def to_dot(g: TermGraph, name: str = "G") -> str:
    lines = [f"digraph {name} {{", "  root [shape=point];", f"  root -> v{g.root};"]
    for v, label in enumerate(g.labels):
        lines.append(f'  v{v} [label="{_DOT_LABEL[label]}", shape={_DOT_SHAPE[label]}];')
    for v, i, w in g.edges():
        style = ", style=dashed" if g.is_backlink(v, i) else ""
        lines.append(f'  v{v} -> v{w} [label="{i}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
