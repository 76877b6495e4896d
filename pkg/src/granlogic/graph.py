"""The subsumption/disjointness graph of a schema.

Vertices are granules.  Subsumption edges are directed and come from the
positive ``Sub`` constraints plus the tautologies ``Sub(g,g)``,
``Sub(bot,g)`` and ``Sub(g,top)``.  Disjointness edges are undirected and
come from the positive ``Disj`` constraints plus ``Disj(bot,g)``.
Negative constraints play no part here.

Paths are vertex tuples.  A one-vertex tuple ``(g,)`` is the empty path
from ``g`` to itself (no proof steps); ``sub_star`` reports the
``g``-to-``g`` case as ``(g, g)``, the self-loop tautology.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .core import BOT, TOP, Constraint, Granule, Pred, Schema, Sub

Path = tuple[Granule, ...]


def steps(path: Path) -> list[Constraint]:
    """The Sub constraints along a path, in order."""
    return [Sub(a, b) for a, b in zip(path, path[1:])]


def is_reduced(path: Path) -> bool:
    if len(path) == 2:
        return True
    return len(set(path)) == len(path) and BOT not in path


def reduce_path(path: Path) -> Path:
    """Shorten a valid subsumption path without changing its endpoints.

    Cycles are erased.  If bottom occurs in the interior of a path that
    starts at bottom, the path collapses to the tautology edge.  A path from
    a non-bottom granule into bottom (possible only for unsatisfiable sets)
    keeps bottom as its last vertex.
    """
    if len(path) < 2:
        raise ValueError("a subsumption path has at least two vertices")
    first, last = path[0], path[-1]
    if first == last:
        return (first, first)
    if first == BOT:
        return (BOT, last)
    out: list[Granule] = []
    seen: dict[Granule, int] = {}
    for v in path:
        if v in seen:
            del out[seen[v] + 1:]
            seen = {g: i for i, g in enumerate(out)}
            continue
        seen[v] = len(out)
        out.append(v)
        if v == BOT and v != last:
            # Bottom is below everything, so jump straight to the end.
            out.append(last)
            break
    return tuple(out)


@dataclass(frozen=True)
class Protector:
    """Evidence that ``Disj(start_a, start_b)`` follows from the positive constraints.

    ``path_a`` runs from ``start_a`` to ``edge[0]`` and ``path_b`` from
    ``start_b`` to ``edge[1]``; either may be a one-vertex (empty) path.
    """

    edge: tuple[Granule, Granule]
    path_a: Path
    path_b: Path

    @property
    def cost(self) -> int:
        return len(self.path_a) + len(self.path_b) - 2


@dataclass(frozen=True)
class SelfDisjointWitness:
    """``base`` reaches both ends of a disjointness edge; the two paths share only ``base``."""

    base: Granule
    edge: tuple[Granule, Granule]
    path_a: Path
    path_b: Path


class SmasGraph:
    def __init__(self, schema: Schema):
        self.schema = schema
        self.vertices: tuple[Granule, ...] = tuple(sorted(schema.universe))
        succ: dict[Granule, set[Granule]] = {g: {g, TOP} for g in self.vertices}
        succ[BOT].update(self.vertices)
        pred: dict[Granule, set[Granule]] = {g: {g, BOT} for g in self.vertices}
        pred[TOP].update(self.vertices)
        self.pos_sub: frozenset[Constraint] = frozenset(
            c for c in schema.constraints if c.positive and c.pred is Pred.SUB
        )
        for c in self.pos_sub:
            succ[c.left].add(c.right)
            pred[c.right].add(c.left)
        self.succ = {g: tuple(sorted(s)) for g, s in succ.items()}
        self.pred = {g: tuple(sorted(s)) for g, s in pred.items()}
        # Declared disjointness edges that do not involve bottom, in canonical order.
        self.pos_disj: tuple[Constraint, ...] = tuple(
            sorted(
                c
                for c in schema.constraints
                if c.positive and c.pred is Pred.DISJ and BOT not in c.atom.terms()
            )
        )
        self._fwd: dict[Granule, tuple[dict, dict]] = {}
        self._bwd: dict[Granule, dict] = {}
        self._unsat_witness: Optional[tuple[SelfDisjointWitness | None]] = None

    # -- edge sets -----------------------------------------------------

    @property
    def s_edges(self) -> frozenset[tuple[Granule, Granule]]:
        return frozenset((a, b) for a in self.vertices for b in self.succ[a])

    @property
    def d_edges(self) -> frozenset[frozenset[Granule]]:
        edges = {frozenset((BOT, g)) for g in self.vertices}
        edges.update(
            frozenset(c.atom.terms())
            for c in self.schema.constraints
            if c.positive and c.pred is Pred.DISJ
        )
        return frozenset(edges)

    # -- reachability --------------------------------------------------

    def _forward(self, source: Granule) -> tuple[dict, dict]:
        """BFS distances and parents from ``source``; bottom is never passed through."""
        hit = self._fwd.get(source)
        if hit is not None:
            return hit
        dist = {source: 0}
        parent: dict[Granule, Granule] = {}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            if v == BOT and v != source:
                continue
            d = dist[v] + 1
            for w in self.succ[v]:
                if w not in dist:
                    dist[w] = d
                    parent[w] = v
                    queue.append(w)
        self._fwd[source] = (dist, parent)
        return dist, parent

    def _backward(self, target: Granule) -> dict[Granule, int]:
        hit = self._bwd.get(target)
        if hit is not None:
            return hit
        dist = {target: 0}
        queue = deque([target])
        while queue:
            v = queue.popleft()
            if v == BOT and v != target:
                continue
            d = dist[v] + 1
            for w in self.pred[v]:
                if w not in dist:
                    dist[w] = d
                    queue.append(w)
        self._bwd[target] = dist
        return dist

    def reachable(self, source: Granule) -> frozenset[Granule]:
        return frozenset(self._forward(source)[0])

    def ancestors(self, target: Granule) -> frozenset[Granule]:
        return frozenset(self._backward(target))

    def path(self, a: Granule, b: Granule) -> Optional[Path]:
        """Shortest path from ``a`` to ``b``; ``(a,)`` when they coincide."""
        self._check(a, b)
        if a == b:
            return (a,)
        dist, parent = self._forward(a)
        if b not in dist:
            return None
        out = [b]
        while out[-1] != a:
            out.append(parent[out[-1]])
        return tuple(reversed(out))

    def sub_star(self, a: Granule, b: Granule) -> Optional[Path]:
        """A reduced path from ``a`` to ``b``, or None if there is none."""
        p = self.path(a, b)
        if p is None:
            return None
        return (a, a) if len(p) == 1 else p

    def _check(self, *gs: Granule):
        for g in gs:
            if g not in self.succ:
                raise KeyError(f"unknown granule {g}")

    # -- disjointness --------------------------------------------------

    def find_protector(self, g1: Granule, g2: Granule) -> Optional[Protector]:
        """Cheapest pair of paths from ``g1``/``g2`` into a disjointness edge.

        Cost is the total number of subsumption steps; ties go to the first
        edge in canonical order.  Only meaningful for satisfiable positive
        sets.
        """
        self._check(g1, g2)
        if g1 == g2:
            raise ValueError("find_protector needs two distinct granules")
        if g1 == BOT or g2 == BOT:
            return Protector((g1, g2), (g1,), (g2,))
        d1, _ = self._forward(g1)
        d2, _ = self._forward(g2)
        best = None
        for c in self.pos_disj:
            a, b = c.left, c.right
            for x, y in ((a, b), (b, a)):
                if x in d1 and y in d2:
                    cost = d1[x] + d2[y]
                    if best is None or cost < best[0]:
                        best = (cost, x, y)
        if best is None:
            return None
        _, x, y = best
        return Protector((x, y), self.path(g1, x), self.path(g2, y))

    def is_protected(self, g1: Granule, g2: Granule) -> bool:
        return self.find_protector(g1, g2) is not None

    def self_disjoint_witness(self, g: Granule) -> Optional[SelfDisjointWitness]:
        """Show that ``g`` is forced empty, if it is; the witness may move to a lower base."""
        self._check(g)
        if g == BOT:
            raise ValueError("bottom is always empty")
        dist, _ = self._forward(g)
        if BOT in dist:
            p = self.path(g, BOT)
            y = p[-2]
            return SelfDisjointWitness(y, (BOT, y), (y, BOT), (y,))
        best = None
        for c in self.pos_disj:
            a, b = c.left, c.right
            if a in dist and b in dist:
                cost = dist[a] + dist[b]
                if best is None or cost < best[0]:
                    best = (cost, a, b)
        if best is None:
            return None
        _, a, b = best
        return _trim(self.path(g, a), self.path(g, b), (a, b))

    def is_unsatisfiable(self) -> bool:
        return self.unsat_witness() is not None

    def unsat_witness(self) -> Optional[SelfDisjointWitness]:
        """A self-disjointness witness for some non-bottom granule, if the positive part is unsatisfiable."""
        if self._unsat_witness is not None:
            return self._unsat_witness[0]
        w = None
        into_bot = [v for v in self.pred[BOT] if v != BOT]
        if into_bot:
            w = self.self_disjoint_witness(into_bot[0])
        else:
            for c in self.pos_disj:
                da = self._backward(c.left)
                db = self._backward(c.right)
                common = [v for v in da if v in db and v != BOT]
                if common:
                    base = min(common, key=lambda v: (da[v] + db[v], v))
                    w = self.self_disjoint_witness(base)
                    break
        self._unsat_witness = (w,)
        return w

    def entails_sub(self, a: Granule, b: Granule) -> bool:
        return a == b or b in self._forward(a)[0]

    def entails_disj(self, a: Granule, b: Granule) -> bool:
        if a == BOT or b == BOT:
            return True
        if a == b:
            return False
        return self.find_protector(a, b) is not None

    # -- export ----------------------------------------------------------

    def to_dot(self, name: str = "smas", include_tautologies: bool = False) -> str:
        lines = [f"digraph {name} {{"]
        for g in self.vertices:
            lines.append(f'  "{g}";')
        for a in self.vertices:
            for b in self.succ[a]:
                declared = Sub(a, b) in self.pos_sub
                if declared or include_tautologies:
                    style = "" if declared else " [color=gray]"
                    lines.append(f'  "{a}" -> "{b}"{style};')
        for edge in sorted(self.d_edges, key=lambda e: sorted(e)):
            ends = sorted(edge)
            declared = BOT not in edge
            if not (declared or include_tautologies):
                continue
            a, b = ends[0], ends[-1]
            lines.append(f'  "{a}" -> "{b}" [style=dashed, dir=none];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _trim(p1: Path, p2: Path, edge: tuple[Granule, Granule]) -> SelfDisjointWitness:
    # Move the base to the last vertex of p1 that also lies on p2, so the two
    # paths share no step.
    on_p2 = {v: i for i, v in enumerate(p2)}
    i1 = max(i for i, v in enumerate(p1) if v in on_p2)
    i2 = on_p2[p1[i1]]
    return SelfDisjointWitness(p1[i1], edge, p1[i1:], p2[i2:])


def build(schema: Schema) -> SmasGraph:
    return SmasGraph(schema)


def all_pairs(vertices: Iterable[Granule]):
    vs = sorted(vertices)
    for i, a in enumerate(vs):
        for b in vs[i + 1:]:
            yield a, b
