"""Linkage and configuration model.

A linkage is a multigraph with nonnegative rational rest lengths on its
edges; a configuration places the vertices in the plane with exact
rational coordinates and carries the slack bound it satisfies. The
nontouching predicate implements the convention that a bar of realized
length zero is just its merged vertex point, so clusters of zero-length
bars may sit inside an apparent intersection without touching anything.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import LinkageError
from .geometry import (
    Point,
    in_open_segment,
    properly_cross,
    sqdist,
)


class DisjointSets:
    """Union-find over hashable items, stable class enumeration."""

    def __init__(self, items: Iterable) -> None:
        self._parent = {x: x for x in items}
        self._order = list(self._parent)

    def find(self, x):
        p = self._parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[rb] = ra

    def classes(self) -> list[list]:
        by_root: dict = {}
        for x in self._order:
            by_root.setdefault(self.find(x), []).append(x)
        return list(by_root.values())


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    rest_length: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "rest_length", Fraction(self.rest_length))
        if self.rest_length < 0:
            raise LinkageError(f"edge {self.id}: negative rest length")
        if self.tail == self.head:
            raise LinkageError(f"edge {self.id}: self-loop at {self.tail}")


@dataclass(frozen=True)
class Linkage:
    """Multigraph with rest lengths; parallel edges allowed, self-loops not."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise LinkageError("duplicate vertex ids")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise LinkageError("duplicate edge ids")
        vset = set(self.vertices)
        for e in self.edges:
            if e.tail not in vset or e.head not in vset:
                raise LinkageError(f"edge {e.id}: dangling endpoint")

    def edge_index(self, edge_id: str) -> int:
        for i, e in enumerate(self.edges):
            if e.id == edge_id:
                return i
        raise LinkageError(f"no edge {edge_id!r}")

    def incident_slots(self, vertex: str) -> list[int]:
        """Indices of edges incident to vertex, in edge order."""
        return [
            i
            for i, e in enumerate(self.edges)
            if e.tail == vertex or e.head == vertex
        ]

    def degree(self, vertex: str) -> int:
        return len(self.incident_slots(vertex))


def configuration_membership(
    linkage: Linkage, placement: Mapping[str, Point], epsilon
) -> bool:
    """Exact Conf_epsilon test: every realized length within the band.

    The lower band (l - eps)^2 <= d^2 applies only when l >= eps; below
    that the band floor is zero and only the upper bound constrains.
    """
    eps = Fraction(epsilon)
    if eps < 0:
        raise LinkageError("negative epsilon")
    for v in linkage.vertices:
        if v not in placement:
            raise LinkageError(f"placement missing vertex {v!r}")
    for e in linkage.edges:
        d2 = sqdist(placement[e.tail], placement[e.head])
        l = e.rest_length
        if d2 > (l + eps) ** 2:
            return False
        if l >= eps and d2 < (l - eps) ** 2:
            return False
    return True


@dataclass(frozen=True)
class Configuration:
    linkage: Linkage
    placement: dict[str, Point]
    epsilon: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        pl = {
            v: (Fraction(p[0]), Fraction(p[1]))
            for v, p in self.placement.items()
        }
        object.__setattr__(self, "placement", pl)
        if not configuration_membership(self.linkage, pl, self.epsilon):
            raise LinkageError(
                f"placement violates the length band at epsilon={self.epsilon}"
            )

    def point(self, vertex: str) -> Point:
        return self.placement[vertex]

    def segment(self, edge: Edge) -> tuple[Point, Point]:
        return self.placement[edge.tail], self.placement[edge.head]

    def is_exact(self) -> bool:
        """True iff every realized length equals its rest length exactly."""
        for e in self.linkage.edges:
            if sqdist(*self.segment(e)) != e.rest_length**2:
                return False
        return True


def require_conf0(configuration: Configuration) -> None:
    if not configuration.is_exact():
        raise LinkageError("operation requires an exact (slack-free) configuration")


def check_epsilon_related(l1: Linkage, l2: Linkage, epsilon) -> bool:
    """Same graph structure and rest lengths within epsilon edgewise."""
    eps = Fraction(epsilon)
    if l1.vertices != l2.vertices:
        return False
    if len(l1.edges) != len(l2.edges):
        return False
    for a, b in zip(l1.edges, l2.edges):
        if (a.id, a.tail, a.head) != (b.id, b.tail, b.head):
            return False
        if abs(a.rest_length - b.rest_length) > eps:
            return False
    return True


@dataclass(frozen=True)
class MergedVertexPartition:
    """Vertex classes joined by rest-length-zero paths."""

    classes: tuple[tuple[str, ...], ...]
    class_of: dict[str, int]

    def location(self, configuration: Configuration, class_index: int) -> Point:
        return configuration.placement[self.classes[class_index][0]]


def merged_vertex_partition(linkage: Linkage) -> MergedVertexPartition:
    ds = DisjointSets(linkage.vertices)
    for e in linkage.edges:
        if e.rest_length == 0:
            ds.union(e.tail, e.head)
    classes = tuple(tuple(c) for c in ds.classes())
    class_of = {v: i for i, c in enumerate(classes) for v in c}
    return MergedVertexPartition(classes, class_of)


def _realized_zero_partition(configuration: Configuration) -> MergedVertexPartition:
    L = configuration.linkage
    ds = DisjointSets(L.vertices)
    for e in L.edges:
        a, b = configuration.segment(e)
        if a == b:
            ds.union(e.tail, e.head)
    classes = tuple(tuple(c) for c in ds.classes())
    class_of = {v: i for i, c in enumerate(classes) for v in c}
    return MergedVertexPartition(classes, class_of)


def is_nontouching(linkage: Linkage, configuration: Configuration) -> bool:
    """Edges meet only at shared merged endpoints, nothing else coincides.

    Merging is computed on realized geometry (bars of realized length
    zero), which on exact configurations coincides with rest-length
    merging and stays meaningful on slack configurations.
    """
    if configuration.linkage is not linkage and configuration.linkage != linkage:
        raise LinkageError("configuration belongs to a different linkage")
    C = configuration
    part = _realized_zero_partition(C)

    # (a) distinct merged vertices occupy distinct points
    seen: dict[Point, int] = {}
    for idx, cls in enumerate(part.classes):
        p = C.placement[cls[0]]
        if p in seen:
            return False
        seen[p] = idx

    positive = [
        (i, e, C.segment(e))
        for i, e in enumerate(linkage.edges)
        if C.segment(e)[0] != C.segment(e)[1]
    ]

    # (b) positive edges intersect only at shared merged endpoints
    for a in range(len(positive)):
        _, ea, (p1, q1) = positive[a]
        for b in range(a + 1, len(positive)):
            _, eb, (p2, q2) = positive[b]
            if properly_cross(p1, q1, p2, q2):
                return False
            if {p1, q1} == {p2, q2}:
                return False
            if in_open_segment(p1, p2, q2) or in_open_segment(q1, p2, q2):
                return False
            if in_open_segment(p2, p1, q1) or in_open_segment(q2, p1, q1):
                return False

    # (c) no merged vertex inside the open interior of a non-incident edge
    for idx, cls in enumerate(part.classes):
        p = C.placement[cls[0]]
        for _, e, (a, b) in positive:
            if part.class_of[e.tail] == idx or part.class_of[e.head] == idx:
                continue
            if in_open_segment(p, a, b):
                return False
    return True


@dataclass(frozen=True)
class ExtensionMap:
    """Bookkeeping to reduce an extended linkage back to its original.

    vertex_map sends extended vertex ids to original ids (identity for
    missing keys), edge_map does the same for edge ids, and
    extension_edges lists the added zero-length bars to contract.
    """

    vertex_map: dict[str, str] = field(default_factory=dict)
    edge_map: dict[str, str] = field(default_factory=dict)
    extension_edges: tuple[str, ...] = ()

    def original_vertex(self, vid: str) -> str:
        return self.vertex_map.get(vid, vid)

    def original_edge(self, eid: str) -> str:
        return self.edge_map.get(eid, eid)


def extend_split(
    linkage: Linkage, configuration: Configuration
) -> tuple[Linkage, Configuration, ExtensionMap]:
    """Split every vertex into one fragment per incident edge.

    Fragments of one vertex are co-located and tied in a star of
    zero-length extension bars. The star is anchored at the first
    zero-length slot's fragment when the vertex has one (so that a
    later relocation collapsing zero fragments to a point never leaves
    two extension bars spanning the same pair of points), else at the
    fragment with the lowest numeric suffix. Degree-0 vertices keep a
    single fragment.
    """
    frag_ids: dict[tuple[str, int], str] = {}
    new_vertices: list[str] = []
    vertex_map: dict[str, str] = {}
    placement: dict[str, Point] = {}
    endpoint_frag: dict[tuple[int, str], str] = {}

    for v in linkage.vertices:
        slots = linkage.incident_slots(v)
        count = max(len(slots), 1)
        for k in range(count):
            fid = f"{v}.{k}"
            frag_ids[(v, k)] = fid
            new_vertices.append(fid)
            vertex_map[fid] = v
            placement[fid] = configuration.placement[v]
        for k, ei in enumerate(slots):
            endpoint_frag[(ei, v)] = frag_ids[(v, k)]

    new_edges: list[Edge] = []
    edge_map: dict[str, str] = {}
    for i, e in enumerate(linkage.edges):
        new_edges.append(
            Edge(
                e.id,
                endpoint_frag[(i, e.tail)],
                endpoint_frag[(i, e.head)],
                e.rest_length,
            )
        )
        edge_map[e.id] = e.id

    extension_edges: list[str] = []
    counter = 0
    for v in linkage.vertices:
        slots = linkage.incident_slots(v)
        anchor = next(
            (k for k, ei in enumerate(slots) if linkage.edges[ei].rest_length == 0),
            0,
        )
        for k in range(len(slots)):
            if k == anchor:
                continue
            xid = f"x{counter}"
            counter += 1
            new_edges.append(
                Edge(xid, frag_ids[(v, anchor)], frag_ids[(v, k)], Fraction(0))
            )
            extension_edges.append(xid)

    L2 = Linkage(tuple(new_vertices), tuple(new_edges))
    C2 = Configuration(L2, placement, configuration.epsilon)
    emap = ExtensionMap(vertex_map, edge_map, tuple(extension_edges))
    return L2, C2, emap


def reduce(
    linkage: Linkage, configuration: Configuration, extension_map: ExtensionMap
) -> tuple[Linkage, Configuration]:
    """Contract extension bars and merge their endpoints back.

    Duplicate edges produced by a contraction are kept (the result is a
    multigraph); a non-extension edge collapsing to a self-loop means
    the map does not describe a valid reduction.
    """
    ext = set(extension_map.extension_edges)
    for eid in extension_map.extension_edges:
        e = linkage.edges[linkage.edge_index(eid)]
        if e.rest_length != 0:
            raise LinkageError(f"extension bar {eid} has nonzero rest length")
        a, b = configuration.segment(e)
        if a != b:
            raise LinkageError(f"extension bar {eid} endpoints not co-located")

    merged_vertices: list[str] = []
    placement: dict[str, Point] = {}
    for v in linkage.vertices:
        ov = extension_map.original_vertex(v)
        if ov not in placement:
            merged_vertices.append(ov)
            placement[ov] = configuration.placement[v]
        elif placement[ov] != configuration.placement[v]:
            raise LinkageError(
                f"fragments of {ov} are not co-located; cannot reduce"
            )

    new_edges: list[Edge] = []
    for e in linkage.edges:
        if e.id in ext:
            continue
        t = extension_map.original_vertex(e.tail)
        h = extension_map.original_vertex(e.head)
        if t == h:
            raise LinkageError(
                f"edge {e.id} collapses to a self-loop under this reduction"
            )
        new_edges.append(Edge(extension_map.original_edge(e.id), t, h, e.rest_length))

    L = Linkage(tuple(merged_vertices), tuple(new_edges))
    C = Configuration(L, placement, configuration.epsilon)
    return L, C
