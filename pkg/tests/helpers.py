"""Shared fixtures: hand-built gadgets and randomized corpora.

Layered gadgets carry a height map (bar id -> integer layer) from which
the annotation matrix is derived: overlapping bars get +-overlap with
the sign seen from each bar's own left side, disjoint bars keep their
geometric order value.
"""

from __future__ import annotations

import random
from fractions import Fraction

from linkfold.annotations import (
    AnnotationMatrix,
    annotate,
    ord_value,
    overlap_length,
)
from linkfold.geometry import (
    canonical_line,
    canonical_line_direction,
    dot,
    sign,
    vsub,
)
from linkfold.linkage import Configuration, Edge, Linkage, is_nontouching
from linkfold.rationals import SqrtRational

F = Fraction


def mk_linkage(edge_specs, vertices=None):
    """Edges as (id, tail, head, rest). Vertex order is first appearance."""
    if vertices is None:
        seen = []
        for _, tail, head, _ in edge_specs:
            for v in (tail, head):
                if v not in seen:
                    seen.append(v)
        vertices = tuple(seen)
    edges = tuple(Edge(eid, t, h, F(r)) for eid, t, h, r in edge_specs)
    return Linkage(tuple(vertices), edges)


def conf(linkage, coords, eps=0):
    placement = {v: (F(x), F(y)) for v, (x, y) in coords.items()}
    return Configuration(linkage, placement, F(eps))


def annotation_from_layers(linkage, configuration, heights):
    """Annotation induced by stacking overlapping bars at integer layers."""
    segs = [configuration.segment(e) for e in linkage.edges]
    n = len(segs)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(SqrtRational(0))
                continue
            ov = overlap_length(segs[i], segs[j])
            if ov.sign() <= 0:
                row.append(ord_value(segs[i], segs[j]))
                continue
            hi = heights[linkage.edges[i].id]
            hj = heights[linkage.edges[j].id]
            if hi == hj:
                raise ValueError("overlapping bars need distinct layers")
            d = canonical_line_direction(canonical_line(*segs[i]))
            orient_i = sign(dot(vsub(segs[i][1], segs[i][0]), d))
            row.append(ov.scale(orient_i * (1 if hj > hi else -1)))
        rows.append(tuple(row))
    return AnnotationMatrix(tuple(rows))


def doubled_chain():
    """Two unit bars folded flat onto [0,1], the second on top."""
    L = mk_linkage([("e1", "v0", "v1", 1), ("e2", "v1", "v2", 1)])
    C = conf(L, {"v0": (0, 0), "v1": (1, 0), "v2": (0, 0)})
    A = annotation_from_layers(L, C, {"e1": 0, "e2": 1})
    return L, C, A


def degenerate_triangle():
    """Triangle with lengths 2,1,1 collapsed onto a line (fold at x=1).

    The two short bars form a tent over the long one, so they share a
    layer (they meet only at the fold point) while the long bar stays
    below both.
    """
    L = mk_linkage(
        [("e1", "v0", "v1", 2), ("e2", "v1", "v2", 1), ("e3", "v2", "v0", 1)]
    )
    C = conf(L, {"v0": (0, 0), "v1": (2, 0), "v2": (1, 0)})
    A = annotation_from_layers(L, C, {"e1": 0, "e2": 1, "e3": 1})
    return L, C, A


def zipper5():
    """Five bars zigzagging over [0,4], each overlapping its neighbours."""
    xs = [0, 2, 1, 3, 2, 4]
    specs = []
    for k in range(5):
        specs.append((f"e{k + 1}", f"v{k}", f"v{k + 1}", abs(xs[k + 1] - xs[k])))
    L = mk_linkage(specs)
    C = conf(L, {f"v{k}": (xs[k], 0) for k in range(6)})
    A = annotation_from_layers(L, C, {f"e{k + 1}": k for k in range(5)})
    return L, C, A


def spiral4():
    """Bars of lengths 4,3,2,1 folding inward, fully nested at x=2.5."""
    xs = [0, 4, 1, 3, 2]
    lens = [4, 3, 2, 1]
    specs = []
    for k in range(4):
        specs.append((f"e{k + 1}", f"v{k}", f"v{k + 1}", lens[k]))
    L = mk_linkage(specs)
    C = conf(L, {f"v{k}": (xs[k], 0) for k in range(5)})
    A = annotation_from_layers(L, C, {f"e{k + 1}": k for k in range(4)})
    return L, C, A


def zero_cluster_star():
    """Zero-length triangle at the origin with three unit spokes.

    The spokes appear to meet at one point, but every coincidence is
    backed by a zero-length path, so the configuration is nontouching.
    """
    L = mk_linkage(
        [
            ("z1", "a", "b", 0),
            ("z2", "b", "c", 0),
            ("z3", "c", "a", 0),
            ("e4", "a", "d", 1),
            ("e5", "b", "e", 1),
            ("e6", "c", "f", 1),
        ]
    )
    C = conf(
        L,
        {
            "a": (0, 0),
            "b": (0, 0),
            "c": (0, 0),
            "d": (0, 1),
            "e": (F(-3, 5), F(-4, 5)),
            "f": (F(3, 5), F(-4, 5)),
        },
    )
    return L, C, annotate(L, C)


def interleave_gadget():
    """Four stacked bars whose tails alternate between two glued points."""
    specs = [
        ("E1", "t1", "h1", 1),
        ("E2", "t2", "h2", 1),
        ("E3", "t1", "h3", 1),
        ("E4", "t2", "h4", 1),
    ]
    L = mk_linkage(specs)
    coords = {"t1": (0, 0), "t2": (0, 0)}
    for k in range(1, 5):
        coords[f"h{k}"] = (1, 0)
    C = conf(L, coords)
    A = annotation_from_layers(L, C, {"E1": 0, "E2": 1, "E3": 2, "E4": 3})
    return L, C, A


def cyclic_gadget():
    """Three stacked bars annotated in a rock-paper-scissors cycle.

    Every pair satisfies the two-sided sign identity, yet no total
    order exists at either endpoint location.
    """
    specs = [
        ("F1", "t1", "h1", 1),
        ("F2", "t2", "h2", 1),
        ("F3", "t3", "h3", 1),
    ]
    L = mk_linkage(specs)
    coords = {}
    for k in range(1, 4):
        coords[f"t{k}"] = (0, 0)
        coords[f"h{k}"] = (1, 0)
    C = conf(L, coords)
    rows = [
        [0, -1, 1],
        [1, 0, -1],
        [-1, 1, 0],
    ]
    return L, C, AnnotationMatrix.from_rows(rows)


def perturbation_corpus():
    """Named self-touching (or nearly) instances used by the delta sweeps."""
    return [
        ("doubled-chain",) + doubled_chain(),
        ("zipper5",) + zipper5(),
        ("spiral4",) + spiral4(),
        ("degenerate-triangle",) + degenerate_triangle(),
        ("zero-cluster-star",) + zero_cluster_star(),
    ]


def straight_chain(*lengths):
    specs = []
    for k, l in enumerate(lengths):
        specs.append((f"e{k}", f"v{k}", f"v{k + 1}", l))
    L = mk_linkage(specs)
    pos = F(0)
    coords = {"v0": (0, 0)}
    for k, l in enumerate(lengths):
        pos += F(l)
        coords[f"v{k + 1}"] = (pos, 0)
    return L, conf(L, coords)


def closed_chain_linkage(*lengths):
    n = len(lengths)
    specs = []
    for k, l in enumerate(lengths):
        specs.append((f"e{k}", f"v{k}", f"v{(k + 1) % n}", l))
    return mk_linkage(specs)


# primitive integer vectors with integer length, all eight symmetries
_BASE_TRIPLES = [(1, 0, 1), (3, 4, 5), (5, 12, 13), (8, 15, 17), (20, 21, 29)]
RATIONAL_DIRS = []
for _x, _y, _n in _BASE_TRIPLES:
    for dx, dy in {(_x, _y), (_y, _x), (-_x, _y), (_y, -_x),
                   (_x, -_y), (-_y, _x), (-_x, -_y), (-_y, -_x)}:
        RATIONAL_DIRS.append((dx, dy, _n))
RATIONAL_DIRS.sort()


def random_linkage(rng: random.Random, min_bars=2, max_bars=8):
    """Random tree-ish linkage with rational bar lengths, placed exactly."""
    n = rng.randint(min_bars, max_bars)
    vids = ["v0"]
    coords = {"v0": (F(0), F(0))}
    specs = []
    k = 0
    while k < n:
        tail = rng.choice(vids)
        dx, dy, nm = rng.choice(RATIONAL_DIRS)
        scale = F(rng.randint(1, 8), rng.choice([1, 2, 4]))
        head_pt = (coords[tail][0] + dx * scale, coords[tail][1] + dy * scale)
        head = next((v for v in vids if coords[v] == head_pt), None)
        if head is None:
            head = f"v{len(vids)}"
            vids.append(head)
            coords[head] = head_pt
        if head == tail:
            continue
        specs.append((f"e{k + 1}", tail, head, nm * scale))
        k += 1
    L = mk_linkage(specs, vertices=tuple(vids))
    return L, conf(L, coords)


def random_nontouching(rng: random.Random, min_bars=2, max_bars=8):
    while True:
        L, C = random_linkage(rng, min_bars, max_bars)
        if is_nontouching(L, C):
            return L, C


def random_zero_linkage(rng: random.Random):
    """Random linkage with a few zero-length bars glued onto it."""
    L, C = random_linkage(rng, 2, 5)
    vids = list(L.vertices)
    coords = dict(C.placement)
    specs = [(e.id, e.tail, e.head, e.rest_length) for e in L.edges]
    for z in range(rng.randint(1, 3)):
        anchor = rng.choice(vids)
        if rng.random() < 0.5:
            other = f"z{z}"
            vids.append(other)
            coords[other] = coords[anchor]
        else:
            other = rng.choice(vids)
            if other == anchor or coords[other] != coords[anchor]:
                other = f"z{z}"
                vids.append(other)
                coords[other] = coords[anchor]
        specs.append((f"ze{z}", anchor, other, 0))
    L2 = mk_linkage(specs, vertices=tuple(vids))
    return L2, conf(L2, coords)


def random_closed_lengths(rng: random.Random, kmin=3, kmax=7):
    """Side lengths of a strictly feasible closed chain."""
    while True:
        k = rng.randint(kmin, kmax)
        lens = [F(rng.randint(1, 12), rng.choice([1, 2, 3, 4])) for _ in range(k)]
        if max(lens) < sum(lens) - max(lens):
            return tuple(lens)

def perturbed_closed_pair(rng: random.Random):
    """A closed chain and a nearby one, rest lengths within 10 percent."""
    while True:
        lens1 = random_closed_lengths(rng)
        lens2 = tuple(
            l * (1 + F(rng.randint(-1, 1) * rng.randint(0, 10), 100))
            for l in lens1
        )
        if max(lens2) < sum(lens2) - max(lens2):
            return lens1, lens2


def assignment_of(placement):
    out = {}
    for v, (x, y) in placement.items():
        out[f"x_{v}"] = F(x)
        out[f"y_{v}"] = F(y)
    return out


def big_eps(linkage, placement):
    """A slack bound that certifies any placement of this linkage."""
    s = sum((e.rest_length for e in linkage.edges), F(0))
    for x, y in placement.values():
        s += abs(F(x)) + abs(F(y))
    return 2 * s + 1


def nontouch_oracle(linkage, placement):
    return is_nontouching(
        linkage, Configuration(linkage, placement, big_eps(linkage, placement))
    )


def random_sa_instance(rng: random.Random):
    """Small linkage plus a placement that may sit anywhere near Conf."""
    if rng.random() < 0.6:
        L, C = random_linkage(rng, 2, 5)
    else:
        L, C = random_zero_linkage(rng)
    P = dict(C.placement)
    eps = rng.choice([F(0), F(0), F(1, 10), F(1, 4)])
    mode = rng.random()
    if mode < 0.45:
        for _ in range(rng.randint(1, 2)):
            v = rng.choice(list(P))
            jx = F(rng.randint(-3, 3), rng.choice([20, 40, 160]))
            jy = F(rng.randint(-3, 3), rng.choice([20, 40, 160]))
            P[v] = (P[v][0] + jx, P[v][1] + jy)
    elif mode < 0.65 and len(L.edges) >= 2:
        v = rng.choice(list(P))
        e = rng.choice(L.edges)
        a, b = P[e.tail], P[e.head]
        lam = F(rng.randint(0, 4), 4)
        P[v] = (a[0] + lam * (b[0] - a[0]), a[1] + lam * (b[1] - a[1]))
    return L, P, eps
