"""Polynomial constraint systems for configuration spaces.

emit_conf describes the length bands alone; emit_nconf adds, for every
bar pair, a disjunction of strict separations weakened by allowance
clauses that permit contact exactly at endpoints merged through
collapsed short paths. Systems serialize to SMT-LIB2 (QF_NRA) and can
be evaluated exactly on rational assignments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import LinkageError
from .linkage import Linkage

Monomial = tuple[str, ...]


@dataclass(frozen=True)
class Poly:
    """Multivariate polynomial with exact rational coefficients."""

    terms: tuple[tuple[Monomial, Fraction], ...]

    @staticmethod
    def _norm(data: dict[Monomial, Fraction]) -> "Poly":
        items = tuple(
            (m, c) for m, c in sorted(data.items()) if c != 0
        )
        return Poly(items)

    @classmethod
    def const(cls, value) -> "Poly":
        return cls._norm({(): Fraction(value)})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._norm({(name,): Fraction(1)})

    def _data(self) -> dict[Monomial, Fraction]:
        return dict(self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        data = self._data()
        for m, c in other.terms:
            data[m] = data.get(m, Fraction(0)) + c
        return Poly._norm(data)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(tuple((m, -c) for m, c in self.terms))

    def __mul__(self, other: "Poly") -> "Poly":
        data: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(sorted(m1 + m2))
                data[m] = data.get(m, Fraction(0)) + c1 * c2
        return Poly._norm(data)

    def evaluate(self, assignment: dict[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms:
            v = c
            for name in m:
                v *= assignment[name]
            total += v
        return total


@dataclass(frozen=True)
class Atom:
    op: str  # "=", "<=", ">=", "<", ">" comparing poly against 0
    poly: Poly

    def __post_init__(self) -> None:
        if self.op not in ("=", "<=", ">=", "<", ">"):
            raise LinkageError(f"unknown relation {self.op!r}")


@dataclass(frozen=True)
class And:
    items: tuple

    def __init__(self, *items) -> None:
        object.__setattr__(self, "items", tuple(items))


@dataclass(frozen=True)
class Or:
    items: tuple

    def __init__(self, *items) -> None:
        object.__setattr__(self, "items", tuple(items))


@dataclass(frozen=True)
class Not:
    item: object


@dataclass(frozen=True)
class TaggedAssert:
    family: str
    node: object


@dataclass(frozen=True)
class ConstraintSystem:
    variables: tuple[str, ...]
    asserts: tuple[TaggedAssert, ...]


def _xy(vertex: str) -> tuple[Poly, Poly]:
    return Poly.var(f"x_{vertex}"), Poly.var(f"y_{vertex}")


def _sq_poly(tail: str, head: str) -> Poly:
    xt, yt = _xy(tail)
    xh, yh = _xy(head)
    dx, dy = xt - xh, yt - yh
    return dx * dx + dy * dy


def _orient_poly(a: str, b: str, c: str) -> Poly:
    xa, ya = _xy(a)
    xb, yb = _xy(b)
    xc, yc = _xy(c)
    return (xb - xa) * (yc - ya) - (yb - ya) * (xc - xa)


def _dot_poly(a: str, b: str, c: str, d: str) -> Poly:
    """Dot product of vectors (b - a) and (d - c)."""
    xa, ya = _xy(a)
    xb, yb = _xy(b)
    xc, yc = _xy(c)
    xd, yd = _xy(d)
    return (xb - xa) * (xd - xc) + (yb - ya) * (yd - yc)


def _variables(linkage: Linkage) -> tuple[str, ...]:
    out = []
    for v in linkage.vertices:
        out.append(f"x_{v}")
        out.append(f"y_{v}")
    return tuple(out)


def emit_conf(linkage: Linkage, epsilon) -> ConstraintSystem:
    """Length-band constraints for Conf_epsilon."""
    eps = Fraction(epsilon)
    if eps < 0:
        raise LinkageError("negative epsilon")
    asserts: list[TaggedAssert] = []
    for e in linkage.edges:
        sq = _sq_poly(e.tail, e.head)
        if eps == 0:
            node = Atom("=", sq - Poly.const(e.rest_length**2))
            asserts.append(TaggedAssert(f"length:{e.id}", node))
            continue
        upper = Atom("<=", sq - Poly.const((e.rest_length + eps) ** 2))
        asserts.append(TaggedAssert(f"length-upper:{e.id}", upper))
        if e.rest_length >= eps:
            lower = Atom(">=", sq - Poly.const((e.rest_length - eps) ** 2))
            asserts.append(TaggedAssert(f"length-lower:{e.id}", lower))
    return ConstraintSystem(_variables(linkage), tuple(asserts))


def _on_closed_segment_node(w: str, r: str, s: str) -> And:
    return And(
        Atom("=", _orient_poly(r, s, w)),
        Atom("<=", _dot_poly(r, w, s, w)),
    )


def _short_path(
    linkage: Linkage, eps: Fraction, a: str, b: str
) -> list[str] | None:
    """BFS path a -> b through edges of rest length <= eps, as edge ids."""
    if a == b:
        return []
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in linkage.vertices}
    for e in linkage.edges:
        if e.rest_length <= eps:
            adj[e.tail].append((e.id, e.head))
            adj[e.head].append((e.id, e.tail))
    prev: dict[str, tuple[str, str]] = {}
    frontier = [a]
    seen = {a}
    while frontier:
        nxt = []
        for u in frontier:
            for eid, w in adj[u]:
                if w in seen:
                    continue
                seen.add(w)
                prev[w] = (u, eid)
                if w == b:
                    path = []
                    cur = b
                    while cur != a:
                        pu, pe = prev[cur]
                        path.append(pe)
                        cur = pu
                    return list(reversed(path))
                nxt.append(w)
        frontier = nxt
    return None


def emit_nconf(linkage: Linkage, epsilon) -> ConstraintSystem:
    """Length bands plus exact nontouching separation constraints."""
    eps = Fraction(epsilon)
    base = emit_conf(linkage, eps)
    asserts = list(base.asserts)
    edges = linkage.edges
    by_id = {e.id: e for e in edges}

    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            ei, ej = edges[i], edges[j]
            p, q = ei.tail, ei.head
            r, s = ej.tail, ej.head
            disjuncts: list[object] = []
            # strict same-side separations, both lines
            for (aa, bb), (cc, dd) in (((p, q), (r, s)), ((r, s), (p, q))):
                for op in (">", "<"):
                    disjuncts.append(
                        And(
                            Atom(op, _orient_poly(aa, bb, cc)),
                            Atom(op, _orient_poly(aa, bb, dd)),
                        )
                    )
            # axial separations along each bar's own direction
            for (aa, bb), (cc, dd) in (((p, q), (r, s)), ((r, s), (p, q))):
                disjuncts.append(
                    And(
                        Atom(">", _dot_poly(bb, cc, aa, bb)),
                        Atom(">", _dot_poly(bb, dd, aa, bb)),
                    )
                )
                disjuncts.append(
                    And(
                        Atom("<", _dot_poly(aa, cc, aa, bb)),
                        Atom("<", _dot_poly(aa, dd, aa, bb)),
                    )
                )
            # two collapsed bars may coexist at distinct points
            xp, yp = _xy(p)
            xr, yr = _xy(r)
            disjuncts.append(
                And(
                    Atom("=", _sq_poly(p, q)),
                    Atom("=", _sq_poly(r, s)),
                    Not(And(Atom("=", xp - xr), Atom("=", yp - yr))),
                )
            )
            # allowances: touching only at endpoints merged via a
            # collapsed short path
            for a, other_i in ((p, q), (q, p)):
                for b, other_j in ((r, s), (s, r)):
                    path = _short_path(linkage, eps, a, b)
                    if path is None:
                        continue
                    if path:
                        psum = Poly.const(0)
                        for eid in path:
                            pe = by_id[eid]
                            psum = psum + _sq_poly(pe.tail, pe.head)
                        collapsed: object = Atom("=", psum)
                    else:
                        collapsed = Atom("=", Poly.const(0))
                    contact_ok = Or(
                        And(
                            Not(_on_closed_segment_node(other_i, r, s)),
                            Not(_on_closed_segment_node(other_j, p, q)),
                        ),
                        Atom("=", _sq_poly(p, q)),
                        Atom("=", _sq_poly(r, s)),
                    )
                    disjuncts.append(And(collapsed, contact_ok))
            asserts.append(
                TaggedAssert(f"apart:{ei.id}:{ej.id}", Or(*disjuncts))
            )

    # isolated vertices carry no edge constraints; keep them off everything
    attached = set()
    for e in edges:
        attached.add(e.tail)
        attached.add(e.head)
    for w in linkage.vertices:
        if w in attached:
            continue
        xw, yw = _xy(w)
        for v in linkage.vertices:
            if v == w:
                continue
            xv, yv = _xy(v)
            asserts.append(
                TaggedAssert(
                    f"apart-vertex:{w}:{v}",
                    Not(And(Atom("=", xw - xv), Atom("=", yw - yv))),
                )
            )
        for e in edges:
            asserts.append(
                TaggedAssert(
                    f"clear:{w}:{e.id}",
                    Not(
                        And(
                            Atom("=", _orient_poly(e.tail, e.head, w)),
                            Atom("<", _dot_poly(e.tail, w, e.head, w)),
                        )
                    ),
                )
            )
    return ConstraintSystem(base.variables, tuple(asserts))


@dataclass(frozen=True)
class EvalReport:
    ok: bool
    failures: tuple[str, ...]


def _eval_node(node, assignment: dict[str, Fraction]) -> bool:
    if isinstance(node, Atom):
        v = node.poly.evaluate(assignment)
        return {
            "=": v == 0,
            "<=": v <= 0,
            ">=": v >= 0,
            "<": v < 0,
            ">": v > 0,
        }[node.op]
    if isinstance(node, And):
        return all(_eval_node(k, assignment) for k in node.items)
    if isinstance(node, Or):
        return any(_eval_node(k, assignment) for k in node.items)
    if isinstance(node, Not):
        return not _eval_node(node.item, assignment)
    raise LinkageError(f"unknown node {node!r}")


def eval_system(system: ConstraintSystem, assignment) -> EvalReport:
    """Exact truth of every assert under a rational assignment."""
    values = {k: Fraction(v) for k, v in assignment.items()}
    for name in system.variables:
        if name not in values:
            raise LinkageError(f"assignment missing variable {name!r}")
    failures = tuple(
        ta.family for ta in system.asserts if not _eval_node(ta.node, values)
    )
    return EvalReport(not failures, failures)


_PLAIN = re.compile(r"[A-Za-z0-9_.-]+\Z")


def _symbol(name: str) -> str:
    if "|" in name or "\\" in name:
        raise LinkageError(f"id {name!r} cannot appear in SMT output")
    if _PLAIN.match(name) and not name[0].isdigit():
        return name
    return f"|{name}|"


def _literal(value: Fraction) -> str:
    if value < 0:
        return f"(- {_literal(-value)})"
    if value.denominator == 1:
        return str(value.numerator)
    return f"(/ {value.numerator} {value.denominator})"


def _poly_sexp(poly: Poly) -> str:
    if not poly.terms:
        return "0"
    parts = []
    for m, c in poly.terms:
        if not m:
            parts.append(_literal(c))
        elif c == 1 and len(m) == 1:
            parts.append(_symbol(m[0]))
        else:
            factors = " ".join(_symbol(v) for v in m)
            parts.append(f"(* {_literal(c)} {factors})")
    if len(parts) == 1:
        return parts[0]
    return f"(+ {' '.join(parts)})"


def _node_sexp(node) -> str:
    if isinstance(node, Atom):
        return f"({node.op} {_poly_sexp(node.poly)} 0)"
    if isinstance(node, And):
        if not node.items:
            return "true"
        inner = " ".join(_node_sexp(k) for k in node.items)
        return f"(and {inner})" if len(node.items) > 1 else inner
    if isinstance(node, Or):
        if not node.items:
            return "false"
        inner = " ".join(_node_sexp(k) for k in node.items)
        return f"(or {inner})" if len(node.items) > 1 else inner
    if isinstance(node, Not):
        return f"(not {_node_sexp(node.item)})"
    raise LinkageError(f"unknown node {node!r}")


def serialize(system: ConstraintSystem) -> str:
    lines = ["(set-logic QF_NRA)", ""]
    for name in system.variables:
        lines.append(f"(declare-const {_symbol(name)} Real)")
    lines.append("")
    for ta in system.asserts:
        lines.append(f"; family: {ta.family}")
        lines.append(f"(assert {_node_sexp(ta.node)})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def _tokenize(text: str) -> list:
    toks = []
    families = {}
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == ";":
            j = text.find("\n", i)
            j = n if j < 0 else j
            comment = text[i:j]
            m = re.match(r";\s*family:\s*(.+?)\s*$", comment)
            if m:
                families[len(toks)] = m.group(1)
            i = j
        elif ch in "()":
            toks.append(ch)
            i += 1
        elif ch == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise LinkageError("unterminated quoted symbol")
            toks.append(text[i + 1 : j])
            i = j + 1
        elif ch.isspace():
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();|":
                j += 1
            toks.append(text[i:j])
            i = j
    return [toks, families]


def _read_sexp(toks: list, pos: int):
    if toks[pos] == "(":
        out = []
        pos += 1
        while toks[pos] != ")":
            item, pos = _read_sexp(toks, pos)
            out.append(item)
        return out, pos + 1
    return toks[pos], pos + 1


def _parse_poly(expr) -> Poly:
    if isinstance(expr, str):
        if re.match(r"-?\d+\Z", expr):
            return Poly.const(Fraction(int(expr)))
        return Poly.var(expr)
    head = expr[0]
    args = expr[1:]
    if head == "+":
        out = Poly.const(0)
        for a in args:
            out = out + _parse_poly(a)
        return out
    if head == "*":
        out = Poly.const(1)
        for a in args:
            out = out * _parse_poly(a)
        return out
    if head == "-":
        if len(args) == 1:
            return -_parse_poly(args[0])
        out = _parse_poly(args[0])
        for a in args[1:]:
            out = out - _parse_poly(a)
        return out
    if head == "/":
        return Poly.const(Fraction(int(args[0]), int(args[1])))
    raise LinkageError(f"cannot parse polynomial {expr!r}")


def _parse_node(expr):
    if expr == "true":
        return And()
    if expr == "false":
        return Or()
    head = expr[0]
    if head in ("=", "<=", ">=", "<", ">"):
        poly = _parse_poly(expr[1]) - _parse_poly(expr[2])
        return Atom(head, poly)
    if head == "and":
        return And(*(_parse_node(a) for a in expr[1:]))
    if head == "or":
        return Or(*(_parse_node(a) for a in expr[1:]))
    if head == "not":
        return Not(_parse_node(expr[1]))
    raise LinkageError(f"cannot parse node {expr!r}")


def parse_constraints(text: str) -> ConstraintSystem:
    """Read back a serialized system; inverse of serialize on its output."""
    toks, families = _tokenize(text)
    variables: list[str] = []
    asserts: list[TaggedAssert] = []
    pos = 0
    while pos < len(toks):
        start = pos
        expr, pos = _read_sexp(toks, pos)
        if not isinstance(expr, list) or not expr:
            continue
        if expr[0] == "declare-const":
            variables.append(expr[1])
        elif expr[0] == "assert":
            fam = families.get(start, "")
            asserts.append(TaggedAssert(fam, _parse_node(expr[1])))
    return ConstraintSystem(tuple(variables), tuple(asserts))
