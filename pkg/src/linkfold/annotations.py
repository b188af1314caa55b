"""Signed overlap values and annotation matrices.

The signed overlap of a directed segment pair measures how much of the
second segment runs on the left of the first minus how much runs on the
right, after projecting onto the first segment's line and clamping to
its span. Values are exact: rational multiples of the first segment's
length, carried as SqrtRational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import AnnotationError
from .geometry import Point, cross, dot, properly_cross, sqnorm, vsub
from .linkage import Configuration, Linkage, require_conf0
from .rationals import SqrtRational

Segment = tuple[Point, Point]


def _clamp01(x: Fraction) -> Fraction:
    if x < 0:
        return Fraction(0)
    if x > 1:
        return Fraction(1)
    return x


def _clipped_span(
    xa: Fraction, ya: Fraction, xb: Fraction, yb: Fraction, scale: Fraction, side: int
) -> Fraction:
    """Fraction of e1's span covered by e2 clipped to one closed half-plane.

    Coordinates are in the frame scaled by |e1|: x runs over [0, scale]
    along e1, y is the (scaled) signed offset. side selects y >= 0 or
    y <= 0.
    """
    sa, sb = side * ya, side * yb
    if sa < 0 and sb < 0:
        return Fraction(0)
    if sa >= 0 and sb >= 0:
        x1, x2 = xa, xb
    else:
        # crossing parameter of the y = 0 line along the segment
        t = sa / (sa - sb)
        xc = xa + t * (xb - xa)
        x1, x2 = (xc, xb) if sa < 0 else (xa, xc)
    return abs(_clamp01(x2 / scale) - _clamp01(x1 / scale))


def ord_value(e1: Segment, e2: Segment) -> SqrtRational:
    """Signed overlap of e2 over e1: left span minus right span.

    Degenerate e1 gives 0. The result is (r+ - r-) * |e1| with rational
    r terms, hence exactly representable.
    """
    t1, h1 = e1
    d = vsub(h1, t1)
    scale = sqnorm(d)
    if scale == 0:
        return SqrtRational(0)
    qa = vsub(e2[0], t1)
    qb = vsub(e2[1], t1)
    xa, ya = dot(qa, d), cross(d, qa)
    xb, yb = dot(qb, d), cross(d, qb)
    r_plus = _clipped_span(xa, ya, xb, yb, scale, +1)
    r_minus = _clipped_span(xa, ya, xb, yb, scale, -1)
    return SqrtRational(r_plus - r_minus, scale)


def overlap_length(e1: Segment, e2: Segment) -> SqrtRational:
    """Length of the collinear overlap of two segments, else 0.

    Only genuinely one-dimensional intersections count; collinear
    segments sharing a single point overlap with length 0.
    """
    t1, h1 = e1
    d = vsub(h1, t1)
    scale = sqnorm(d)
    if scale == 0:
        return SqrtRational(0)
    qa = vsub(e2[0], t1)
    qb = vsub(e2[1], t1)
    if cross(d, qa) != 0 or cross(d, qb) != 0:
        return SqrtRational(0)
    xa, xb = dot(qa, d), dot(qb, d)
    lo = max(Fraction(0), min(xa, xb))
    hi = min(scale, max(xa, xb))
    if hi <= lo:
        return SqrtRational(0)
    return SqrtRational((hi - lo) / scale, scale)


def strict_crossing(e1: Segment, e2: Segment) -> bool:
    """True iff the open interiors cross transversally."""
    return properly_cross(e1[0], e1[1], e2[0], e2[1])


@dataclass(frozen=True)
class AnnotationMatrix:
    """Dense square matrix of signed overlap values, indexed like edges."""

    entries: tuple[tuple[SqrtRational, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        rows = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise AnnotationError("annotation matrix is not square")
            if not row[i].is_zero:
                raise AnnotationError(f"nonzero diagonal entry at {i}")

    @property
    def n(self) -> int:
        return len(self.entries)

    def value(self, i: int, j: int) -> SqrtRational:
        return self.entries[i][j]

    @classmethod
    def from_rows(cls, rows) -> "AnnotationMatrix":
        conv = tuple(
            tuple(v if isinstance(v, SqrtRational) else SqrtRational(v) for v in row)
            for row in rows
        )
        return cls(conv)


def annotate(linkage: Linkage, configuration: Configuration) -> AnnotationMatrix:
    """Annotation induced by an exact configuration: pairwise signed overlaps."""
    require_conf0(configuration)
    segs = [configuration.segment(e) for e in linkage.edges]
    n = len(segs)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(SqrtRational(0))
            else:
                row.append(ord_value(segs[i], segs[j]))
        rows.append(tuple(row))
    return AnnotationMatrix(tuple(rows))
