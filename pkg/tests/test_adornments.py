"""Strict slenderness, triangulation, and adorned chain conversion."""

import random
from fractions import Fraction as F

import pytest

from linkfold.adornments import (
    Adornment,
    AdornedChain,
    adorned_chain_to_linkage,
    is_strictly_slender,
    slender_failures,
    triangulate,
    validate_adornment,
    _point_in_polygon,
    _shoelace2,
)
from linkfold.errors import AdornmentError
from linkfold.geometry import orient
from linkfold.linkage import is_nontouching

ISO = Adornment(((0, 0), (2, 0), (1, 1)), (0, 1))
FLAT_ISO = Adornment(((0, 0), (2, 0), (1, F(1, 2))), (0, 1))
LEG_RIGHT = Adornment(((0, 0), (1, 0), (0, 1)), (0, 1))
SQUARE = Adornment(((0, 0), (1, 0), (1, 1), (0, 1)), (0, 1))
HYP_RIGHT = Adornment(((0, 0), (2, 0), (0, 1)), (1, 2))
FLAT_QUAD = Adornment(((0, 0), (4, 0), (3, 1), (1, 1)), (0, 1))
TALL_ISO = Adornment(((0, 0), (2, 0), (1, 3)), (0, 1))

VERDICTS = [
    (ISO, True),
    (FLAT_ISO, True),
    (LEG_RIGHT, False),
    (SQUARE, False),
    (HYP_RIGHT, True),
    (FLAT_QUAD, True),
    (TALL_ISO, False),
]


def test_slender_verdicts_both_modes():
    for shape, expected in VERDICTS:
        for mode in ("closure", "interior"):
            assert is_strictly_slender(shape, mode) == expected, (
                shape,
                mode,
            )


def test_slender_failure_reasons():
    fails = dict(slender_failures(LEG_RIGHT))
    assert 2 in fails and "parallel" in fails[2]
    fails = dict(slender_failures(SQUARE))
    assert any("parallel" in msg for msg in fails.values())
    fails = dict(slender_failures(TALL_ISO))
    assert any("span" in msg for msg in fails.values())
    assert slender_failures(ISO) == ()


def test_slender_interior_failures_subset_of_closure():
    shapes = [s for s, _ in VERDICTS] + [
        Adornment(((0, 0), (1, 0), (1, 1), (0, 1)), (0, 2)),
        Adornment(((0, 0), (3, 0), (4, 2), (-1, 2)), (0, 1)),
    ]
    for shape in shapes:
        inner = set(slender_failures(shape, "interior"))
        outer = set(slender_failures(shape, "closure"))
        assert inner <= outer


def test_slender_square_diagonal_base():
    diag = Adornment(((0, 0), (1, 0), (1, 1), (0, 1)), (0, 2))
    assert is_strictly_slender(diag)


def test_slender_mode_validation():
    with pytest.raises(AdornmentError):
        slender_failures(ISO, "open")


def test_validate_adornment_errors():
    with pytest.raises(AdornmentError):
        validate_adornment(Adornment(((0, 0), (1, 0)), (0, 1)))
    with pytest.raises(AdornmentError):  # clockwise
        validate_adornment(Adornment(((0, 0), (0, 1), (1, 0)), (0, 1)))
    with pytest.raises(AdornmentError):  # repeated vertex
        validate_adornment(
            Adornment(((0, 0), (1, 0), (1, 1), (1, 0)), (0, 1))
        )
    with pytest.raises(AdornmentError):  # collinear corner
        validate_adornment(
            Adornment(((0, 0), (1, 0), (2, 0), (1, 1)), (0, 1))
        )
    with pytest.raises(AdornmentError):  # bowtie self-crossing
        validate_adornment(
            Adornment(((0, 0), (1, 1), (1, 0), (0, 1)), (0, 1))
        )
    with pytest.raises(AdornmentError):  # base names one vertex twice
        validate_adornment(Adornment(((0, 0), (2, 0), (1, 1)), (1, 1)))
    with pytest.raises(AdornmentError):  # base chord outside a dart
        validate_adornment(
            Adornment(((0, 0), (2, 1), (4, 0), (2, 4)), (0, 2))
        )
    # interior chord of a convex polygon is fine
    validate_adornment(Adornment(((0, 0), (1, 0), (1, 1), (0, 1)), (1, 3)))


def test_triangulate_triangle_identity():
    tris = triangulate(ISO)
    assert tris == (((F(0), F(0)), (F(2), F(0)), (F(1), F(1))),)


def test_triangulate_quad_counts():
    quad = Adornment(((0, 0), (2, 0), (2, 1), (0, 1)), (0, 1))
    assert len(triangulate(quad)) == 2
    dart = Adornment(((0, 0), (2, 1), (4, 0), (2, 4)), (1, 3))
    tris = triangulate(dart)
    assert len(tris) == 2
    # pieces stay inside the region: centroids pass the interior test
    for a, b, c in tris:
        cx = (a[0] + b[0] + c[0]) / 3
        cy = (a[1] + b[1] + c[1]) / 3
        assert _point_in_polygon((cx, cy), dart.boundary)


def test_triangulate_area_oracle():
    rng = random.Random(6)
    shapes = [s for s, _ in VERDICTS]
    shapes.append(Adornment(((0, 0), (2, 1), (4, 0), (2, 4)), (1, 3)))
    for _ in range(30):
        # random convex fan around the origin
        n = rng.randint(3, 8)
        pts = []
        for k in range(n):
            r = F(rng.randint(2, 9), rng.choice([1, 2]))
            num = 360 * k + rng.randint(10, 350 // max(1, n))
            # rational points on a grid roughly along increasing angle
            pts.append((r + F(k), F(k * k) + F(num, 360)))
        try:
            shape = Adornment(tuple(pts), (0, 1))
            validate_adornment(shape)
        except AdornmentError:
            continue
        shapes.append(shape)
    for shape in shapes:
        tris = triangulate(shape)
        assert sum(orient(a, b, c) for a, b, c in tris) == _shoelace2(
            shape.boundary
        )


def test_perturbation_cloud_robust_and_borderline():
    rng = random.Random(2024)

    def jitter(shape):
        pts = tuple(
            (
                x + F(rng.randint(-1000, 1000), 10**9),
                y + F(rng.randint(-1000, 1000), 10**9),
            )
            for x, y in shape.boundary
        )
        return Adornment(pts, shape.base)

    for robust in (FLAT_ISO, FLAT_QUAD):
        for _ in range(100):
            assert is_strictly_slender(jitter(robust))

    # the borderline shapes sit on the open condition's boundary
    for borderline in (ISO, HYP_RIGHT):
        outcomes = {
            is_strictly_slender(jitter(borderline)) for _ in range(100)
        }
        assert outcomes == {True, False}

    # failing shapes stay failing nearby
    for solid_no in (SQUARE, TALL_ISO):
        for _ in range(100):
            assert not is_strictly_slender(jitter(solid_no))


def test_adorned_chain_single_triangle():
    L, C = adorned_chain_to_linkage(AdornedChain((ISO,)))
    assert len(L.edges) == 3
    assert len(L.vertices) == 3
    assert C.epsilon > 0  # slant lengths are irrational
    assert is_nontouching(L, C)


def test_adorned_chain_exact_lengths():
    tri = Adornment(((0, 0), (4, 0), (0, 3)), (0, 1))
    L, C = adorned_chain_to_linkage(AdornedChain((tri,)))
    assert C.epsilon == 0
    assert sorted(e.rest_length for e in L.edges) == [3, 4, 5]


def test_adorned_chain_two_triangles():
    a = Adornment(((0, 0), (2, 0), (1, 1)), (0, 1))
    b = Adornment(((2, 0), (4, 0), (3, 1)), (0, 1))
    L, C = adorned_chain_to_linkage(AdornedChain((a, b)))
    assert len(L.edges) == 6
    assert len(L.vertices) == 5  # shared base endpoint merged
    assert is_nontouching(L, C)


def test_adorned_chain_three_quads():
    quads = []
    for k in range(3):
        x = 2 * k
        quads.append(
            Adornment(
                (
                    (x, 0),
                    (x + 2, 0),
                    (x + F(3, 2), 1),
                    (x + F(1, 2), 1),
                ),
                (0, 1),
            )
        )
    L, C = adorned_chain_to_linkage(AdornedChain(tuple(quads)))
    assert len(L.edges) == 15  # 4 boundary + 1 diagonal per quad
    assert len(L.vertices) == 10
    assert is_nontouching(L, C)


def test_adorned_chain_errors():
    with pytest.raises(AdornmentError):
        adorned_chain_to_linkage(AdornedChain(()))
    a = Adornment(((0, 0), (2, 0), (1, 1)), (0, 1))
    gap = Adornment(((3, 0), (5, 0), (4, 1)), (0, 1))
    with pytest.raises(AdornmentError):
        adorned_chain_to_linkage(AdornedChain((a, gap)))
