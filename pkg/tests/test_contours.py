import cmath
import json
import math

import numpy as np
import pytest

from utmqp.contours import (
    CircularArc,
    Contour,
    LineSegment,
    Ray,
    deformed_heat_contour,
    heat_contour,
    indented_line,
    kdv_contour,
    real_line,
    rotate_rays,
)
from utmqp.errors import InvalidDeformationError, InvalidParameterError

SQRT3 = math.sqrt(3.0)


def sample_points(contour, n=100, smax=5.0):
    pts = []
    for seg in contour:
        ss = np.linspace(0.0, 1.0 if seg.finite else smax, n + 2)[1:-1]
        pts.append(np.asarray(seg.point(ss)))
    return pts


class TestKdvContour:
    def test_right_ray_point(self):
        right = kdv_contour().segments[1]
        assert right.point(1.0) == pytest.approx(cmath.exp(1j * math.pi / 3))

    def test_rays_meet_at_origin(self):
        for seg in kdv_contour():
            assert seg.point(0.0) == 0

    def test_imaginary_unit_is_interior_not_on_contour(self):
        assert not kdv_contour().contains(1j)

    def test_membership_predicate_on_samples(self):
        # the defining set: Im(lambda) = sqrt(3) |Re(lambda)|
        for pts in sample_points(kdv_contour()):
            residual = np.abs(pts.imag - SQRT3 * np.abs(pts.real))
            assert residual.max() <= 1e-12 * (1.0 + np.abs(pts).max())

    def test_orientation_keeps_sector_on_left(self):
        # rotating the tangent by +pi/2 must point into the sector
        for seg in kdv_contour():
            s = 1.0
            tangent = seg.orientation * seg.velocity(s)
            inward = complex(tangent) * 1j
            probe = complex(seg.point(s)) + 1e-6 * inward / abs(inward)
            assert probe.imag >= SQRT3 * abs(probe.real)


class TestHeatContour:
    def test_on_contour(self):
        lam = cmath.exp(1j * math.pi / 4)
        assert heat_contour().contains(lam)
        assert abs((lam * lam).real) < 1e-15

    def test_interior_and_exterior_points(self):
        assert not heat_contour().contains(1j)   # interior of the sector
        assert not heat_contour().contains(1.0)  # exterior

    def test_membership_predicate_on_samples(self):
        for pts in sample_points(heat_contour()):
            residual = np.abs((pts * pts).real)
            assert residual.max() <= 1e-12 * (1.0 + np.abs(pts).max() ** 2)


class TestDeformedHeatContour:
    def test_minimum_modulus_is_one(self):
        mods = np.concatenate(
            [np.abs(p) for p in sample_points(deformed_heat_contour())]
        )
        assert mods.min() >= 1.0 - 1e-12

    def test_arc_joins_the_two_rays_through_the_top(self):
        # the connecting arc passes through i; only that choice makes the
        # one-term step-datum representation reproduce its closed form
        c = deformed_heat_contour()
        assert c.contains(1j)
        assert not c.contains(cmath.exp(7j * math.pi / 8))

    def test_arc_samples_on_unit_circle(self):
        arc = deformed_heat_contour().segments[1]
        ss = np.linspace(0, 1, 50)
        assert np.allclose(np.abs(arc.point(ss)), 1.0, atol=1e-14)

    def test_connectivity(self):
        segs = deformed_heat_contour().segments
        # inbound ray ends at its start point, which is the arc's start
        assert segs[0].point(0.0) == pytest.approx(segs[1].point(0.0))
        assert segs[1].point(1.0) == pytest.approx(segs[2].point(0.0))


class TestIndentedLine:
    def test_anchor_point(self):
        line = indented_line(1.0)
        assert line.segments[0].point(0.0) == 1j
        assert line.segments[1].point(0.0) == 1j

    def test_rejects_nonpositive_eps(self):
        with pytest.raises(InvalidParameterError):
            indented_line(-0.1)
        with pytest.raises(InvalidParameterError):
            indented_line(0.0)


class TestRotateRays:
    def test_zero_rotation_is_identity(self):
        c = heat_contour()
        assert rotate_rays(c, 0.0) == c

    def test_heat_wedge_tilts_toward_real_axis(self):
        rotated = rotate_rays(heat_contour(), math.pi / 8)
        angles = sorted(seg.effective_angle for seg in rotated)
        assert angles == pytest.approx([math.pi / 8, 7 * math.pi / 8])

    def test_round_trip_is_exact(self):
        c = kdv_contour()
        for delta in (0.1, math.pi / 16, 0.2531):
            assert rotate_rays(rotate_rays(c, delta), -delta) == c

    def test_leaving_the_sector_is_rejected(self):
        with pytest.raises(InvalidDeformationError):
            rotate_rays(heat_contour(), math.pi / 3)

    def test_finite_pieces_unchanged(self):
        c = deformed_heat_contour()
        rotated = rotate_rays(c, math.pi / 16)
        assert rotated.segments[1] == c.segments[1]


class TestSerialization:
    @pytest.mark.parametrize(
        "factory", [kdv_contour, heat_contour, deformed_heat_contour, real_line]
    )
    def test_json_is_well_formed(self, factory):
        data = json.loads(factory().to_json())
        assert data["segments"]
        for seg in data["segments"]:
            assert seg["kind"] in ("ray", "segment", "arc")
            assert seg["orientation"] in (-1, 1)

    def test_segment_fields(self):
        data = deformed_heat_contour().to_dict()
        kinds = [seg["kind"] for seg in data["segments"]]
        assert kinds == ["ray", "arc", "ray"]
        arc = data["segments"][1]
        assert arc["radius"] == 1.0


class TestSegments:
    def test_line_segment_distance(self):
        seg = LineSegment(0j, 1.0 + 0j)
        assert seg.distance(0.5 + 1j) == pytest.approx(1.0)
        assert seg.distance(2.0 + 0j) == pytest.approx(1.0)

    def test_arc_requires_positive_radius_and_nonempty_range(self):
        with pytest.raises(InvalidParameterError):
            CircularArc(0j, -1.0, 0.0, 1.0)
        with pytest.raises(InvalidParameterError):
            CircularArc(0j, 1.0, 0.5, 0.5)

    def test_parameterization_derivative_nonzero(self):
        for factory in (kdv_contour, heat_contour, deformed_heat_contour):
            for seg in factory():
                ss = np.linspace(0.01, 0.99, 17)
                assert np.all(np.abs(seg.velocity(ss)) > 0)

    def test_reversed_contour(self):
        c = kdv_contour()
        r = c.reversed()
        assert [seg.angle for seg in r] == [seg.angle for seg in c][::-1]
        assert [seg.orientation for seg in r] == [-1, 1]
        assert r.reversed() == c
