"""Tests for the rectangle witness: search, reflection, verification, counting."""

import math

import pytest

from maskit import (
    AVerdict,
    AxisRectangle,
    ClassifierConfig,
    SearchParams,
    SyntheticSlice,
    WitnessSearchError,
    build_R,
    components_near_infinity,
    find_rectangle,
    verify_witness,
)

SQRT3 = math.sqrt(3.0)

# Regression fixtures for the default (honest-classifier) search.  These are
# pinned outputs of a deterministic computation: the search strip is
# [-2, 0], the first margin rung is 0.015, and the first half-width is 0.45.
REAL_Q = AxisRectangle(-1.45, -0.55, 1.7170508075687412, 1.8105146207017615)
REAL_Z = complex(-1.0, 1.7482054119464145)
REAL_R = AxisRectangle(-2.45, -1.55, 3.4341016151374824, 3.5275654282705027)


def _approx_rect(got: AxisRectangle, want: AxisRectangle, tol: float = 1e-12):
    assert got.re_min == pytest.approx(want.re_min, abs=tol)
    assert got.re_max == pytest.approx(want.re_max, abs=tol)
    assert got.im_min == pytest.approx(want.im_min, abs=tol)
    assert got.im_max == pytest.approx(want.im_max, abs=tol)


# ---------------------------------------------------------------------------
# AxisRectangle
# ---------------------------------------------------------------------------


def test_rectangle_validates_bounds():
    with pytest.raises(ValueError):
        AxisRectangle(0.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        AxisRectangle(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        AxisRectangle(1.0, 0.0, 0.0, 1.0)


def test_rectangle_geometry_accessors():
    q = AxisRectangle(-1.0, 3.0, 2.0, 4.5)
    assert q.width == 4.0
    assert q.height == 2.5
    assert q.describe() == {
        "re_min": -1.0,
        "re_max": 3.0,
        "im_min": 2.0,
        "im_max": 4.5,
    }


def test_rectangle_contains_interior_excludes_edges():
    q = AxisRectangle(0.0, 1.0, 0.0, 1.0)
    assert q.contains_interior(complex(0.5, 0.5))
    assert not q.contains_interior(complex(0.0, 0.5))  # on the left edge
    assert not q.contains_interior(complex(0.5, 1.0))  # on the top edge
    assert not q.contains_interior(complex(2.0, 0.5))


# ---------------------------------------------------------------------------
# build_R: the reflected rectangle {w : 3z - w in Q}
# ---------------------------------------------------------------------------


def test_build_r_fixture():
    q = AxisRectangle(0.0, 1.0, 1.0, 2.0)
    z = complex(0.5, 1.4)
    r = build_R(q, z)
    _approx_rect(r, AxisRectangle(0.5, 1.5, 2.2, 3.2))


def test_build_r_requires_interior_z():
    q = AxisRectangle(0.0, 1.0, 1.0, 2.0)
    with pytest.raises(ValueError, match="interior"):
        build_R(q, complex(0.5, 2.5))
    with pytest.raises(ValueError, match="interior"):
        build_R(q, complex(0.5, 2.0))  # on the edge does not count


def test_build_r_is_point_reflection_through_3z():
    q = AxisRectangle(-1.45, -0.55, 1.485, 1.575)
    z = complex(-1.0, 1.515)
    r = build_R(q, z)
    assert r.width == pytest.approx(q.width)
    assert r.height == pytest.approx(q.height)
    # Corners of Q map onto corners of R under w -> 3z - w.
    corners_q = [
        complex(q.re_min, q.im_min),
        complex(q.re_max, q.im_min),
        complex(q.re_min, q.im_max),
        complex(q.re_max, q.im_max),
    ]
    corners_r = {
        (round(3.0 * z.real - c.real, 12), round(3.0 * z.imag - c.imag, 12))
        for c in corners_q
    }
    assert corners_r == {
        (round(r.re_min, 12), round(r.im_min, 12)),
        (round(r.re_max, 12), round(r.im_min, 12)),
        (round(r.re_min, 12), round(r.im_max, 12)),
        (round(r.re_max, 12), round(r.im_max, 12)),
    }


def test_build_r_involution():
    # Pick Q containing both z and 2z, so z is interior to R = 3z - Q as
    # well; reflecting twice then returns the original rectangle.
    q = AxisRectangle(0.5, 1.3, 0.9, 2.0)
    z = complex(0.6, 0.95)
    assert q.contains_interior(2.0 * z)
    r = build_R(q, z)
    assert r.contains_interior(z)
    back = build_R(r, z)
    _approx_rect(back, q)


# ---------------------------------------------------------------------------
# find_rectangle against the synthetic slice (fully analyzable)
# ---------------------------------------------------------------------------


def test_find_rectangle_synthetic_lands_on_first_rung():
    # Synthetic valley floor at odd integers is exactly peak - 2*depth = 1.5:
    # the first margin (0.015) and first half-width (0.45) must succeed, so
    # Q = [-1.45, -0.55] x [1.485, 1.575] and z = -1 + 1.515i.
    q, z = find_rectangle(classifier=SyntheticSlice())
    assert z.real == pytest.approx(-1.0)
    assert z.imag == pytest.approx(1.515, abs=1e-9)
    _approx_rect(q, AxisRectangle(-1.45, -0.55, 1.485, 1.575), tol=1e-9)
    # The construction splits the heights 1:2 around z exactly.
    assert (q.im_max - z.imag) == pytest.approx(2.0 * (z.imag - q.im_min))


def test_find_rectangle_zero_budget_reports_profile():
    with pytest.raises(WitnessSearchError) as exc:
        find_rectangle(classifier=SyntheticSlice(), search=SearchParams(budget=0))
    profile = exc.value.profile
    assert len(profile) == 9
    for row in profile:
        assert set(row) == {"x", "outside_floor", "inside_floor"}
        assert row["inside_floor"] >= row["outside_floor"]


def test_find_rectangle_tiny_budget_exhausts():
    with pytest.raises(WitnessSearchError, match="budget"):
        find_rectangle(classifier=SyntheticSlice(), search=SearchParams(budget=5))


def test_find_rectangle_impossible_ladder_exhausts():
    search = SearchParams(inside_margins=(0.5,))
    with pytest.raises(WitnessSearchError, match="ladder"):
        find_rectangle(classifier=SyntheticSlice(), search=search)


# ---------------------------------------------------------------------------
# verify_witness
# ---------------------------------------------------------------------------


def test_verify_witness_synthetic_certifies():
    clf = SyntheticSlice()
    q, z = find_rectangle(classifier=clf)
    report = verify_witness(q, z, classifier=clf)
    assert report.all_certified
    assert report.interior_sample_verdict.verdict is AVerdict.MEMBER
    assert report.interior_sample_verdict.n == 1
    assert report.offending_samples == ()
    assert report.Q == q and report.z == z
    _approx_rect(report.R, build_R(q, z))
    assert len(report.boundary_samples) > 100
    for _, rec in report.boundary_samples:
        assert rec.verdict is AVerdict.NON_MEMBER_CERTIFIED


def test_verify_witness_requires_interior_z():
    q = AxisRectangle(-1.45, -0.55, 1.485, 1.575)
    with pytest.raises(ValueError, match="interior"):
        verify_witness(q, complex(-1.0, 3.0), classifier=SyntheticSlice())


def test_verify_witness_flags_oversized_rectangle():
    # Shrink Q's top towards z so R's bottom edge crosses the locus blob:
    # the verifier must report the offending samples instead of certifying.
    clf = SyntheticSlice()
    q = AxisRectangle(-1.45, -0.55, 1.485, 1.52)
    z = complex(-1.0, 1.515)
    report = verify_witness(q, z, classifier=clf)
    assert not report.all_certified
    assert len(report.offending_samples) > 0
    assert report.interior_sample_verdict.verdict is AVerdict.MEMBER
    doc = report.to_json_dict()
    assert doc["all_certified"] is False
    assert len(doc["boundary_samples"]["offending"]) == len(report.offending_samples)


def test_witness_report_json_shape():
    clf = SyntheticSlice()
    q, z = find_rectangle(classifier=clf)
    report = verify_witness(q, z, classifier=clf)
    doc = report.to_json_dict(cfg_meta=clf.describe())
    assert set(doc) == {
        "q",
        "z",
        "r",
        "interior_verdict",
        "boundary_samples",
        "components",
        "all_certified",
        "cfg",
    }
    assert doc["z"] == [z.real, z.imag]
    assert doc["cfg"]["kind"] == "synthetic"
    assert doc["boundary_samples"]["count"] == len(report.boundary_samples)
    assert "points" in doc["boundary_samples"]
    lean = report.to_json_dict(include_samples=False)
    assert "points" not in lean["boundary_samples"]


# ---------------------------------------------------------------------------
# components_near_infinity
# ---------------------------------------------------------------------------


def test_components_near_infinity_synthetic_counts_translates():
    clf = SyntheticSlice()
    q, z = find_rectangle(classifier=clf)
    r = build_R(q, z)
    base = 3.0 * z
    counting = components_near_infinity(
        base, 3, rectangle=r, classifier=clf, cols=256, rows=32
    )
    assert counting.ok
    assert counting.components_found >= 3
    assert counting.straddlers == ()
    assert len(counting.per_translate) == 3
    for j, tc in enumerate(counting.per_translate):
        assert tc.index == j
        assert tc.re_min == pytest.approx(r.re_min + 2.0 * j)
        assert tc.re_max == pytest.approx(r.re_max + 2.0 * j)
        assert tc.member_point_ok
        assert tc.component_labels
        assert tc.ok
    # The counting window covers exactly the k translates of R.
    assert counting.window.re_min == pytest.approx(r.re_min)
    assert counting.window.re_max == pytest.approx(r.re_max + 4.0)


def test_components_near_infinity_rejects_k_zero():
    r = AxisRectangle(-2.45, -1.55, 2.97, 3.06)
    with pytest.raises(ValueError, match="k >= 1"):
        components_near_infinity(
            complex(-3.0, 4.545), 0, rectangle=r, classifier=SyntheticSlice()
        )


def test_translate_count_describe_shape():
    clf = SyntheticSlice()
    q, z = find_rectangle(classifier=clf)
    counting = components_near_infinity(
        3.0 * z, 1, rectangle=build_R(q, z), classifier=clf, cols=128, rows=32
    )
    row = counting.per_translate[0].describe()
    assert set(row) == {
        "translate",
        "re_min",
        "re_max",
        "components",
        "member_point_ok",
        "ok",
    }


# ---------------------------------------------------------------------------
# The honest classifier end-to-end (regression-pinned)
# ---------------------------------------------------------------------------


def test_find_rectangle_real_regression():
    q, z = find_rectangle(ClassifierConfig())
    assert q.re_min == REAL_Q.re_min and q.re_max == REAL_Q.re_max
    assert q.im_min == pytest.approx(REAL_Q.im_min, abs=1e-12)
    assert q.im_max == pytest.approx(REAL_Q.im_max, abs=1e-12)
    assert z.real == REAL_Z.real
    assert z.imag == pytest.approx(REAL_Z.imag, abs=1e-12)
    _approx_rect(build_R(q, z), REAL_R)
    # The search bottoms out on the valley floor at sqrt(3): subtracting the
    # ladder margin (0.015) from the outside band recovers it.
    d = z.imag - q.im_min
    floor_out = z.imag - (d - 0.015)
    assert floor_out == pytest.approx(SQRT3, abs=1e-9)


def test_verify_witness_real_regression():
    report = verify_witness(REAL_Q, REAL_Z, ClassifierConfig())
    assert report.all_certified
    assert report.interior_sample_verdict.verdict is AVerdict.MEMBER
    assert report.interior_sample_verdict.n == 1
    assert report.offending_samples == ()
    assert len(report.boundary_samples) == 2726
