"""Bounded-component witness: rectangle search, verification, and counting.

The non-local-connectivity witness is a rectangle construction.  Find an
axis-parallel Q in the upper half-plane, of width < 2, whose two vertical
sides and lower side are certified outside the upper slice component, and a
point z interior to Q, certified inside, positioned so its distance to the
top of Q is exactly twice its distance to the bottom.  Reflect Q through
the point 3z/2... precisely: R = {w : 3z - w in Q}.  Then for the extension
locus at base point 3z:

  * 2z lies interior to R and is a Member (the n = 1 test points are z
    itself and -z, inside the upper/lower components respectively);
  * every w on the boundary of R has its upper test point 3z - w on the
    certified-outside sides of Q, or (for the lower side of R) its lower
    test point 3z - 2w so close to the real axis that it is rejected by an
    integer-slope trace -- so the boundary is certified NonMember.

A certified Member region surrounded by a certified NonMember curve is a
bounded component; horizontal period-2 translates R + 2j repeat it, giving
as many pairwise-disconnected components as the window shows.

The search is anchored on the vertical line through the midpoint of the
configured strip (default strip (-2, 0): the valley between the two cusp
peaks adjacent to the imaginary axis).  Boundary heights are located by
bisection -- lowest certified-inside and highest certified-outside points on
the anchor vertical -- which keeps the search agnostic to whether the
classifier is the honest one (valley floor sqrt(3)) or the synthetic
harness (valley floor 1.5).  A ladder of inside-margins and half-widths is
then tried until every side sample certifies outside.

Everything accepts an injected classifier (any object with .classify(z) and
.describe()); default is the honest RealClassifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .classify import (
    AMembership,
    AVerdict,
    ClassifierConfig,
    RealClassifier,
    Verdict,
    membership_with,
)
from .raster import (
    CELL_MEMBER,
    Component,
    ComponentReport,
    Raster,
    Window,
    components,
    rasterize_a_slice,
)


@dataclass(frozen=True)
class AxisRectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("rectangle bounds must satisfy re_min < re_max, im_min < im_max")

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    def contains_interior(self, z) -> bool:
        z = complex(z)
        return (
            self.re_min < z.real < self.re_max and self.im_min < z.imag < self.im_max
        )

    def describe(self) -> dict:
        return {
            "re_min": self.re_min,
            "re_max": self.re_max,
            "im_min": self.im_min,
            "im_max": self.im_max,
        }


@dataclass(frozen=True)
class SearchParams:
    """Rectangle-search ladder; see module docstring for the geometry."""

    strip: tuple[float, float] = (-2.0, 0.0)
    inside_margins: tuple[float, ...] = (0.015, 0.025, 0.04, 0.065, 0.1)
    half_widths: tuple[float, ...] = (0.45, 0.38, 0.32, 0.27, 0.22)
    side_samples: int = 33
    budget: int = 100_000  # classifier calls the search may spend
    probe_top: float = 2.5
    bisect_steps: int = 42


class WitnessSearchError(RuntimeError):
    """Search exhausted; carries a boundary-height profile across the strip."""

    def __init__(self, message, profile):
        super().__init__(message)
        self.profile = list(profile)


class _BudgetedClassifier:
    def __init__(self, classifier, budget: int):
        self.classifier = classifier
        self.remaining = budget

    def classify(self, z):
        if self.remaining <= 0:
            raise _BudgetExhausted()
        self.remaining -= 1
        return self.classifier.classify(z)


class _BudgetExhausted(Exception):
    pass


def _lowest_inside(clf, x: float, top: float, steps: int) -> float:
    """Smallest height on the vertical through x known to certify InsidePlus."""
    hi = top
    for _ in range(8):
        if clf.classify(complex(x, hi)).verdict is Verdict.INSIDE_PLUS:
            break
        hi *= 1.6
    else:
        raise _ProbeFailed(f"no certified-inside point found above x = {x}")
    lo = 0.0  # the real axis is always outside
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if clf.classify(complex(x, mid)).verdict is Verdict.INSIDE_PLUS:
            hi = mid
        else:
            lo = mid
    return hi


def _highest_outside(clf, x: float, top: float, steps: int) -> float:
    """Largest height below `top` on the vertical known to certify outside."""
    lo = 0.0
    hi = top
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if clf.classify(complex(x, mid)).verdict is Verdict.OUTSIDE_CERTIFIED:
            lo = mid
        else:
            hi = mid
    return lo


class _ProbeFailed(Exception):
    pass


def _boundary_profile(classifier, strip, n: int = 9, steps: int = 24):
    """Coarse certified floor/ceiling heights across the strip (diagnostics)."""
    lo, hi = strip
    out = []
    for k in range(n):
        x = lo + (hi - lo) * k / (n - 1)
        try:
            inside = _lowest_inside(classifier, x, 2.5, steps)
        except _ProbeFailed:
            inside = float("nan")
        outside = _highest_outside(classifier, x, inside if inside == inside else 2.5, steps)
        out.append({"x": x, "outside_floor": outside, "inside_floor": inside})
    return out


def _side_points(q: AxisRectangle, n: int):
    xs = [q.re_min + q.width * k / (n - 1) for k in range(n)]
    ys = [q.im_min + q.height * k / (n - 1) for k in range(n)]
    pts = [complex(x, q.im_min) for x in xs]  # lower side
    pts += [complex(q.re_min, y) for y in ys]  # left side
    pts += [complex(q.re_max, y) for y in ys]  # right side
    return pts


def find_rectangle(
    cfg: ClassifierConfig | None = None,
    search: SearchParams | None = None,
    *,
    classifier=None,
) -> tuple[AxisRectangle, complex]:
    """Locate (Q, z): sides certified outside, z inside at the 1/3 height.

    Raises WitnessSearchError (with a boundary-height profile of the strip)
    if the ladder is exhausted or the budget runs out.
    """
    if cfg is None:
        cfg = ClassifierConfig()
    if classifier is None:
        classifier = RealClassifier(cfg)
    if search is None:
        search = SearchParams()
    if search.budget <= 0:
        raise WitnessSearchError(
            "search budget is zero", _boundary_profile(classifier, search.strip)
        )
    clf = _BudgetedClassifier(classifier, search.budget)
    x_c = 0.5 * (search.strip[0] + search.strip[1])
    try:
        floor_in = _lowest_inside(clf, x_c, search.probe_top, search.bisect_steps)
        floor_out = _highest_outside(clf, x_c, floor_in, search.bisect_steps)
        for m in search.inside_margins:
            zy = floor_in + m
            z = complex(x_c, zy)
            if clf.classify(z).verdict is not Verdict.INSIDE_PLUS:
                continue
            d = (zy - floor_out) + m
            y0 = zy - d  # certified-outside band, margin m below floor_out
            y1 = zy + 2.0 * d  # the 2:1 height split, exact by construction
            if y0 <= 0.0:
                continue
            for u in search.half_widths:
                if 2.0 * u >= 2.0:
                    continue
                q = AxisRectangle(x_c - u, x_c + u, y0, y1)
                if all(
                    clf.classify(p).verdict is Verdict.OUTSIDE_CERTIFIED
                    for p in _side_points(q, search.side_samples)
                ):
                    return q, z
    except _BudgetExhausted:
        raise WitnessSearchError(
            "search budget exhausted before a certified rectangle was found",
            _boundary_profile(classifier, search.strip),
        ) from None
    except _ProbeFailed as exc:
        raise WitnessSearchError(str(exc), _boundary_profile(classifier, search.strip)) from None
    raise WitnessSearchError(
        "no certified rectangle found within the search ladder",
        _boundary_profile(classifier, search.strip),
    )


def build_R(q: AxisRectangle, z) -> AxisRectangle:
    """The reflected rectangle {w : 3z - w in Q}; exact bound arithmetic."""
    z = complex(z)
    if not q.contains_interior(z):
        raise ValueError("z must be interior to Q")
    return AxisRectangle(
        3.0 * z.real - q.re_max,
        3.0 * z.real - q.re_min,
        3.0 * z.imag - q.im_max,
        3.0 * z.imag - q.im_min,
    )


@dataclass
class WitnessReport:
    Q: AxisRectangle
    z: complex
    R: AxisRectangle
    interior_sample_verdict: AMembership
    boundary_samples: list  # [(w, AMembership), ...]
    component_count_window: Window | None
    components_found: int
    all_certified: bool
    offending_samples: tuple = ()
    sample_spacing: float = 0.0
    inward_margin: float = 0.0
    per_translate: list = field(default_factory=list)

    def to_json_dict(
        self, *, include_samples: bool = True, cfg_meta: dict | None = None
    ) -> dict:
        verdict_counts: dict[str, int] = {}
        for _, rec in self.boundary_samples:
            key = rec.verdict.value
            verdict_counts[key] = verdict_counts.get(key, 0) + 1
        out = {
            "q": self.Q.describe(),
            "z": [self.z.real, self.z.imag],
            "r": self.R.describe(),
            "interior_verdict": {
                "verdict": self.interior_sample_verdict.verdict.value,
                "n": self.interior_sample_verdict.n,
            },
            "boundary_samples": {
                "count": len(self.boundary_samples),
                "spacing": self.sample_spacing,
                "inward_margin": self.inward_margin,
                "verdicts": verdict_counts,
                "offending": [[w.real, w.imag] for w in self.offending_samples],
            },
            "components": {
                "found": self.components_found,
                "window": (
                    self.component_count_window.describe()
                    if self.component_count_window
                    else None
                ),
                "per_translate": self.per_translate,
            },
            "all_certified": self.all_certified,
            "cfg": cfg_meta or {},
        }
        if include_samples:
            out["boundary_samples"]["points"] = [
                {"w": [w.real, w.imag], "verdict": rec.verdict.value, "n": rec.n}
                for w, rec in self.boundary_samples
            ]
        return out


def _rect_boundary_samples(r: AxisRectangle, spacing: float):
    """(point, inward unit normal) pairs along the four sides, corners included."""
    nx = max(2, math.ceil(r.width / spacing) + 1)
    ny = max(2, math.ceil(r.height / spacing) + 1)
    xs = [r.re_min + r.width * k / (nx - 1) for k in range(nx)]
    ys = [r.im_min + r.height * k / (ny - 1) for k in range(ny)]
    pts = [(complex(x, r.im_max), complex(0.0, -1.0)) for x in xs]  # top
    pts += [(complex(x, r.im_min), complex(0.0, 1.0)) for x in xs]  # bottom
    pts += [(complex(r.re_min, y), complex(1.0, 0.0)) for y in ys]  # left
    pts += [(complex(r.re_max, y), complex(-1.0, 0.0)) for y in ys]  # right
    return pts


def verify_witness(
    q: AxisRectangle,
    z,
    cfg: ClassifierConfig | None = None,
    *,
    classifier=None,
    spacing: float | None = None,
    margin_pixels: float = 2.0,
    raster_rows: int = 64,
) -> WitnessReport:
    """Check the witness predicates for (Q, z) by honest classification.

    Interior: a_membership(3z, 2z) must be Member.  Boundary: every sample
    on the four sides of R -- and its copy nudged inward by margin_pixels
    raster pitches -- must be NonMemberCertified.  Sample spacing defaults
    to half the raster pixel pitch (R height / raster_rows / 2).
    all_certified reports the conjunction; failures are listed, not raised.
    """
    if cfg is None:
        cfg = ClassifierConfig()
    if classifier is None:
        classifier = RealClassifier(cfg)
    z = complex(z)
    if not q.contains_interior(z):
        raise ValueError("z must be interior to Q")
    base = 3.0 * z
    base_verdict = classifier.classify(base)
    if base_verdict.verdict is not Verdict.INSIDE_PLUS:
        raise ValueError("base point not certified in M+")
    r = build_R(q, z)
    pitch = r.height / raster_rows
    if spacing is None:
        spacing = pitch / 2.0
    margin = margin_pixels * pitch

    interior = membership_with(classifier, base, 2.0 * z)

    boundary = []
    offending = []
    for w, inward in _rect_boundary_samples(r, spacing):
        rec = membership_with(classifier, base, w)
        boundary.append((w, rec))
        ok = rec.verdict is AVerdict.NON_MEMBER_CERTIFIED
        if ok and margin > 0.0:
            nudged = membership_with(classifier, base, w + margin * inward)
            ok = nudged.verdict is AVerdict.NON_MEMBER_CERTIFIED
        if not ok:
            offending.append(w)

    all_certified = interior.verdict is AVerdict.MEMBER and not offending
    return WitnessReport(
        Q=q,
        z=z,
        R=r,
        interior_sample_verdict=interior,
        boundary_samples=boundary,
        component_count_window=None,
        components_found=0,
        all_certified=all_certified,
        offending_samples=tuple(offending),
        sample_spacing=spacing,
        inward_margin=margin,
    )


@dataclass
class TranslateCount:
    """Per-translate component accounting for the counting raster."""

    index: int
    re_min: float
    re_max: float
    component_labels: tuple[int, ...]
    member_point_ok: bool
    ok: bool

    def describe(self) -> dict:
        return {
            "translate": self.index,
            "re_min": self.re_min,
            "re_max": self.re_max,
            "components": list(self.component_labels),
            "member_point_ok": self.member_point_ok,
            "ok": self.ok,
        }


@dataclass
class ComponentsNearInfinity:
    window: Window
    raster: Raster
    report: ComponentReport
    per_translate: list[TranslateCount]
    straddlers: tuple[int, ...]
    components_found: int
    ok: bool


def _bbox_bounds(win: Window, comp: Component):
    i_min, j_min, i_max, j_max = comp.bbox
    lo = win.pixel_center(i_max, j_min)
    hi = win.pixel_center(i_min, j_max)
    return lo.real, hi.real


def components_near_infinity(
    z,
    k: int,
    cfg: ClassifierConfig | None = None,
    *,
    rectangle: AxisRectangle,
    classifier=None,
    cols: int = 1024,
    rows: int = 64,
    workers: int = 1,
) -> ComponentsNearInfinity:
    """Count locus components over k horizontal translates R + 2j.

    Pre-condition: (Q, z0) passed verify_witness and z = 3*z0, rectangle = R.
    ok is True when each translate contains its own component (holding the
    translated member point 2z/3 + 2j), no component straddles translates,
    and at least k components are found.
    """
    if k < 1:
        raise ValueError("need k >= 1 translates")
    if cfg is None:
        cfg = ClassifierConfig()
    if classifier is None:
        classifier = RealClassifier(cfg)
    z = complex(z)
    r = rectangle
    win = Window.from_bounds(
        r.re_min, r.re_max + 2.0 * (k - 1), r.im_min, r.im_max, cols, rows
    )
    raster = rasterize_a_slice(z, win, cfg, classifier=classifier, workers=workers)
    report = components(raster)

    bounds = {c.label: _bbox_bounds(win, c) for c in report.components}
    owner: dict[int, int] = {}
    straddlers = []
    for c in report.components:
        lo, hi = bounds[c.label]
        for j in range(k):
            if lo >= r.re_min + 2.0 * j and hi <= r.re_max + 2.0 * j:
                owner[c.label] = j
                break
        else:
            straddlers.append(c.label)

    per_translate = []
    all_ok = True
    for j in range(k):
        labels = tuple(sorted(lbl for lbl, o in owner.items() if o == j))
        member_pt = (2.0 / 3.0) * z + 2.0 * j
        i, jj = win.pixel_of(member_pt)
        member_ok = bool(
            0 <= i < win.rows
            and 0 <= jj < win.cols
            and raster.cells[i, jj] == CELL_MEMBER
        )
        ok = bool(labels) and member_ok
        all_ok = all_ok and ok
        per_translate.append(
            TranslateCount(
                index=j,
                re_min=r.re_min + 2.0 * j,
                re_max=r.re_max + 2.0 * j,
                component_labels=labels,
                member_point_ok=member_ok,
                ok=ok,
            )
        )
    ok = all_ok and not straddlers and report.count >= k
    return ComponentsNearInfinity(
        window=win,
        raster=raster,
        report=report,
        per_translate=per_translate,
        straddlers=tuple(straddlers),
        components_found=report.count,
        ok=ok,
    )
