"""Geometric limits of one-generator closed subgroups, in closed form.

Every limit of closures of cyclic groups is a closed abelian subgroup, hence
lives inside a one-parameter subgroup; the seven baseline strata of
:mod:`chabauty.engine` exhaust them.  Which stratum a degenerating family
lands in is decided by a handful of limits:

* the closure order q_n of elliptic generators and the limit of their centers;
* the axis endpoints and translation lengths of hyperbolic generators;
* one scale-coupling quantity, the *parabolic scale*

      sigma = 2 sin(pi/q) / (1 - |c|^2)      (elliptic, center c, order q)
      sigma = 2 sinh(l/2) / (1 - rho^2)      (hyperbolic, length l, axis at
                                              Euclidean distance rho from 0)
      sigma = |s|                            (parabolic (1 + i s, -i s xi))

  which is the size of the shortest nontrivial element once the fixed data
  escapes to a boundary point xi.  sigma -> 0 gives the full parabolic group
  at xi, a finite positive limit the cyclic parabolic group of that scale,
  and sigma -> infinity the trivial group.

Two charts cover the closure.  ES holds the elliptic side as
(Re c, Im c, v) with v = sigma / (1 + sigma); HS holds the hyperbolic side as
(phi, rho, v) where the axis is the geodesic perpendicular to the diameter
through e^{i phi} (phi in [0, pi)) crossing it at rho e^{i phi}.  Both charts
reach the parabolic strata on their boundary (|c| = 1, resp. |rho| = 1) with
the same v, and the trivial group at v = 1; that common locus is where they
are glued.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import engine as en
from . import mobius as mb
from .family import FamilyDescriptor, parse_schedule

SEAM_TOL = 1e-9
EXPONENT_CUT = 0.2
TAIL = 4
EXTRAPOLATION_POINTS = 8


class AtlasError(ValueError):
    pass


class UnclassifiedLimitError(AtlasError):
    pass


class ChartError(AtlasError):
    pass


# -- tail analysis ----------------------------------------------------------


def richardson(ns, xs):
    """Value at 1/n = 0 of the interpolating polynomial in 1/n (Neville)."""
    h = [1.0 / n for n in ns]
    p = list(xs)
    m = len(p)
    for k in range(1, m):
        for i in range(m - k):
            p[i] = (h[i] * p[i + 1] - h[i + k] * p[i]) / (h[i] - h[i + k])
    return p[0]


@dataclass
class Trend:
    status: str  # "zero" | "finite" | "infinite" | "divergent"
    value: float
    exponents: list[float]
    increments: list[float]


def trend(ns, xs) -> Trend:
    """Classify the behaviour of a nonnegative tail sequence."""
    xs = [float(x) for x in xs]
    ns = list(ns)
    incr = [b - a for a, b in zip(xs, xs[1:])]
    if all(x == 0.0 for x in xs[-2:]):
        return Trend("zero", 0.0, [], incr)
    if any(math.isinf(x) for x in xs[-2:]):
        return Trend("infinite", math.inf, [], incr)
    exps = []
    for (n0, x0), (n1, x1) in zip(zip(ns, xs), zip(ns[1:], xs[1:])):
        if x0 > 0 and x1 > 0:
            exps.append(math.log(x1 / x0) / math.log(n1 / n0))
        else:
            exps.append(-math.inf if x1 == 0 else math.inf)
    last = exps[-2:]
    if last and all(p <= -EXPONENT_CUT for p in last):
        return Trend("zero", 0.0, exps, incr)
    if last and all(p >= EXPONENT_CUT for p in last):
        return Trend("infinite", math.inf, exps, incr)
    value = richardson(ns[-EXTRAPOLATION_POINTS:], xs[-EXTRAPOLATION_POINTS:])
    scale = max(abs(x) for x in xs[-2:])
    if len(incr) >= 2 and abs(incr[-1]) > 0.8 * abs(incr[-2]) and abs(incr[-1]) > 1e-9 * scale:
        return Trend("divergent", value, exps, incr)
    if value < 0 and value > -1e-9 * max(1.0, scale):
        value = 0.0
    return Trend("finite", value, exps, incr)


def _extrapolate_point(ns, zs) -> complex:
    k = EXTRAPOLATION_POINTS
    ns, zs = list(ns)[-k:], list(zs)[-k:]
    return complex(richardson(ns, [z.real for z in zs]), richardson(ns, [z.imag for z in zs]))


def _unit(z: complex) -> complex:
    return z / abs(z)


# -- invariants -------------------------------------------------------------


@dataclass
class LimitInvariants:
    family: str
    schedule: list[int]
    trace_limit: float
    fixed_point_limit: object  # complex | tuple[complex, complex] | None
    rate_products: dict
    degeneracy_tag: str
    statuses: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            if isinstance(v, tuple):
                return [enc(x) for x in v]
            if isinstance(v, float) and not math.isfinite(v):
                return "inf" if v > 0 else "-inf"
            return v

        return {
            "family": self.family,
            "schedule": self.schedule,
            "trace_limit": enc(self.trace_limit),
            "fixed_point_limit": enc(self.fixed_point_limit),
            "rate_products": {k: enc(v) for k, v in self.rate_products.items()},
            "degeneracy_tag": self.degeneracy_tag,
            "statuses": self.statuses,
            "certificates": {k: [enc(x) for x in v] for k, v in self.certificates.items()},
        }


def parabolic_scale_elliptic(center: complex, order) -> float:
    if order == math.inf:
        return 0.0
    return 2.0 * math.sin(math.pi / order) / (1.0 - abs(center) ** 2)


def axis_offset(p: complex, q: complex) -> float:
    """Euclidean distance from 0 to the geodesic with endpoints p, q."""
    w = 0.5 * abs(cmath.phase(q / p))  # half of the smaller arc, in (0, pi/2]
    return math.tan(0.25 * math.pi - 0.5 * w)


def parabolic_scale_hyperbolic(length: float, p: complex, q: complex) -> float:
    rho = axis_offset(p, q)
    return 2.0 * math.sinh(0.5 * length) / (1.0 - rho * rho)


def _record(g: mb.DiskAutomorphism) -> dict:
    m = mb.to_su11(g)
    cls = en.closure_classify(m)
    rec = {"kind": cls.tag, "trace": abs(m.trace)}
    if isinstance(cls, mb.Elliptic):
        G = en.closure_of_cyclic(g)
        order = G.order if isinstance(G, en.FiniteElliptic) else math.inf
        if isinstance(G, en.FiniteElliptic) and G.rational_by_bound:
            order = math.inf  # indistinguishable from an irrational rotation
        if isinstance(G, en.Trivial):
            order = 1
        rec.update(center=cls.center, order=order,
                   sigma=parabolic_scale_elliptic(cls.center, order) if order != 1 else math.inf)
    elif isinstance(cls, mb.Hyperbolic):
        p, q = cls.attracting, cls.repelling
        rec.update(ends=(p, q), length=cls.translation_length,
                   gap=abs(p - q), sigma=parabolic_scale_hyperbolic(cls.translation_length, p, q))
    elif isinstance(cls, mb.Parabolic):
        rec.update(xi=cls.fixed_point, sigma=abs(m.alpha.imag / m.alpha.real))
    return rec


def extract_invariants(family: FamilyDescriptor, schedule="geometric(4, 2, 8)") -> LimitInvariants:
    schedule = parse_schedule(schedule)
    if len(schedule) < 3:
        raise AtlasError("need at least three schedule indices")
    family.check_declared(schedule)
    recs = [_record(family.evaluate(n)) for n in schedule]
    tail = recs[-TAIL:]
    ns = schedule[-TAIL:]
    kinds = {r["kind"] for r in tail}
    traces = [r["trace"] for r in recs]
    trace_limit = richardson(ns, traces[-TAIL:])
    certs = {"trace": traces}
    if kinds == {"identity"}:
        return LimitInvariants(family.name, schedule, 2.0, None, {}, "identity", {}, certs)
    if len(kinds) != 1:
        raise UnclassifiedLimitError(
            f"{family.name}: generators change type along the tail ({sorted(kinds)})"
        )
    kind = kinds.pop()
    if kind == "elliptic":
        return _elliptic_invariants(family, schedule, recs, trace_limit, certs)
    if kind == "hyperbolic":
        return _hyperbolic_invariants(family, schedule, recs, trace_limit, certs)
    return _parabolic_invariants(family, schedule, recs, trace_limit, certs)


def _elliptic_invariants(family, schedule, recs, trace_limit, certs):
    ns = schedule[-TAIL:]
    tail = recs[-TAIL:]
    centers = [r["center"] for r in recs]
    orders = [r["order"] for r in recs]
    certs.update(center=centers, order=[float(q) for q in orders])
    gap = trend(schedule, [1.0 - abs(c) for c in centers])
    q_tail = [r["order"] for r in tail[-3:]]
    # circle groups may interleave with finite groups of increasing order
    finite = [r["order"] for r in tail if r["order"] != math.inf]
    if all(q == q_tail[0] for q in q_tail) and q_tail[0] != math.inf:
        order_status, order = "constant", q_tail[0]
    elif all(b > a for a, b in zip(finite, finite[1:])):
        order_status, order = "growing", math.inf
    else:
        order_status, order = "oscillating", math.nan
    statuses = {"center_gap": gap.status, "closure_order": order_status}
    c_lim = _extrapolate_point(schedule, centers)
    if gap.status == "zero" or abs(c_lim) >= 1.0 - SEAM_TOL:
        sig = trend(schedule, [r["sigma"] for r in recs])
        certs["sigma"] = [r["sigma"] for r in recs]
        statuses["parabolic_scale"] = sig.status
        xi = _boundary_point(schedule, centers)
        rates = {"closure_order": order, "parabolic_scale": sig.value}
        return LimitInvariants(family.name, schedule, trace_limit, xi, rates,
                               "boundary-elliptic", statuses, certs)
    rates = {"closure_order": order}
    return LimitInvariants(family.name, schedule, trace_limit, c_lim, rates,
                           "interior-elliptic", statuses, certs)


def _boundary_point(ns, zs) -> complex:
    """Limit on the circle of points escaping to it, via extrapolation of directions."""
    return _unit(_extrapolate_point(ns, [_unit(z) for z in zs]))


def _hyperbolic_invariants(family, schedule, recs, trace_limit, certs):
    ns = schedule[-TAIL:]
    tail = recs[-TAIL:]
    certs.update(length=[r["length"] for r in recs], endpoint_gap=[r["gap"] for r in recs])
    gap = trend(schedule, [r["gap"] for r in recs])
    statuses = {"endpoint_gap": gap.status}
    if gap.status == "zero":
        sig = trend(schedule, [r["sigma"] for r in recs])
        certs["sigma"] = [r["sigma"] for r in recs]
        statuses["parabolic_scale"] = sig.status
        mids = [r["ends"][0] + r["ends"][1] for r in recs]
        xi = _boundary_point(schedule, mids)
        rates = {"parabolic_scale": sig.value}
        return LimitInvariants(family.name, schedule, trace_limit, xi, rates,
                               "boundary-hyperbolic", statuses, certs)
    length = trend(schedule, [r["length"] for r in recs])
    statuses["translation_length"] = length.status
    p = _unit(_extrapolate_point(schedule, [r["ends"][0] for r in recs]))
    q = _unit(_extrapolate_point(schedule, [r["ends"][1] for r in recs]))
    rates = {"translation_length": length.value}
    return LimitInvariants(family.name, schedule, trace_limit, (p, q), rates,
                           "interior-hyperbolic", statuses, certs)


def _parabolic_invariants(family, schedule, recs, trace_limit, certs):
    ns = schedule[-TAIL:]
    tail = recs[-TAIL:]
    sig = trend(schedule, [r["sigma"] for r in recs])
    certs["sigma"] = [r["sigma"] for r in recs]
    xi = _boundary_point(schedule, [r["xi"] for r in recs])
    return LimitInvariants(family.name, schedule, trace_limit, xi, {"parabolic_scale": sig.value},
                           "parabolic", {"parabolic_scale": sig.status}, certs)


# -- the case table ---------------------------------------------------------


def classify_limit(inv: LimitInvariants) -> en.ClosedSubgroup:
    tag = inv.degeneracy_tag
    st = inv.statuses
    if tag == "identity":
        return en.Trivial()
    if tag == "interior-elliptic":
        if st.get("closure_order") == "constant":
            return en.FiniteElliptic(inv.fixed_point_limit, int(inv.rate_products["closure_order"]))
        if st.get("closure_order") == "growing":
            return en.OneParamElliptic(inv.fixed_point_limit)
    elif tag in ("boundary-elliptic", "boundary-hyperbolic", "parabolic"):
        s = st.get("parabolic_scale")
        xi = inv.fixed_point_limit
        if s == "zero":
            return en.OneParamParabolic(xi)
        if s == "finite":
            scale = inv.rate_products["parabolic_scale"]
            if scale > 0:
                return en.cyclic_parabolic(xi, scale)
        if s == "infinite":
            return en.Trivial()
    elif tag == "interior-hyperbolic":
        s = st.get("translation_length")
        p, q = inv.fixed_point_limit
        if s == "zero":
            return en.OneParamHyperbolic((p, q))
        if s == "finite":
            length = inv.rate_products["translation_length"]
            if length > 0:
                return en.cyclic_hyperbolic(length, p, q)
        if s == "infinite":
            return en.Trivial()
    raise UnclassifiedLimitError(
        f"unclassified: invariants ({tag}, {st}) fall outside the case table"
    )


def predict(family: FamilyDescriptor, schedule="geometric(4, 2, 8)") -> en.ClosedSubgroup:
    return classify_limit(extract_invariants(family, schedule))


# -- strata -----------------------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    tag: str
    charts: tuple[str, ...]
    dimension: int
    description: str


def enumerate_strata() -> list[Stratum]:
    return [
        Stratum("Trivial", ("ES", "HS"), 0, "the trivial group; v = 1 in both charts"),
        Stratum("FiniteElliptic", ("ES",), 2, "rotations by multiples of 2 pi/q about a point, one sheet per q"),
        Stratum("OneParamElliptic", ("ES",), 2, "the full rotation group about a point; v = 0"),
        Stratum("CyclicParabolic", ("ES", "HS"), 2, "discrete parabolic group at xi with scale s; the seam"),
        Stratum("OneParamParabolic", ("ES", "HS"), 1, "full parabolic group at xi; seam with v = 0"),
        Stratum("CyclicHyperbolic", ("HS",), 3, "translations by multiples of l along an axis"),
        Stratum("OneParamHyperbolic", ("HS",), 2, "all translations along an axis; v = 0"),
    ]


# -- charts -----------------------------------------------------------------


@dataclass(frozen=True)
class ChartPoint:
    chart: str  # "ES" | "HS"
    coords: tuple[float, float, float]

    def valid(self) -> bool:
        try:
            G = realize(self)
        except AtlasError:
            return False
        back = coordinates(G, self.chart)
        return _close(back, self) if not isinstance(G, en.Trivial) else True

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)


def _close(p: ChartPoint, q: ChartPoint, tol: float = 1e-9) -> bool:
    return p.chart == q.chart and max(abs(a - b) for a, b in zip(p.coords, q.coords)) <= tol


def _v(sigma: float) -> float:
    return sigma / (1.0 + sigma)


def _sigma(v: float) -> float:
    return v / (1.0 - v)


TRIVIAL_COORDS = (0.0, 0.0, 1.0)


def es_coordinates(G: en.ClosedSubgroup) -> ChartPoint:
    if isinstance(G, en.Trivial):
        return ChartPoint("ES", TRIVIAL_COORDS)
    if isinstance(G, en.FiniteElliptic):
        c = G.center
        return ChartPoint("ES", (c.real, c.imag, _v(parabolic_scale_elliptic(c, G.order))))
    if isinstance(G, en.OneParamElliptic):
        return ChartPoint("ES", (G.center.real, G.center.imag, 0.0))
    if isinstance(G, en.CyclicParabolic):
        xi = G.fixed_point
        return ChartPoint("ES", (xi.real, xi.imag, _v(G.scale)))
    if isinstance(G, en.OneParamParabolic):
        xi = G.fixed_point
        return ChartPoint("ES", (xi.real, xi.imag, 0.0))
    raise ChartError(f"{G.tag} is not on the elliptic side; use the HS chart")


def realize_es(p: ChartPoint) -> en.ClosedSubgroup:
    if p.chart != "ES":
        raise ChartError(f"expected an ES chart point, got {p.chart}")
    x, y, v = p.coords
    if v < 0.0 or v > 1.0 + 1e-12:
        raise ChartError(f"ES scale coordinate {v} outside [0, 1]")
    if v >= 1.0 - 1e-12:
        return en.Trivial()
    c = complex(x, y)
    r = abs(c)
    if r > 1.0 + SEAM_TOL:
        raise ChartError(f"ES center {c} outside the closed disk")
    if r >= 1.0 - SEAM_TOL:
        xi = c / r
        return en.OneParamParabolic(xi) if v == 0.0 else en.cyclic_parabolic(xi, _sigma(v))
    if v == 0.0:
        return en.OneParamElliptic(c)
    s = 0.5 * _sigma(v) * (1.0 - r * r)
    if s > 1.0 + 1e-9:
        raise ChartError("ES point above the order-2 sheet")
    order = max(2, int(round(math.pi / math.asin(min(s, 1.0)))))
    return en.FiniteElliptic(c, order)


def hs_coordinates(G: en.ClosedSubgroup) -> ChartPoint:
    if isinstance(G, en.Trivial):
        return ChartPoint("HS", TRIVIAL_COORDS)
    if isinstance(G, en.CyclicHyperbolic):
        cls = en.closure_classify(G.generator)
        phi, rho = _axis_coords(cls.attracting, cls.repelling)
        sigma = 2.0 * math.sinh(0.5 * cls.translation_length) / (1.0 - rho * rho)
        return ChartPoint("HS", (phi, rho, _v(sigma)))
    if isinstance(G, en.OneParamHyperbolic):
        phi, rho = _axis_coords(*G.axis_endpoints)
        return ChartPoint("HS", (phi, rho, 0.0))
    if isinstance(G, en.CyclicParabolic):
        phi, rho = _seam_coords(G.fixed_point)
        return ChartPoint("HS", (phi, rho, _v(G.scale)))
    if isinstance(G, en.OneParamParabolic):
        phi, rho = _seam_coords(G.fixed_point)
        return ChartPoint("HS", (phi, rho, 0.0))
    raise ChartError(f"{G.tag} is not on the hyperbolic side; use the ES chart")


def _axis_coords(p: complex, q: complex) -> tuple[float, float]:
    a = cmath.phase(p) % mb.TWO_PI
    b = cmath.phase(q) % mb.TWO_PI
    mu = 0.5 * (a + b)
    w = 0.5 * abs(a - b)
    if mu >= math.pi:
        mu -= math.pi
        w = math.pi - w
    return mu, math.tan(0.25 * math.pi - 0.5 * w)


def _seam_coords(xi: complex) -> tuple[float, float]:
    a = cmath.phase(xi) % mb.TWO_PI
    if a >= math.pi:
        return a - math.pi, -1.0
    return a, 1.0


def realize_hs(p: ChartPoint) -> en.ClosedSubgroup:
    if p.chart != "HS":
        raise ChartError(f"expected an HS chart point, got {p.chart}")
    phi, rho, v = p.coords
    if v < 0.0 or v > 1.0 + 1e-12:
        raise ChartError(f"HS scale coordinate {v} outside [0, 1]")
    if v >= 1.0 - 1e-12:
        return en.Trivial()
    if not 0.0 <= phi < math.pi + 1e-12:
        raise ChartError(f"HS direction {phi} outside [0, pi)")
    if abs(rho) > 1.0 + SEAM_TOL:
        raise ChartError(f"HS offset {rho} outside [-1, 1]")
    if abs(rho) >= 1.0 - SEAM_TOL:
        xi = math.copysign(1.0, rho) * cmath.exp(1j * phi)
        return en.OneParamParabolic(xi) if v == 0.0 else en.cyclic_parabolic(xi, _sigma(v))
    w = 0.5 * math.pi - 2.0 * math.atan(rho)
    ends = (cmath.exp(1j * (phi + w)), cmath.exp(1j * (phi - w)))
    if v == 0.0:
        return en.OneParamHyperbolic(ends)
    length = 2.0 * math.asinh(0.5 * _sigma(v) * (1.0 - rho * rho))
    return en.cyclic_hyperbolic(length, *ends)


def realize(p: ChartPoint) -> en.ClosedSubgroup:
    return realize_es(p) if p.chart == "ES" else realize_hs(p)


def coordinates(G: en.ClosedSubgroup, chart: str) -> ChartPoint:
    return es_coordinates(G) if chart == "ES" else hs_coordinates(G)


def in_overlap(p: ChartPoint) -> bool:
    x, y, v = p.coords
    if v >= 1.0 - 1e-12:
        return True
    if p.chart == "ES":
        return abs(abs(complex(x, y)) - 1.0) <= SEAM_TOL
    return abs(abs(y) - 1.0) <= SEAM_TOL


def glue(p: ChartPoint) -> ChartPoint:
    """Transition between the charts along their common parabolic/trivial locus."""
    if not in_overlap(p):
        raise ChartError(f"{p} is not on the gluing locus")
    x, y, v = p.coords
    on_seam = abs(abs(complex(x, y)) - 1.0) <= SEAM_TOL if p.chart == "ES" else abs(abs(y) - 1.0) <= SEAM_TOL
    if not on_seam:
        # v = 1 away from the seam: the trivial group
        return ChartPoint("HS" if p.chart == "ES" else "ES", TRIVIAL_COORDS)
    if p.chart == "ES":
        phi, rho = _seam_coords(complex(x, y))
        return ChartPoint("HS", (phi, rho, v))
    xi = math.copysign(1.0, y) * cmath.exp(1j * x)
    return ChartPoint("ES", (xi.real, xi.imag, v))


# -- continuity moduli ------------------------------------------------------


def random_interior_point(chart: str, rng: np.random.Generator) -> ChartPoint:
    """A random chart point away from the seam (ES points lie on the order lattice)."""
    if chart == "ES":
        r = 0.9 * math.sqrt(rng.uniform())
        c = r * cmath.exp(1j * rng.uniform(0, mb.TWO_PI))
        q = int(rng.integers(2, 60))
        return es_coordinates(en.FiniteElliptic(c, q))
    phi = rng.uniform(0.0, math.pi)
    rho = rng.uniform(-0.9, 0.9)
    v = rng.uniform(0.05, 0.95)
    return ChartPoint("HS", (phi, rho, v))


def continuity_modulus(chart: str, n_pairs: int = 200, delta: float = 1e-3, R: float = 2.0,
                       seed: int = 0) -> float:
    """max over random nearby chart points of chabauty_distance / chart distance."""
    rng = np.random.default_rng(seed)
    resolution = delta / 20.0
    worst = 0.0
    for _ in range(n_pairs):
        p = random_interior_point(chart, rng)
        q = _nudge(p, delta, rng)
        sep = float(np.linalg.norm(p.as_array() - q.as_array()))
        if sep == 0.0:
            continue
        d = en.chabauty_distance(realize(p), realize(q), R, resolution)
        worst = max(worst, d / sep)
    return worst


def _nudge(p: ChartPoint, delta: float, rng) -> ChartPoint:
    if p.chart == "ES":
        # move the center, keep the order sheet
        G = realize_es(p)
        step = 0.5 * delta * cmath.exp(1j * rng.uniform(0, mb.TWO_PI))
        q = es_coordinates(en.FiniteElliptic(G.center + step, G.order))
        if np.linalg.norm(p.as_array() - q.as_array()) > delta:
            scale = delta / np.linalg.norm(p.as_array() - q.as_array())
            q = es_coordinates(en.FiniteElliptic(G.center + scale * step, G.order))
        return q
    d = rng.normal(size=3)
    d *= delta / np.linalg.norm(d)
    return ChartPoint("HS", tuple(float(x) for x in p.as_array() + d))


# -- comparing predictions --------------------------------------------------


def subgroup_data(G: en.ClosedSubgroup) -> tuple:
    """Tag plus the geometric data that pins G down within its stratum."""
    if isinstance(G, en.FiniteElliptic):
        return G.tag, (G.order,), (G.center,), ()
    if isinstance(G, en.OneParamElliptic):
        return G.tag, (), (G.center,), ()
    if isinstance(G, en.CyclicParabolic):
        return G.tag, (), (G.fixed_point,), (G.scale,)
    if isinstance(G, en.OneParamParabolic):
        return G.tag, (), (G.fixed_point,), ()
    if isinstance(G, en.CyclicHyperbolic):
        cls = en.closure_classify(G.generator)
        return G.tag, (), (cls.attracting, cls.repelling), (cls.translation_length,)
    if isinstance(G, en.OneParamHyperbolic):
        return G.tag, (), G.axis_endpoints, ()
    return G.tag, (), (), ()


def same_subgroup(G: en.ClosedSubgroup, H: en.ClosedSubgroup, tol: float = 1e-8) -> bool:
    tg, ig, pg, rg = subgroup_data(G)
    th, ih, ph, rh = subgroup_data(H)
    if tg != th or ig != ih or len(pg) != len(ph):
        return False
    gap = max((abs(a - b) for a, b in zip(pg, ph)), default=0.0)
    if tg == "OneParamHyperbolic":
        # the flow has no preferred direction along its axis
        gap = min(gap, max(abs(pg[0] - ph[1]), abs(pg[1] - ph[0])))
    if gap > tol:
        return False
    return all(abs(a - b) <= tol * max(1.0, abs(a)) for a, b in zip(rg, rh))
