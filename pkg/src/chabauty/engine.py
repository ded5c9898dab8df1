"""Numerical Chabauty topology on closed subgroups of PSL(2,R).

Group elements are embedded in C^2 through their SU(1,1) pair (alpha, beta);
the distance between two embedded points is the Euclidean distance minimized
over the sign ambiguity, which makes the embedding a proper, continuous
injection of PSL(2,R).  A closed subgroup is then approximated inside the
ball of radius R about the identity by a finite point cloud, and geometric
convergence becomes local Hausdorff convergence of those clouds.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

import numpy as np
from scipy.spatial import cKDTree

from . import mobius as mb

log = logging.getLogger(__name__)

Q_MAX = 10**6
RATIONAL_TOL = 1e-12
MAX_POINTS = 200_000
CHANCE_MATCH = 0.1


class EngineError(ValueError):
    pass


# -- subgroup taxonomy ------------------------------------------------------


@dataclass(frozen=True)
class Trivial:
    tag = "Trivial"


@dataclass(frozen=True)
class FiniteElliptic:
    center: complex
    order: int
    rational_by_bound: bool = field(default=False, compare=False)
    tag = "FiniteElliptic"

    def __post_init__(self):
        if int(self.order) < 2:
            raise EngineError("finite elliptic subgroups have order >= 2")
        if abs(self.center) >= 1.0:
            raise EngineError("elliptic center must lie inside the disk")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "center", complex(self.center))

    def generator(self) -> mb.DiskAutomorphism:
        return mb.rotation(mb.TWO_PI / self.order, self.center)


@dataclass(frozen=True)
class CyclicHyperbolic:
    generator: mb.DiskAutomorphism
    tag = "CyclicHyperbolic"

    def __post_init__(self):
        if not isinstance(closure_classify(self.generator), mb.Hyperbolic):
            raise EngineError("CyclicHyperbolic needs a hyperbolic generator")


@dataclass(frozen=True)
class CyclicParabolic:
    generator: mb.DiskAutomorphism
    tag = "CyclicParabolic"

    def __post_init__(self):
        if not isinstance(closure_classify(self.generator), mb.Parabolic):
            raise EngineError("CyclicParabolic needs a parabolic generator")

    @property
    def fixed_point(self) -> complex:
        return closure_classify(self.generator).fixed_point

    @property
    def scale(self) -> float:
        """|s| for the generator written as the parabolic (1 + i s, -i s xi)."""
        m = mb.to_su11(self.generator)
        return abs(m.alpha.imag) / abs(m.alpha.real)


@dataclass(frozen=True)
class OneParamElliptic:
    center: complex
    rational_by_bound: bool = field(default=False, compare=False)
    tag = "OneParamElliptic"

    def __post_init__(self):
        if abs(self.center) >= 1.0:
            raise EngineError("elliptic center must lie inside the disk")
        object.__setattr__(self, "center", complex(self.center))


@dataclass(frozen=True)
class OneParamParabolic:
    fixed_point: complex
    tag = "OneParamParabolic"

    def __post_init__(self):
        xi = complex(self.fixed_point)
        object.__setattr__(self, "fixed_point", xi / abs(xi))


@dataclass(frozen=True)
class OneParamHyperbolic:
    axis_endpoints: tuple[complex, complex]
    tag = "OneParamHyperbolic"

    def __post_init__(self):
        p, q = (complex(z) / abs(z) for z in self.axis_endpoints)
        if abs(p - q) < 1e-15:
            raise EngineError("axis endpoints coincide")
        object.__setattr__(self, "axis_endpoints", (p, q))


@dataclass(frozen=True)
class ExtendedStratum:
    """Escape hatch for limit strata outside the seven baseline types.

    The classification realizes none; the variant exists so that foreign
    data can be represented and rejected explicitly instead of coerced.
    """

    name: str
    data: tuple = ()
    tag = "ExtendedStratum"


ClosedSubgroup = Union[
    Trivial, FiniteElliptic, CyclicHyperbolic, CyclicParabolic,
    OneParamElliptic, OneParamParabolic, OneParamHyperbolic, ExtendedStratum,
]

BASELINE_TAGS = (
    "Trivial", "FiniteElliptic", "CyclicHyperbolic", "CyclicParabolic",
    "OneParamElliptic", "OneParamParabolic", "OneParamHyperbolic",
)


def cyclic_parabolic(fixed_point: complex, scale: float) -> CyclicParabolic:
    return CyclicParabolic(mb.parabolic(fixed_point, abs(scale)))


def cyclic_hyperbolic(length: float, attracting: complex, repelling: complex) -> CyclicHyperbolic:
    return CyclicHyperbolic(mb.from_su11(mb.axis_translation_matrix(length, attracting, repelling)))


def conjugate_subgroup(h: mb.DiskAutomorphism, G: ClosedSubgroup) -> ClosedSubgroup:
    """h G h^{-1}."""
    if isinstance(G, Trivial):
        return G
    if isinstance(G, FiniteElliptic):
        return FiniteElliptic(h(G.center), G.order, G.rational_by_bound)
    if isinstance(G, (CyclicHyperbolic, CyclicParabolic)):
        return type(G)(mb.conjugate(h, G.generator))
    if isinstance(G, OneParamElliptic):
        return OneParamElliptic(h(G.center), G.rational_by_bound)
    if isinstance(G, OneParamParabolic):
        return OneParamParabolic(h(G.fixed_point))
    if isinstance(G, OneParamHyperbolic):
        p, q = G.axis_endpoints
        return OneParamHyperbolic((h(p), h(q)))
    raise EngineError(f"cannot conjugate {G!r}")


# -- embedding --------------------------------------------------------------


def embed(g: mb.DiskAutomorphism) -> np.ndarray:
    m = mb.to_su11(g)
    return np.array([m.alpha, m.beta], dtype=complex)


def _as_real(points: np.ndarray) -> np.ndarray:
    """(N, d) complex -> (N, 2d) real."""
    pts = np.asarray(points, dtype=complex).reshape(len(points), -1)
    return np.concatenate([pts.real, pts.imag], axis=1)


def identity_distance(points: np.ndarray) -> np.ndarray:
    """Element distance from each embedded point to the identity."""
    a, b = points[:, 0], points[:, 1]
    one = np.where(a.real >= 0, 1.0, -1.0)
    return np.sqrt(np.abs(a - one) ** 2 + np.abs(b) ** 2)


def _products(a1, b1, a2, b2):
    return a1 * a2 + b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2)


def _conjugate_pairs(frame: mb.Su11Matrix, a, b):
    ga, gb = frame.alpha, frame.beta
    a1, b1 = _products(ga, gb, a, b)
    return _products(a1, b1, np.conj(ga), -gb)


# -- one-parameter curves ---------------------------------------------------


@dataclass(frozen=True)
class _Curve:
    """t -> frame . core(t) . frame^{-1} for one of three normalized cores."""

    kind: str  # "elliptic" | "hyperbolic" | "parabolic"
    frame: mb.Su11Matrix

    def points(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "elliptic":
            a = np.exp(0.5j * t)
            b = np.zeros_like(a)
        elif self.kind == "hyperbolic":
            a = np.cosh(0.5 * t) + 0j
            b = np.sinh(0.5 * t) + 0j
        else:
            a = 1.0 + 1j * t
            b = -1j * t
        a, b = _conjugate_pairs(self.frame, a, b)
        return np.stack([a, b], axis=1)

    def dist(self, t: float) -> float:
        return float(identity_distance(self.points(np.array([t])))[0])

    @property
    def periodic(self) -> bool:
        return self.kind == "elliptic"


def _curve_for(G: ClosedSubgroup) -> tuple[_Curve, Optional[float]]:
    """The one-parameter group containing G, and the lattice step of G (None if continuous)."""
    if isinstance(G, (FiniteElliptic, OneParamElliptic)):
        curve = _Curve("elliptic", mb.boost_matrix(G.center))
        step = mb.TWO_PI / G.order if isinstance(G, FiniteElliptic) else None
        return curve, step
    if isinstance(G, (CyclicHyperbolic, OneParamHyperbolic)):
        if isinstance(G, CyclicHyperbolic):
            cls = closure_classify(G.generator)
            ends, step = (cls.attracting, cls.repelling), cls.translation_length
        else:
            ends, step = G.axis_endpoints, None
        return _Curve("hyperbolic", mb.axis_frame(*ends)), step
    if isinstance(G, (CyclicParabolic, OneParamParabolic)):
        if isinstance(G, CyclicParabolic):
            xi, step = G.fixed_point, G.scale
        else:
            xi, step = G.fixed_point, None
        frame = mb.Su11Matrix(np.exp(0.5j * np.angle(xi)), 0.0)
        return _Curve("parabolic", frame), step
    raise EngineError(f"no one-parameter model for {G!r}")


def _window_extent(curve: _Curve, bound: float) -> float:
    """Largest |t| with distance-to-identity <= bound (monotone in |t| on a half period)."""
    if curve.periodic:
        hi = math.pi
        if curve.dist(hi) <= bound:
            return hi
    else:
        hi = 1.0
        while curve.dist(hi) <= bound and curve.dist(-hi) <= bound:
            hi *= 2.0
            if hi > 1e6:
                raise EngineError("window extent search diverged")
    lo = 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if max(curve.dist(mid), curve.dist(-mid)) <= bound:
            lo = mid
        else:
            hi = mid
    return hi


def _speed(curve: _Curve, t: float) -> float:
    h = 1e-7
    p = curve.points(np.array([t - h, t + h]))
    return float(np.linalg.norm(p[1] - p[0]) / (2 * h))


def _max_gap(points: np.ndarray) -> float:
    if len(points) < 2:
        return 0.0
    d = np.diff(points, axis=0)
    return float(np.sqrt((np.abs(d) ** 2).sum(axis=1)).max())


# -- samples ----------------------------------------------------------------


@dataclass(eq=False)
class SubgroupSample:
    window_radius: float
    points: np.ndarray  # (N, 2) complex
    params: np.ndarray  # (N,) index or parameter value
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex).reshape(-1, 2)
        self.params = np.asarray(self.params, dtype=float).reshape(-1)
        self.points.setflags(write=False)
        self.params.setflags(write=False)
        self._tree = None
        self._norms = None

    def __len__(self):
        return len(self.points)

    @property
    def identity_distances(self) -> np.ndarray:
        if self._norms is None:
            self._norms = identity_distance(self.points) if len(self.points) else np.zeros(0)
        return self._norms

    def within(self, radius: float) -> np.ndarray:
        return self.points[self.identity_distances <= radius]

    def restricted(self, radius: float) -> "SubgroupSample":
        """The sub-sample inside the ball of the given radius (cached per radius)."""
        cache = self.__dict__.setdefault("_restricted", {})
        if radius not in cache:
            keep = self.identity_distances <= radius
            cache[radius] = self if keep.all() else SubgroupSample(
                radius, self.points[keep], self.params[keep], self.provenance)
        return cache[radius]

    def tree(self) -> cKDTree:
        if self._tree is None:
            both = np.concatenate([self.points, -self.points]) if len(self.points) else self.points
            self._tree = cKDTree(_as_real(both))
        return self._tree

    def to_csv(self) -> str:
        from .codec import fmt

        lines = ["n_or_t,re_alpha,im_alpha,re_beta,im_beta"]
        for t, (a, b) in zip(self.params, self.points):
            lines.append(",".join(fmt(x) for x in (t, a.real, a.imag, b.real, b.imag)))
        return "\n".join(lines) + "\n"


def _sample_lattice(curve: _Curve, step: float, bound: float, resolution: float, exact: bool) -> tuple:
    """Points curve(k * step) inside the bound, thinned to at most MAX_POINTS."""
    t_max = _window_extent(curve, bound)
    if curve.periodic:
        count = int(round(mb.TWO_PI / step))
        k_lo = -((count - 1) // 2) if t_max >= math.pi else -int(math.floor(t_max / step))
        k_hi = count // 2 if t_max >= math.pi else int(math.floor(t_max / step))
    else:
        k_hi = int(math.floor(t_max / step))
        k_lo = -k_hi
    stride = 1
    total = k_hi - k_lo + 1
    if total > MAX_POINTS:
        # thin a too-fine lattice while keeping spacing well below the resolution
        speed = max(_speed(curve, 0.0), _speed(curve, t_max), _speed(curve, -t_max))
        stride = max(1, int(math.floor(0.25 * resolution / (speed * step))))
        stride = max(stride, int(math.ceil(total / MAX_POINTS)) if exact else stride)
    k = np.arange(k_lo, k_hi + 1, stride) if stride == 1 else _centered(k_lo, k_hi, stride)
    t = k * step
    pts = curve.points(t)
    keep = identity_distance(pts) <= bound
    return k[keep], t[keep], pts[keep], stride


def _centered(k_lo, k_hi, stride):
    pos = np.arange(0, k_hi + 1, stride)
    neg = -np.arange(stride, -k_lo + 1, stride)[::-1]
    return np.concatenate([neg, pos])


def sample(G: ClosedSubgroup, R: float, resolution: float) -> SubgroupSample:
    """Finite approximation of G inside the element ball of radius R + 2 * resolution."""
    if not resolution > 0:
        raise EngineError("resolution must be positive")
    if not R > 0:
        raise EngineError("window radius must be positive")
    return _sample_cached(G, float(R), float(resolution))


@functools.lru_cache(maxsize=512)
def _sample_cached(G: ClosedSubgroup, R: float, resolution: float) -> SubgroupSample:
    margin = 2.0 * resolution
    bound = R + margin
    prov: dict[str, Any] = {"stratum": G.tag, "margin": margin, "resolution": resolution}
    if isinstance(G, Trivial):
        return SubgroupSample(R, np.array([[1.0, 0.0]]), np.array([0.0]), prov)
    if isinstance(G, ExtendedStratum):
        raise EngineError(f"no sampler for extended stratum {G.name!r}")
    curve, step = _curve_for(G)
    if step is not None:
        if isinstance(G, CyclicHyperbolic) and step < resolution:
            log.warning("sample indistinguishable from one-parameter group at this resolution")
            prov["warning"] = "sample indistinguishable from one-parameter group at this resolution"
        k, t, pts, stride = _sample_lattice(curve, step, bound, resolution, exact=True)
        prov.update(max_power=int(np.abs(k).max()) if len(k) else 0, stride=stride, step=step)
        return SubgroupSample(R, pts, k, prov)
    # continuous group: uniform lattice in the parameter, refined until gaps <= resolution
    t_max = _window_extent(curve, bound)
    speed = max(_speed(curve, 0.0), _speed(curve, t_max), _speed(curve, -t_max), 1e-300)
    h = 0.5 * resolution / speed
    for _ in range(20):
        if curve.periodic:
            h = mb.TWO_PI / math.ceil(mb.TWO_PI / h)
        if 2 * t_max / h > 4 * MAX_POINTS:
            raise EngineError("resolution too fine for this window")
        k, t, pts, _ = _sample_lattice(curve, h, bound, resolution, exact=False)
        gap = _max_gap(pts)
        if gap <= resolution:
            break
        h *= 0.9 * resolution / gap
    prov.update(grid_step=h, max_gap=gap)
    return SubgroupSample(R, pts, t, prov)


# -- distances --------------------------------------------------------------


def directed_distance(src: np.ndarray, target: "SubgroupSample | np.ndarray") -> float:
    """sup over src of the distance to the nearest target point (min over signs)."""
    if len(src) == 0:
        return 0.0
    if not isinstance(target, SubgroupSample):
        target = SubgroupSample(0.0, target, np.zeros(len(target)))
    if len(target) == 0:
        return math.inf
    d, _ = target.tree().query(_as_real(src))
    return float(np.max(d))


def hausdorff(A: SubgroupSample, B: SubgroupSample) -> float:
    """Hausdorff distance between two samples; empty vs empty is 0, empty vs nonempty is inf."""
    if A.window_radius != B.window_radius:
        raise EngineError("samples have different window radii")
    if len(A) == 0 and len(B) == 0:
        return 0.0
    if len(A) == 0 or len(B) == 0:
        return math.inf
    return max(directed_distance(A.points, B), directed_distance(B.points, A))


def local_directed(A: SubgroupSample, B: SubgroupSample, radius: float) -> float:
    """sup over points a of A in the ball of min(d(a, B in the ball), radius - |a|).

    The second term is the distance from a to the window boundary, so points
    near the edge cannot dominate and points crossing it do not cause jumps.
    """
    a_norms = A.identity_distances
    keep = a_norms <= radius
    src = A.points[keep]
    if len(src) == 0:
        return 0.0
    slack = radius - a_norms[keep]
    target = B.restricted(radius)
    if len(target) == 0:
        return float(np.max(slack))
    d, _ = target.tree().query(_as_real(src))
    return float(np.max(np.minimum(d, slack)))


def chabauty_distance(G: ClosedSubgroup, H: ClosedSubgroup, R: float, resolution: float) -> float:
    """Local Hausdorff distance of G and H in the ball of radius R.

    Equals the Hausdorff distance of (G in the ball) and (H in the ball), each
    joined with the boundary sphere, so it is a metric and is continuous in G, H.
    """
    A = sample(G, R, resolution)
    B = sample(H, R, resolution)
    return max(local_directed(A, B, R), local_directed(B, A, R))


# -- closures of cyclic groups ----------------------------------------------


def rational_angle(x: float, q_max: int = Q_MAX, tol: float = RATIONAL_TOL) -> Optional[Fraction]:
    """p/q (q <= q_max) within tol of x, from the continued-fraction expansion; None if none."""
    f = Fraction(x).limit_denominator(q_max)
    if abs(x - f.numerator / f.denominator) <= tol:
        return f
    return None


EPS_MACH = 2.220446049250313e-16


def _conditioning(m: mb.Su11Matrix) -> float:
    return max(1.0, abs(m.alpha) ** 2)


def closure_classify(g) -> mb.IsometryClass:
    """classify with a threshold scaled to the rounding error of the trace."""
    m = g if isinstance(g, mb.Su11Matrix) else mb.to_su11(g)
    return mb.classify(m, eps=64.0 * EPS_MACH * _conditioning(m))


def angle_tolerance(m: mb.Su11Matrix, center: complex) -> float:
    """Rationality tolerance for the rotation number of an elliptic element.

    Equals RATIONAL_TOL for well-conditioned elements and grows with the
    rounding error of the measured angle when |alpha| is large or the center
    is close to the boundary circle.
    """
    k = max(_conditioning(m), 1.0 / (1.0 - abs(center) ** 2))
    return max(RATIONAL_TOL, 256.0 * EPS_MACH * k)


def closure_of_cyclic(g: mb.DiskAutomorphism) -> ClosedSubgroup:
    m = mb.to_su11(g)
    cls = closure_classify(m)
    if isinstance(cls, mb.Identity):
        return Trivial()
    if isinstance(cls, mb.Hyperbolic):
        return CyclicHyperbolic(g)
    if isinstance(cls, mb.Parabolic):
        return CyclicParabolic(g)
    tol = angle_tolerance(m, cls.center)
    # beyond 1/sqrt(tol) almost every number has a convergent within tol
    q_max = min(Q_MAX, int(1.0 / math.sqrt(tol)))
    frac = rational_angle(cls.angle / mb.TWO_PI, q_max, tol)
    if frac is None:
        return OneParamElliptic(cls.center, rational_by_bound=True)
    q = frac.denominator
    if q == 1:
        return Trivial()
    # about q^2 tol of all reals have a convergent this good by chance
    return FiniteElliptic(cls.center, q, rational_by_bound=q * q * tol > CHANCE_MATCH)


# -- verifying a limit --------------------------------------------------------


@dataclass
class LimitReport:
    candidate: ClosedSubgroup
    schedule: list[int]
    distances: list[float]
    coverage: list[float]  # candidate -> G_n (every candidate point approximated)
    excess: list[float]  # G_n -> candidate (no far G_n points)
    errors: dict[int, str]
    tol: float
    resolution: float
    passed: bool
    reason: str = ""

    def to_json(self) -> dict:
        from .codec import subgroup_to_json

        return {
            "candidate": subgroup_to_json(self.candidate),
            "schedule": list(self.schedule),
            "distances": [_jsonable(d) for d in self.distances],
            "coverage": [_jsonable(d) for d in self.coverage],
            "excess": [_jsonable(d) for d in self.excess],
            "errors": {str(k): v for k, v in self.errors.items()},
            "tol": self.tol,
            "resolution": self.resolution,
            "pass": self.passed,
            "reason": self.reason,
        }


def _jsonable(x: float):
    return None if not math.isfinite(x) else x


def limit_verify(family, candidate: ClosedSubgroup, R: float, tol: float, schedule,
                 resolution: Optional[float] = None) -> LimitReport:
    """Chabauty distance of closure(<g_n>) to the candidate along the schedule.

    PASS iff the last distance is below tol and the last three distances are
    non-increasing, where values below the engine's noise floor of
    2 * resolution count as equal.
    """
    from .family import parse_schedule

    schedule = parse_schedule(schedule)
    if resolution is None:
        resolution = tol / 4.0
    B = sample(candidate, R, resolution)
    distances, coverage, excess, errors = [], [], [], {}
    for n in schedule:
        try:
            G = closure_of_cyclic(family.evaluate(n))
            A = sample(G, R, resolution)
        except (mb.MobiusError, EngineError, ValueError) as exc:
            errors[n] = f"{type(exc).__name__}: {exc}"
            distances.append(math.nan)
            coverage.append(math.nan)
            excess.append(math.nan)
            continue
        cov = local_directed(B, A, R)
        exc_ = local_directed(A, B, R)
        coverage.append(cov)
        excess.append(exc_)
        distances.append(max(cov, exc_))
    passed, reason = _pass_rule(distances, tol, 2.0 * resolution)
    return LimitReport(candidate, schedule, distances, coverage, excess, errors, tol, resolution, passed, reason)


def _pass_rule(d: list[float], tol: float, floor: float) -> tuple[bool, str]:
    tail = d[-3:]
    if len(tail) < 3:
        return False, "schedule shorter than three checkpoints"
    if any(not math.isfinite(x) for x in tail):
        return False, "evaluation failed in the tail"
    if tail[-1] >= tol:
        return False, f"final distance {tail[-1]:.3g} not below tol {tol:.3g}"
    for a, b in zip(tail, tail[1:]):
        if b > max(a, floor):
            return False, "distances increase in the tail"
    return True, "ok"
