"""Pushing convergent closed sets forward along convergent maps.

Given maps phi_n: X -> Y converging to phi and closed sets F_n -> F (locally
Hausdorff), the images phi_n(F_n) converge to phi(F) provided the maps
converge uniformly on compacts and no mass of F_n escapes to infinity in X
while landing in a bounded part of Y.  This module checks those hypotheses on
finite samples, estimates the limits, and reports the discrepancy.

Spaces are C^1, C^2 (Euclidean) and the group, whose points are SU(1,1)
pairs (alpha, beta) in C^2 with the metric min(|x - y|, |x + y|).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.spatial import cKDTree

from . import engine as en
from . import mobius as mb

SPACES = {"C1": 1, "C2": 2, "group": 2}
TAIL = 3


class PushforwardError(ValueError):
    pass


class NoLimitError(PushforwardError):
    pass


class InconsistentWindowsError(PushforwardError):
    pass


# -- spaces and samples -----------------------------------------------------


def _check_space(space: str) -> int:
    if space not in SPACES:
        raise PushforwardError(f"unknown space {space!r}; expected one of {sorted(SPACES)}")
    return SPACES[space]


def as_points(points, space: str) -> np.ndarray:
    """Complex (N, d) array; a flat list of complex numbers is read as C^1 points."""
    d = _check_space(space)
    arr = np.asarray(points, dtype=complex)
    if arr.size == 0:
        return np.zeros((0, d), dtype=complex)
    if arr.ndim == 1 and d == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] != d:
        raise PushforwardError(f"points of {space} need shape (N, {d}), got {arr.shape}")
    return arr


def _real(points: np.ndarray) -> np.ndarray:
    return np.concatenate([points.real, points.imag], axis=1)


def distances(space: str, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Pointwise distance between two (N, d) arrays."""
    d = np.linalg.norm(x - y, axis=1)
    if space == "group":
        d = np.minimum(d, np.linalg.norm(x + y, axis=1))
    return d


def _tree(space: str, points: np.ndarray) -> cKDTree:
    pts = _real(points)
    if space == "group":
        pts = np.concatenate([pts, -pts])
    return cKDTree(pts)


@dataclass(frozen=True)
class Window:
    center: tuple
    radius: float
    space: str = "C1"

    def __post_init__(self):
        d = _check_space(self.space)
        c = np.atleast_1d(np.asarray(self.center, dtype=complex))
        if c.shape != (d,):
            raise PushforwardError(f"window center for {self.space} needs {d} coordinates")
        if not self.radius > 0:
            raise PushforwardError("window radius must be positive")
        object.__setattr__(self, "center", tuple(complex(z) for z in c))

    @property
    def center_array(self) -> np.ndarray:
        return np.array(self.center, dtype=complex)[None, :]

    def distance(self, points: np.ndarray) -> np.ndarray:
        if len(points) == 0:
            return np.zeros(0)
        return distances(self.space, points, np.broadcast_to(self.center_array, points.shape))

    def contains(self, points: np.ndarray, radius: Optional[float] = None) -> np.ndarray:
        r = self.radius if radius is None else radius
        return self.distance(points) <= r


@dataclass(eq=False)
class ClosedSetSample:
    window: Window
    points: np.ndarray
    n: Optional[int] = None

    def __post_init__(self):
        self.points = as_points(self.points, self.window.space)

    @property
    def space(self) -> str:
        return self.window.space

    def __len__(self) -> int:
        return len(self.points)

    def restricted(self, radius: Optional[float] = None) -> np.ndarray:
        return self.points[self.window.contains(self.points, radius)]

    def to_json(self) -> dict:
        pts = [[float(v) for z in p for v in (z.real, z.imag)] for p in self.points]
        out = {"points": pts}
        if self.n is not None:
            out["n"] = self.n
        return out


def sample_from_json(obj: dict, window: Window) -> ClosedSetSample:
    d = SPACES[window.space]
    pts = [[complex(p[2 * k], p[2 * k + 1]) for k in range(d)] for p in obj.get("points", [])]
    return ClosedSetSample(window, pts, obj.get("n"))


def local_distance(space: str, A: np.ndarray, B: np.ndarray, window: Window, inner: float) -> float:
    """Hausdorff distance seen from inside the window: points of either set within
    ``inner`` of the center must be close to the other set."""
    a_in = A[window.contains(A, inner)] if len(A) else A
    b_in = B[window.contains(B, inner)] if len(B) else B
    return max(_directed(space, a_in, B), _directed(space, b_in, A))


def _directed(space: str, src: np.ndarray, target: np.ndarray) -> float:
    if len(src) == 0:
        return 0.0
    if len(target) == 0:
        return math.inf
    d, _ = _tree(space, target).query(_real(src))
    return float(np.max(d))


# -- limits of closed sets --------------------------------------------------


@dataclass
class LocalLimitReport:
    tail_distances: list[float]
    cauchy: bool
    resolution: float
    cells: int
    message: str = ""

    def to_json(self) -> dict:
        return {
            "tail_distances": [None if not math.isfinite(d) else d for d in self.tail_distances],
            "cauchy": self.cauchy,
            "resolution": self.resolution,
            "cells": self.cells,
            "message": self.message,
        }


def _canonical(space: str, points: np.ndarray) -> np.ndarray:
    if space != "group" or len(points) == 0:
        return points
    a = points[:, 0]
    flip = (a.real < 0) | ((a.real == 0) & (a.imag < 0))
    out = points.copy()
    out[flip] *= -1
    return out


def local_hausdorff_limit(sets: list[ClosedSetSample], window: Optional[Window] = None,
                          resolution: float = 1e-2, tail: int = TAIL):
    """Cluster-point estimate of the limit of the sets inside a window.

    A grid cell (side ``resolution``) belongs to the limit when every one of the
    last ``tail`` samples has a point within ``resolution`` of its center.
    Raises NoLimitError if the last consecutive local distance exceeds
    2 * resolution.
    """
    if len(sets) < 3:
        raise PushforwardError("need at least three samples")
    window = window or sets[0].window
    space = window.space
    if any(s.space != space for s in sets):
        raise PushforwardError("samples live in different spaces")
    inner = window.radius - 2.0 * resolution
    pts = [s.points for s in sets]
    tail_d = [local_distance(space, a, b, window, inner) for a, b in zip(pts, pts[1:])]
    cauchy = tail_d[-1] <= 2.0 * resolution
    if not cauchy:
        raise NoLimitError(
            f"no limit detected at this resolution (last local distance {tail_d[-1]:.3g} "
            f"> {2.0 * resolution:.3g})"
        )
    last = _canonical(space, sets[-1].restricted(window.radius + resolution))
    if len(last):
        cells = np.unique(np.floor(_real(last) / resolution).astype(np.int64), axis=0)
        centers = (cells + 0.5) * resolution
        keep = np.ones(len(centers), dtype=bool)
        for s in sets[-tail:]:
            if len(s.points) == 0:
                keep[:] = False
                break
            d, _ = _tree(space, s.points).query(centers)
            keep &= d <= resolution
        centers = centers[keep]
        d = SPACES[space]
        limit = centers[:, :d] + 1j * centers[:, d:]
    else:
        limit = np.zeros((0, SPACES[space]), dtype=complex)
    est = ClosedSetSample(window, limit)
    est.points = est.points[window.contains(est.points, window.radius + resolution)] if len(limit) else est.points
    report = LocalLimitReport(tail_d, cauchy, resolution, len(est))
    return est, report


# -- map sequences ----------------------------------------------------------


PointMap = Callable[[np.ndarray], np.ndarray]


@dataclass(eq=False)
class MapSequence:
    name: str
    X: str
    Y: str
    phi_n: Callable[[int, np.ndarray], np.ndarray]
    phi_limit: PointMap
    params: dict = field(default_factory=dict)

    def apply(self, n: int, points: np.ndarray) -> np.ndarray:
        pts = as_points(points, self.X)
        if len(pts) == 0:
            return np.zeros((0, SPACES[self.Y]), dtype=complex)
        return as_points(self.phi_n(n, pts), self.Y)

    def apply_limit(self, points: np.ndarray) -> np.ndarray:
        pts = as_points(points, self.X)
        if len(pts) == 0:
            return np.zeros((0, SPACES[self.Y]), dtype=complex)
        return as_points(self.phi_limit(pts), self.Y)


def _c(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def _identity(params):
    return MapSequence("identity", "C1", "C1", lambda n, z: z, lambda z: z, params)


def _translate(params):
    c = _c(params.get("c", 1.0))
    return MapSequence("translate", "C1", "C1", lambda n, z: z + c / n, lambda z: z, params)


def _shrink(params):
    # z/n converges to the zero map; "limit": "identity" asks for the wrong limit on purpose
    wrong = params.get("limit") == "identity"
    lim = (lambda z: z) if wrong else (lambda z: np.zeros_like(z))
    return MapSequence("shrink", "C1", "C1", lambda n, z: z / n, lim, params)


def _power(params):
    return MapSequence("power", "C1", "C1", lambda n, z: z ** n, lambda z: np.zeros_like(z), params)


def _rotate(params):
    theta = float(params.get("theta", 1.0))
    return MapSequence("rotate", "C1", "C1",
                       lambda n, z: z * cmath.exp(1j * theta * (1.0 + 1.0 / n)),
                       lambda z: z * cmath.exp(1j * theta), params)


def _affine(params):
    a, b = _c(params.get("a", 1.0)), _c(params.get("b", 1.0))
    return MapSequence("affine", "C1", "C1", lambda n, z: (1.0 + a / n) * z + b / n, lambda z: z, params)


def _swap(params):
    # (z, w) -> (w + 1/n, z), a C^2 example
    return MapSequence("swap", "C2", "C2",
                       lambda n, p: np.stack([p[:, 1] + 1.0 / n, p[:, 0]], axis=1),
                       lambda p: p[:, ::-1].copy(), params)


def conjugator(params, n: Optional[int]) -> mb.Su11Matrix:
    """c_n = disk automorphism (theta, a (1 - 1/n)); n=None gives the limit c."""
    theta = float(params.get("theta", 0.0))
    a = _c(params.get("a", 0.3))
    scale = 1.0 if n is None else 1.0 - 1.0 / n
    return mb.to_su11(mb.DiskAutomorphism(theta, a * scale))


def conjugate_points(h: mb.Su11Matrix, points: np.ndarray) -> np.ndarray:
    """x -> h x h^{-1} on (alpha, beta) pairs."""
    hi = h.inverse()
    a, b = points[:, 0], points[:, 1]
    # h x
    a1 = h.alpha * a + h.beta * np.conj(b)
    b1 = h.alpha * b + h.beta * np.conj(a)
    # (h x) h^{-1}
    a2 = a1 * hi.alpha + b1 * np.conj(hi.beta)
    b2 = a1 * hi.beta + b1 * np.conj(hi.alpha)
    return np.stack([a2, b2], axis=1)


def _conjugation(params):
    return MapSequence("conjugation", "group", "group",
                       lambda n, x: conjugate_points(conjugator(params, n), x),
                       lambda x: conjugate_points(conjugator(params, None), x), params)


REGISTRY: dict[str, Callable[[dict], MapSequence]] = {
    "identity": _identity,
    "translate": _translate,
    "shrink": _shrink,
    "power": _power,
    "rotate": _rotate,
    "affine": _affine,
    "swap": _swap,
    "conjugation": _conjugation,
}


def make_map(name: str, params: Optional[dict] = None) -> MapSequence:
    try:
        builder = REGISTRY[name]
    except KeyError:
        raise PushforwardError(f"unknown map {name!r}; registered: {sorted(REGISTRY)}") from None
    return builder(dict(params or {}))


# -- hypothesis checks ------------------------------------------------------


def grid(window: Window, per_axis: int = 21) -> np.ndarray:
    """Deterministic grid filling the window."""
    space = window.space
    c = window.center_array[0]
    r = window.radius
    t = np.linspace(-r, r, per_axis)
    if space == "C1":
        z = (t[:, None] + 1j * t[None, :]).ravel()
        pts = (c[0] + z)[:, None]
    elif space == "C2":
        t = np.linspace(-r, r, max(3, per_axis // 3))
        z = (t[:, None] + 1j * t[None, :]).ravel()
        pts = np.array([[c[0] + u, c[1] + v] for u in z for v in z], dtype=complex)
    else:
        pts = _group_grid(c, r, per_axis)
    return pts[window.contains(pts)]


def _group_grid(center: np.ndarray, radius: float, per_axis: int) -> np.ndarray:
    h = mb.Su11Matrix(complex(center[0]), complex(center[1])).normalized()
    out = []
    k = max(3, per_axis // 2)
    for theta in np.linspace(-math.pi, math.pi, k, endpoint=False):
        for x in np.linspace(-0.9, 0.9, k):
            for y in np.linspace(-0.9, 0.9, k):
                if x * x + y * y >= 0.81:
                    continue
                m = mb.to_su11(mb.DiskAutomorphism(theta, complex(x, y)))
                g = h @ m
                out.append((g.alpha, g.beta))
    return np.array(out, dtype=complex)


@dataclass
class CheckReport:
    name: str
    passed: bool
    schedule: list[int]
    values: list[float]
    failures: dict = field(default_factory=dict)
    message: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "schedule": self.schedule,
            "values": [None if not math.isfinite(v) else v for v in self.values],
            "failures": {str(k): v for k, v in self.failures.items()},
            "message": self.message,
        }


def maps_converge_on_compacts(seq: MapSequence, K: Window, tol: float, n_schedule,
                              per_axis: int = 21) -> tuple[bool, CheckReport]:
    """sup over a grid of K of d(phi_n(x), phi(x)) below tol at the last index and
    non-increasing over the tail."""
    from .family import parse_schedule

    schedule = parse_schedule(n_schedule)
    if K.space != seq.X:
        raise PushforwardError(f"compact window lives in {K.space}, maps start in {seq.X}")
    pts = grid(K, per_axis)
    target = seq.apply_limit(pts)
    sups, failures = [], {}
    for n in schedule:
        with np.errstate(all="ignore"):
            try:
                img = seq.apply(n, pts)
            except (ValueError, ArithmeticError) as exc:
                failures[n] = f"{type(exc).__name__}: {exc}"
                sups.append(math.inf)
                continue
        d = distances(seq.Y, img, target)
        bad = ~np.isfinite(d)
        if bad.any():
            failures[n] = f"{int(bad.sum())} grid points failed to evaluate"
            d = d[~bad]
        sups.append(float(d.max()) if len(d) else 0.0)
    tail = sups[-TAIL:]
    ok = tail[-1] < tol and all(b <= a * (1 + 1e-12) + 1e-15 for a, b in zip(tail, tail[1:]))
    ok = ok and schedule[-1] not in failures
    msg = "" if ok else f"sup {tail[-1]:.3g} at n={schedule[-1]} (tol {tol:.3g})"
    return ok, CheckReport("uniform-convergence", ok, schedule, sups, failures, msg)


def properness_check(seq: MapSequence, sets: list[ClosedSetSample], window_Y: Window,
                     bound_X: Optional[float] = None, n_schedule=None) -> tuple[bool, CheckReport]:
    """Every sampled point of F_n landing in window_Y lies within bound_X of the
    X-window center (default: the X-window radius)."""
    if window_Y.space != seq.Y:
        raise PushforwardError(f"image window lives in {window_Y.space}, maps land in {seq.Y}")
    schedule = [s.n for s in sets] if n_schedule is None else list(n_schedule)
    if len(schedule) != len(sets) or any(n is None for n in schedule):
        raise PushforwardError("each sample needs its index n")
    if bound_X is None:
        bound_X = min(s.window.radius for s in sets)
    worst, failures = [], {}
    for n, s in zip(schedule, sets):
        if len(s) == 0:
            worst.append(0.0)
            continue
        img = seq.apply(n, s.points)
        hits = window_Y.contains(img)
        far = s.window.distance(s.points[hits])
        w = float(far.max()) if len(far) else 0.0
        worst.append(w)
        if w > bound_X:
            failures[n] = f"a point at distance {w:.6g} from the domain center maps into the image window"
    ok = not failures
    msg = "" if ok else f"mass from beyond {bound_X:g} enters the image window"
    return ok, CheckReport("properness", ok, schedule, worst, failures, msg)


# -- the pushforward --------------------------------------------------------


@dataclass
class PushforwardResult:
    image: Optional[ClosedSetSample]
    verdict: str
    hypotheses: dict
    discrepancy: float
    reports: dict

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "hypotheses": self.hypotheses,
            "discrepancy": None if not math.isfinite(self.discrepancy) else self.discrepancy,
            "image_points": None if self.image is None else self.image.to_json()["points"],
            "reports": {k: v.to_json() for k, v in self.reports.items()},
        }


def pushforward_limit(seq: MapSequence, sets: list[ClosedSetSample], window_X: Window,
                      window_Y: Window, tol: float, bound_X: Optional[float] = None,
                      resolution: Optional[float] = None) -> PushforwardResult:
    """Limit of phi_n(F_n) inside window_Y, certified against phi(lim F_n)."""
    if window_X.space != seq.X or window_Y.space != seq.Y:
        raise InconsistentWindowsError("window spaces do not match the map sequence")
    if any(s.space != seq.X for s in sets):
        raise InconsistentWindowsError("samples do not live in the domain of the maps")
    bound_X = window_X.radius if bound_X is None else bound_X
    if not 0 < bound_X <= window_X.radius:
        raise InconsistentWindowsError(
            f"bound_X = {bound_X:g} must lie in (0, {window_X.radius:g}], the domain window radius"
        )
    if resolution is None:
        resolution = tol / 4.0
    schedule = [s.n for s in sets]
    if any(n is None for n in schedule):
        raise PushforwardError("each sample needs its index n")
    hyp, reports = {}, {}

    try:
        F, rep = local_hausdorff_limit(sets, window_X, resolution)
        hyp["domain-convergence"] = True
        reports["domain"] = rep
    except NoLimitError as exc:
        F = None
        hyp["domain-convergence"] = False
        reports["domain"] = CheckReport("domain-convergence", False, schedule, [], {}, str(exc))

    K = Window(window_X.center, bound_X, window_X.space)
    ok, rep = maps_converge_on_compacts(seq, K, tol, schedule)
    hyp["uniform-convergence"] = ok
    reports["uniform"] = rep

    ok, rep = properness_check(seq, sets, window_Y, bound_X)
    hyp["properness"] = ok
    reports["properness"] = rep

    images = [ClosedSetSample(window_Y, seq.apply(s.n, s.points), s.n) for s in sets]
    try:
        image, rep = local_hausdorff_limit(images, window_Y, resolution)
        reports["image"] = rep
    except NoLimitError as exc:
        image = None
        reports["image"] = CheckReport("image-convergence", False, schedule, [], {}, str(exc))

    discrepancy = math.inf
    if image is not None and F is not None:
        predicted = seq.apply_limit(F.points)
        inner = window_Y.radius - 2.0 * resolution
        discrepancy = local_distance(seq.Y, image.points, predicted, window_Y, inner)

    failing = [k for k in ("domain-convergence", "uniform-convergence", "properness") if not hyp[k]]
    if failing:
        verdict = "hypotheses violated: " + ", ".join(failing)
    elif discrepancy <= 3.0 * tol:
        verdict = "PASS"
    else:
        verdict = "FAIL: discrepancy"
    return PushforwardResult(image, verdict, hyp, discrepancy, reports)


# -- samples from groups ----------------------------------------------------


def group_sample(G: en.ClosedSubgroup, R: float, resolution: float, n: Optional[int] = None) -> ClosedSetSample:
    """Points of G within element distance R of the identity, as a group-space sample."""
    S = en.sample(G, R, resolution)
    return ClosedSetSample(Window((1.0, 0.0), R, "group"), np.asarray(S.points), n)
