"""Orientation-preserving automorphisms of the unit disk.

An element of Aut(D) is stored in the normal form

    z -> e^{i theta} (z - a) / (1 - conj(a) z),    |a| < 1,

and is converted on demand to its SU(1,1) representative

    [[alpha, beta], [conj(beta), conj(alpha)]],   |alpha|^2 - |beta|^2 = 1,

or, through the Cayley map z -> (z - i)/(z + i), to a real matrix of
determinant one acting on the upper half-plane.  Matrices are only defined
up to sign; nothing here canonicalizes the sign, every metric minimizes
over both representatives instead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

TWO_PI = 2.0 * math.pi

POLE_BOUND = 1.0 - 1e-12
"""Poles with modulus at or beyond this are rejected as near-degenerate."""

EPS_CLASS = 1e-9
DET_TOL = 1e-9


class MobiusError(ValueError):
    pass


class DegenerateElementError(MobiusError):
    """The pole of the normal form is (numerically) on the boundary circle."""


class InvalidMatrixError(MobiusError):
    pass


class AllPointsFixedError(MobiusError):
    pass


def _wrap_angle(theta: float) -> float:
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


@dataclass(frozen=True)
class DiskAutomorphism:
    theta: float
    a: complex

    def __post_init__(self):
        a = complex(self.a)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise DegenerateElementError(f"pole {a!r} is not finite")
        if abs(a) >= POLE_BOUND:
            raise DegenerateElementError(
                f"pole |a| = {abs(a):.17g} is at or beyond the near-boundary bound"
            )
        if not math.isfinite(self.theta):
            raise MobiusError(f"angle {self.theta!r} is not finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "theta", _wrap_angle(float(self.theta)))

    def __call__(self, z):
        return apply(self, z)

    def __matmul__(self, other: "DiskAutomorphism") -> "DiskAutomorphism":
        return compose(self, other)


@dataclass(frozen=True)
class Su11Matrix:
    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))

    @property
    def pseudo_det(self) -> float:
        return abs(self.alpha) ** 2 - abs(self.beta) ** 2

    @property
    def trace(self) -> float:
        return 2.0 * self.alpha.real

    def __matmul__(self, other: "Su11Matrix") -> "Su11Matrix":
        a1, b1, a2, b2 = self.alpha, self.beta, other.alpha, other.beta
        return Su11Matrix(a1 * a2 + b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())

    def __neg__(self) -> "Su11Matrix":
        return Su11Matrix(-self.alpha, -self.beta)

    def inverse(self) -> "Su11Matrix":
        return Su11Matrix(self.alpha.conjugate(), -self.beta)

    def normalized(self) -> "Su11Matrix":
        d = self.pseudo_det
        if not d > 0.0:
            raise InvalidMatrixError(f"pseudo-determinant {d!r} is not positive")
        s = math.sqrt(d)
        return Su11Matrix(self.alpha / s, self.beta / s)

    def act(self, z):
        """Mobius action z -> (alpha z + beta) / (conj(beta) z + conj(alpha))."""
        return (self.alpha * z + self.beta) / (self.beta.conjugate() * z + self.alpha.conjugate())

    def as_tuple(self) -> tuple[complex, complex]:
        return (self.alpha, self.beta)


@dataclass(frozen=True)
class Sl2RMatrix:
    p: float
    q: float
    r: float
    s: float

    @property
    def det(self) -> float:
        return self.p * self.s - self.q * self.r

    @property
    def trace(self) -> float:
        return self.p + self.s

    def act(self, z):
        return (self.p * z + self.q) / (self.r * z + self.s)


# -- isometry classes -------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    tag = "identity"


@dataclass(frozen=True)
class Elliptic:
    center: complex
    angle: float
    near_boundary: bool = False
    tag = "elliptic"


@dataclass(frozen=True)
class Parabolic:
    fixed_point: complex
    direction: int
    near_boundary: bool = False
    tag = "parabolic"


@dataclass(frozen=True)
class Hyperbolic:
    attracting: complex
    repelling: complex
    translation_length: float
    near_boundary: bool = False
    tag = "hyperbolic"


IsometryClass = Union[Identity, Elliptic, Parabolic, Hyperbolic]


# -- constructors -----------------------------------------------------------


def identity() -> DiskAutomorphism:
    return DiskAutomorphism(0.0, 0j)


def rotation(angle: float, center: complex = 0j) -> DiskAutomorphism:
    """Rotation by `angle` about an interior point (derivative e^{i angle} there)."""
    return from_su11(rotation_matrix(angle, center))


def rotation_matrix(angle: float, center: complex = 0j) -> Su11Matrix:
    c = complex(center)
    k = 1.0 - abs(c) ** 2
    if k <= 0.0:
        raise DegenerateElementError(f"center {c!r} is not inside the disk")
    u = cmath.exp(0.5j * angle)
    alpha = (u - abs(c) ** 2 / u) / k
    beta = -2j * c * math.sin(0.5 * angle) / k
    return Su11Matrix(alpha, beta)


def boost_matrix(c: complex) -> Su11Matrix:
    """The transvection z -> (z + c)/(1 + conj(c) z) sending 0 to c."""
    c = complex(c)
    k = math.sqrt(1.0 - abs(c) ** 2)
    return Su11Matrix(1.0 / k, c / k)


def parabolic_matrix(fixed_point: complex, s: float) -> Su11Matrix:
    """Parabolic fixing the boundary point `fixed_point`; s is additive in the group."""
    xi = complex(fixed_point) / abs(fixed_point)
    return Su11Matrix(1.0 + 1j * s, -1j * s * xi)


def parabolic(fixed_point: complex, s: float) -> DiskAutomorphism:
    return from_su11(parabolic_matrix(fixed_point, s))


def axis_translation_matrix(length: float, attracting: complex, repelling: complex) -> Su11Matrix:
    """Hyperbolic element translating by `length` from `repelling` to `attracting`."""
    frame = axis_frame(attracting, repelling)
    t = 0.5 * length
    core = Su11Matrix(math.cosh(t), math.sinh(t))
    return frame @ core @ frame.inverse()


def axis_frame(p: complex, q: complex) -> Su11Matrix:
    """An SU(1,1) element sending 1 -> p and -1 -> q (p != q on the circle)."""
    p = complex(p) / abs(p)
    q = complex(q) / abs(q)
    if abs(p - q) < 1e-15:
        raise DegenerateElementError("axis endpoints coincide")
    # third point: midpoint of the counter-clockwise arc from p to q, image of i
    gap = _wrap_angle(cmath.phase(q) - cmath.phase(p))
    r = cmath.exp(1j * (cmath.phase(p) + 0.5 * gap))
    m = _three_point(1.0 + 0j, -1.0 + 0j, 1j, p, q, r)
    return _to_su11_form(m)


def _three_point(z1, z2, z3, w1, w2, w3):
    # cross-ratio maps sending (z1, z2, z3) -> (0, inf, 1) and the same for w
    def normal(a, b, c):
        return [[(c - b), -a * (c - b)], [(c - a), -b * (c - a)]]

    A = normal(z1, z2, z3)
    B = normal(w1, w2, w3)
    det_b = B[0][0] * B[1][1] - B[0][1] * B[1][0]
    Binv = [[B[1][1] / det_b, -B[0][1] / det_b], [-B[1][0] / det_b, B[0][0] / det_b]]
    return [
        [Binv[0][0] * A[0][0] + Binv[0][1] * A[1][0], Binv[0][0] * A[0][1] + Binv[0][1] * A[1][1]],
        [Binv[1][0] * A[0][0] + Binv[1][1] * A[1][0], Binv[1][0] * A[0][1] + Binv[1][1] * A[1][1]],
    ]


def _to_su11_form(m) -> Su11Matrix:
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    s = cmath.sqrt(det)
    a, b, c, d = m[0][0] / s, m[0][1] / s, m[1][0] / s, m[1][1] / s
    # disk-preserving with unit determinant leaves only the sign ambiguity
    m = Su11Matrix(0.5 * (a + d.conjugate()), 0.5 * (b + c.conjugate()))
    if m.pseudo_det <= 0.0:
        raise InvalidMatrixError("matrix does not preserve the unit disk")
    return m.normalized()


# -- conversions ------------------------------------------------------------


def to_su11(g: DiskAutomorphism) -> Su11Matrix:
    k = math.sqrt(1.0 - abs(g.a) ** 2)
    u = cmath.exp(0.5j * g.theta)
    return Su11Matrix(u / k, -g.a * u / k)


def from_su11(m: Su11Matrix, tol: float = DET_TOL) -> DiskAutomorphism:
    d = m.pseudo_det
    # |alpha|^2 - |beta|^2 cancels; its rounding error scales with the entries
    scale = max(1.0, abs(m.alpha) ** 2 + abs(m.beta) ** 2)
    if not abs(d - 1.0) <= tol * scale:
        raise InvalidMatrixError(f"|alpha|^2 - |beta|^2 = {d!r}, expected 1")
    m = m.normalized()
    a = -m.beta / m.alpha
    theta = 2.0 * cmath.phase(m.alpha)
    return DiskAutomorphism(theta, a)


def su11_to_sl2r(m: Su11Matrix) -> Sl2RMatrix:
    al, be = m.alpha, m.beta
    return Sl2RMatrix(al.real + be.real, al.imag - be.imag, -al.imag - be.imag, al.real - be.real)


def sl2r_to_su11(m: Sl2RMatrix) -> Su11Matrix:
    alpha = complex(0.5 * (m.p + m.s), 0.5 * (m.q - m.r))
    beta = complex(0.5 * (m.p - m.s), -0.5 * (m.q + m.r))
    return Su11Matrix(alpha, beta)


def to_sl2r(g: DiskAutomorphism) -> Sl2RMatrix:
    return su11_to_sl2r(to_su11(g))


def from_sl2r(m: Sl2RMatrix, tol: float = DET_TOL) -> DiskAutomorphism:
    if not abs(m.det - 1.0) <= tol:
        raise InvalidMatrixError(f"det = {m.det!r}, expected 1")
    return from_su11(sl2r_to_su11(m), tol=tol)


def cayley(z):
    """Upper half-plane to disk."""
    return (z - 1j) / (z + 1j)


def cayley_inverse(w):
    return 1j * (1 + w) / (1 - w)


# -- group law --------------------------------------------------------------


def compose(g: DiskAutomorphism, h: DiskAutomorphism) -> DiskAutomorphism:
    """g after h."""
    return from_su11(_renormalize(to_su11(g) @ to_su11(h)))


def inverse(g: DiskAutomorphism) -> DiskAutomorphism:
    return from_su11(to_su11(g).inverse())


def conjugate(h: DiskAutomorphism, g: DiskAutomorphism) -> DiskAutomorphism:
    """h g h^{-1}."""
    H = to_su11(h)
    return from_su11(_renormalize(H @ to_su11(g) @ H.inverse()))


def _renormalize(m: Su11Matrix) -> Su11Matrix:
    return m.normalized()


def apply(g: DiskAutomorphism, z):
    u = cmath.exp(1j * g.theta)
    return u * (z - g.a) / (1.0 - g.a.conjugate() * z)


def power_matrix(m: Su11Matrix, n: int) -> Su11Matrix:
    n = int(n)
    if n < 0:
        m, n = m.inverse(), -n
    result = Su11Matrix(1.0, 0.0)
    base = m
    while n:
        if n & 1:
            result = (result @ base).normalized()
        n >>= 1
        if n:
            base = (base @ base).normalized()
    return result


def power(g: DiskAutomorphism, n: int) -> DiskAutomorphism:
    return from_su11(power_matrix(to_su11(g), n))


# -- metrics ----------------------------------------------------------------


def hyperbolic_distance(z: complex, w: complex) -> float:
    z, w = complex(z), complex(w)
    if abs(z) >= 1.0 or abs(w) >= 1.0:
        raise MobiusError("hyperbolic distance needs points inside the open disk")
    x = abs(z - w) / abs(1.0 - w.conjugate() * z)
    return 2.0 * math.atanh(min(x, 1.0))


def pair_distance(m1: Su11Matrix, m2: Su11Matrix) -> float:
    da = m1.alpha - m2.alpha
    db = m1.beta - m2.beta
    sa = m1.alpha + m2.alpha
    sb = m1.beta + m2.beta
    return math.sqrt(min(abs(da) ** 2 + abs(db) ** 2, abs(sa) ** 2 + abs(sb) ** 2))


def element_distance(g: DiskAutomorphism, h: DiskAutomorphism) -> float:
    return pair_distance(to_su11(g), to_su11(h))


def distance_to_identity(m: Su11Matrix) -> float:
    one = 1.0 if m.alpha.real >= 0 else -1.0
    return math.sqrt(abs(m.alpha - one) ** 2 + abs(m.beta) ** 2)


# -- classification ---------------------------------------------------------


def classify(g, eps: float = EPS_CLASS) -> IsometryClass:
    m = g if isinstance(g, Su11Matrix) else to_su11(g)
    m = m.normalized()
    if distance_to_identity(m) < eps:
        return Identity()
    if m.alpha.real < 0:
        m = -m
    # |tr|^2/4 - 1 = (|b| - |Im a|)(|b| + |Im a|); the first factor decides the type
    # without the cancellation of |tr| - 2 near the identity
    gap = abs(m.beta) - abs(m.alpha.imag)
    near = abs(gap) < 100.0 * eps
    if gap < -eps:
        center = _elliptic_center(m)
        deriv = m.beta.conjugate() * center + m.alpha.conjugate()
        angle = _wrap_angle(-2.0 * cmath.phase(deriv))
        return Elliptic(center, angle, near)
    if gap > eps:
        attracting, repelling = _hyperbolic_fixed_points(m)
        length = 2.0 * math.acosh(m.alpha.real)
        return Hyperbolic(attracting, repelling, length, near)
    if min(abs(m.beta), abs(m.alpha.imag)) <= eps:
        # within the band both entries are below ~2 eps: indistinguishable from the identity
        return Identity()
    xi = _parabolic_fixed_point(m)
    direction = 1 if m.alpha.imag >= 0 else -1
    return Parabolic(xi, direction, near)


def _trace_gap(m: Su11Matrix) -> float:
    """(Re a)^2 - 1, evaluated as |b|^2 - (Im a)^2 in factored form."""
    b, im = abs(m.beta), abs(m.alpha.imag)
    return (b - im) * (b + im)


def _elliptic_center(m: Su11Matrix) -> complex:
    # small root of conj(b) z^2 + (conj(a) - a) z - b, written without cancellation
    im = m.alpha.imag
    root = math.sqrt(max(0.0, -_trace_gap(m)))
    denom = im + math.copysign(root, im)
    return 1j * m.beta / denom


def _hyperbolic_fixed_points(m: Su11Matrix) -> tuple[complex, complex]:
    re = m.alpha.real
    root = math.sqrt(max(0.0, _trace_gap(m)))
    bc = m.beta.conjugate()
    z_plus = (1j * m.alpha.imag + root) / bc
    z_minus = (1j * m.alpha.imag - root) / bc
    # derivative at a fixed point z is 1/(conj(b) z + conj(a))^2 = 1/(Re a +- root)^2
    z_plus, z_minus = z_plus / abs(z_plus), z_minus / abs(z_minus)
    return (z_plus, z_minus) if re > 0 else (z_minus, z_plus)


def _parabolic_fixed_point(m: Su11Matrix) -> complex:
    bc = m.beta.conjugate()
    if abs(bc) == 0.0:
        raise MobiusError("parabolic element with vanishing beta")
    z = 1j * m.alpha.imag / bc
    return z / abs(z)


def fixed_points(g, eps: float = EPS_CLASS) -> list[complex]:
    cls = classify(g, eps)
    if isinstance(cls, Identity):
        raise AllPointsFixedError("all points fixed: the identity has no isolated fixed points")
    if isinstance(cls, Elliptic):
        return [cls.center]
    if isinstance(cls, Parabolic):
        return [cls.fixed_point]
    return [cls.attracting, cls.repelling]


def translation_length(g) -> float:
    m = g if isinstance(g, Su11Matrix) else to_su11(g)
    return 2.0 * math.acosh(max(1.0, abs(m.alpha.real)))
