"""Random elements and points shared by the test modules."""

import cmath
import math

import numpy as np

from chabauty import mobius as mb


def random_disk_point(rng: np.random.Generator, r_max: float = 0.9) -> complex:
    r = r_max * math.sqrt(rng.uniform())
    return r * cmath.exp(1j * rng.uniform(0, 2 * math.pi))


def random_element(rng: np.random.Generator, r_max: float = 0.9) -> mb.DiskAutomorphism:
    return mb.DiskAutomorphism(rng.uniform(-math.pi, math.pi), random_disk_point(rng, r_max))


def random_of_kind(kind: str, rng: np.random.Generator) -> mb.DiskAutomorphism:
    """An element of a prescribed isometry type, conjugated by a random automorphism."""
    h = random_element(rng, 0.7)
    if kind == "elliptic":
        g = mb.rotation(rng.uniform(0.2, 3.0), random_disk_point(rng, 0.7))
    elif kind == "hyperbolic":
        phi = rng.uniform(0, 2 * math.pi)
        g = mb.from_su11(mb.axis_translation_matrix(rng.uniform(0.2, 3.0), cmath.exp(1j * phi),
                                                   -cmath.exp(1j * phi)))
    elif kind == "parabolic":
        g = mb.parabolic(cmath.exp(1j * rng.uniform(0, 2 * math.pi)), rng.uniform(0.2, 2.0))
    else:
        raise ValueError(kind)
    return mb.conjugate(h, g)


def pseudo_det_error(m: mb.Su11Matrix) -> float:
    return abs(abs(m.alpha) ** 2 - abs(m.beta) ** 2 - 1.0)


def random_subgroup(rng: np.random.Generator):
    """A random closed subgroup from one of the seven strata."""
    from chabauty import engine as en

    kind = rng.integers(7)
    c = random_disk_point(rng, 0.6)
    xi = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    if kind == 0:
        return en.Trivial()
    if kind == 1:
        return en.FiniteElliptic(c, int(rng.integers(2, 40)))
    if kind == 2:
        return en.OneParamElliptic(c)
    if kind == 3:
        return en.cyclic_parabolic(xi, rng.uniform(0.1, 1.5))
    if kind == 4:
        return en.OneParamParabolic(xi)
    w = rng.uniform(0.3, math.pi / 2)
    p, q = xi * cmath.exp(1j * w), xi * cmath.exp(-1j * w)
    if kind == 5:
        return en.cyclic_hyperbolic(rng.uniform(0.1, 2.0), p, q)
    return en.OneParamHyperbolic((p, q))
