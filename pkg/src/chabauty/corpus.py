"""The bundled family corpus, built from geometric data.

Families are assembled as expression trees from the SU(1,1) entries of
rotations, axis translations and parabolics, then converted to the
(theta, a) normal form:  theta = 2 atan(Im alpha / Re alpha),
a = -beta conj(alpha) / |alpha|^2.  All builders avoid half-turns (Re alpha = 0).
"""

from __future__ import annotations

import json
import math
from importlib import resources

from . import mobius as mb
from .expr import E, N, PI, fn
from .family import FamilyDescriptor, FamilyError

DATA = "data"


def _e(x) -> E:
    return x if isinstance(x, E) else E(float(x))


def _from_entries(name, ar, ai, br, bi, expected, extra=None) -> FamilyDescriptor:
    ar, ai, br, bi = map(_e, (ar, ai, br, bi))
    norm = ar * ar + ai * ai
    theta = 2.0 * fn("atan", ai / ar)
    a_re = -(br * ar + bi * ai) / norm
    a_im = -(bi * ar - br * ai) / norm
    fam = FamilyDescriptor(name, theta.text(), a_re.text(), a_im.text(), {}, expected)
    return FamilyDescriptor(fam.name, fam.theta_expr, fam.a_re_expr, fam.a_im_expr,
                            _declare(fam, extra or {}), expected)


def elliptic(name, cx, cy, angle, expected, **extra) -> FamilyDescriptor:
    """Rotation by ``angle`` about cx + i cy."""
    cx, cy, angle = map(_e, (cx, cy, angle))
    r2 = cx * cx + cy * cy
    k = 1.0 - r2
    c, s = fn("cos", angle / 2.0), fn("sin", angle / 2.0)
    return _from_entries(name, c, s * (1.0 + r2) / k, 2.0 * cy * s / k, -2.0 * cx * s / k,
                         expected, extra)


def hyperbolic(name, phi, rho, length, expected, **extra) -> FamilyDescriptor:
    """Translation by ``length`` along the geodesic perpendicular to the diameter
    through e^{i phi}, crossing it at rho e^{i phi}."""
    phi, rho, length = map(_e, (phi, rho, length))
    half = length / 2.0
    ch = (fn("exp", half) + fn("exp", -half)) / 2.0
    sh = (fn("exp", half) - fn("exp", -half)) / 2.0
    k = 1.0 - rho * rho
    ai = -2.0 * rho * sh / k
    mag = sh * (1.0 + rho * rho) / k
    return _from_entries(name, ch, ai, -fn("sin", phi) * mag, fn("cos", phi) * mag,
                         expected, extra)


def parabolic(name, psi, scale, expected, **extra) -> FamilyDescriptor:
    """The parabolic (1 + i s, -i s xi) fixing xi = e^{i psi}."""
    psi, scale = map(_e, (psi, scale))
    return _from_entries(name, 1.0, scale, scale * fn("sin", psi), -scale * fn("cos", psi),
                         expected, extra)


def _declare(fam: FamilyDescriptor, extra: dict) -> dict:
    """Declared asymptotics read off a high-index evaluation."""
    g = None
    for n in (2 ** 20, 2 ** 14, 2 ** 10):
        try:
            g = fam.evaluate(n)
            break
        except (mb.MobiusError, ValueError):
            continue
    decl = dict(extra)
    if g is not None:
        decl.setdefault("a_limit", [round(g.a.real, 6), round(g.a.imag, 6)])
        decl.setdefault("theta_limit", round(g.theta, 6))
    return decl


def build_corpus() -> list[FamilyDescriptor]:
    tau = 2.0 * PI
    inv = 1.0 / N
    return [
        # constants
        elliptic("const-rotation-7", 0.0, 0.0, tau / 7.0, "FiniteElliptic"),
        elliptic("const-rotation-off-center", 0.3, -0.2, tau / 5.0, "FiniteElliptic"),
        elliptic("const-rotation-irrational", 0.1, 0.4, 1.0, "OneParamElliptic"),
        hyperbolic("const-hyperbolic", 0.5 * math.pi, 0.0, 2.0 * math.log(3.0), "CyclicHyperbolic"),
        parabolic("const-parabolic", 0.0, 0.5, "CyclicParabolic"),
        FamilyDescriptor("const-identity", "0", "0", "0",
                                    {"a_limit": [0.0, 0.0], "theta_limit": 0.0}, "Trivial"),
        # elliptic, interior center
        elliptic("rotation-shrinking", 0.0, 0.0, tau * inv, "OneParamElliptic", theta_exponent=1.0),
        elliptic("rotation-shrinking-off-center", 0.4, 0.0, tau * inv, "OneParamElliptic"),
        elliptic("rotation-irrational-shrinking", 0.0, 0.5, inv, "OneParamElliptic"),
        elliptic("rotation-center-converging", 0.2 + inv, 0.1, tau / 3.0, "FiniteElliptic"),
        elliptic("rotation-fast-shrinking-drifting", 0.5 - inv, -0.3, tau / N ** 1.5, "OneParamElliptic"),
        # elliptic, center escaping to the boundary
        elliptic("rotation-escaping-coupled", fn("sqrt", 1.0 - 4.0 * fn("sin", PI / (4.0 * N + 12.0))), 0.0,
                 tau / (4.0 * N + 12.0), "CyclicParabolic"),
        elliptic("rotation-escaping-fast-angle", 0.0, 1.0 - inv, tau / (N * N), "OneParamParabolic"),
        elliptic("rotation-escaping-fast-center", -(1.0 - 1.0 / N ** 1.5), 0.0, tau * inv, "Trivial"),
        elliptic("rotation-escaping-fixed-angle", 0.6 * (1.0 - inv), 0.8 * (1.0 - inv), tau / 5.0, "Trivial"),
        elliptic("rotation-escaping-irrational", 0.0, -(1.0 - inv), inv * inv, "OneParamParabolic"),
        # hyperbolic, distinct limiting axis
        hyperbolic("hyperbolic-shrinking", 0.5 * math.pi, 0.0, inv, "OneParamHyperbolic"),
        hyperbolic("hyperbolic-shrinking-off-axis", 1.0, 0.3, inv, "OneParamHyperbolic"),
        hyperbolic("hyperbolic-growing", 0.5 * math.pi, 0.2, fn("sqrt", N), "Trivial"),
        hyperbolic("hyperbolic-axis-converging", 2.0, 0.3 + inv, 1.0, "CyclicHyperbolic"),
        # hyperbolic, axis endpoints colliding
        hyperbolic("hyperbolic-colliding-coupled", 0.0, 1.0 - inv, 2.0 * inv, "CyclicParabolic"),
        hyperbolic("hyperbolic-colliding-fast", 0.5 * math.pi, 1.0 - inv, inv * inv, "OneParamParabolic"),
        hyperbolic("hyperbolic-colliding-fixed-length", 1.0, -(1.0 - inv), 1.0, "Trivial"),
        # parabolic
        parabolic("parabolic-shrinking", 0.5 * math.pi, inv, "OneParamParabolic"),
        parabolic("parabolic-growing", math.pi, N, "Trivial"),
        parabolic("parabolic-rotating", inv, 0.7, "CyclicParabolic"),
    ]


def corpus_json() -> list[dict]:
    return [f.to_json() for f in build_corpus()]


def load_corpus(path=None) -> list[FamilyDescriptor]:
    if path is None:
        text = resources.files("chabauty").joinpath(DATA, "corpus.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    if not isinstance(data, list):
        raise FamilyError("corpus file must hold a JSON array of families")
    return [FamilyDescriptor.from_json(obj) for obj in data]


def find_family(name: str, path=None) -> FamilyDescriptor:
    for fam in load_corpus(path):
        if fam.name == name:
            return fam
    raise FamilyError(f"no corpus family named {name!r}")


# -- key-proposition corpus -------------------------------------------------


def _circle(radius: float, count: int, center: complex = 0.0) -> list[complex]:
    t = [2.0 * math.pi * k / count for k in range(count)]
    return [center + radius * complex(math.cos(s), math.sin(s)) for s in t]


def _pts(zs) -> list[list[float]]:
    return [[z.real, z.imag] for z in zs]


def _case(name, map_name, params, X, Y, tol, sets, expected, bound_X=None):
    out = {
        "name": name,
        "map": {"name": map_name, "params": params},
        "windows": {"X": X, "Y": Y},
        "tol": tol,
        "expected": expected,
        "sets": sets,
    }
    if bound_X is not None:
        out["bound_X"] = bound_X
    return out


def _disk(radius, space="C1", center=None):
    d = 1 if space == "C1" else 2
    if center is None:
        center = [[0.0, 0.0]] * d if space != "group" else [[1.0, 0.0], [0.0, 0.0]]
    return {"center": center, "radius": radius, "space": space}


def build_keyprop() -> list[dict]:
    from . import engine as en
    from .pushforward import group_sample

    sched = [4 * 2 ** k for k in range(8)]
    cases = []
    base = [complex(0.3, 0.1), complex(-0.5, 0.2), complex(0.1, -0.6)]
    cases.append(_case(
        "identity-finite-set", "identity", {}, _disk(1.0), _disk(1.0), 0.05,
        [{"n": n, "points": _pts([z + complex(0.5, 0.5) / n for z in base])} for n in sched],
        "PASS"))
    lattice = [complex(i / 3, j / 3) for i in range(-3, 4) for j in range(-3, 4) if abs(complex(i, j)) <= 3.5]
    cases.append(_case(
        "translate-lattice", "translate", {"c": [0.5, 0.0]}, _disk(1.5), _disk(1.0), 0.05,
        [{"n": n, "points": _pts([z + 1j / n for z in lattice])} for n in sched],
        "PASS"))
    cases.append(_case(
        "rotate-circle", "rotate", {"theta": 1.0}, _disk(1.0), _disk(1.0), 0.05,
        [{"n": n, "points": _pts(_circle(0.5 + 1.0 / n, 4 * n))} for n in sched],
        "PASS"))
    cases.append(_case(
        "power-disk", "power", {}, _disk(0.5), _disk(1.0), 0.05,
        [{"n": n, "points": _pts([z for z in (complex(i, j) * 0.09 for i in range(-5, 6) for j in range(-5, 6))
                                  if abs(z) <= 0.45])} for n in sched],
        "PASS"))
    cases.append(_case(
        "affine-segment", "affine", {"a": [1.0, 0.0], "b": [0.0, 0.5]}, _disk(1.0), _disk(1.0), 0.05,
        [{"n": n, "points": _pts([complex(-0.5 + k / (4 * n), 1.0 / n) for k in range(4 * n + 1)])} for n in sched],
        "PASS"))
    pairs = [(complex(0.2, 0.1), complex(-0.3, 0.0)), (complex(0.0, 0.4), complex(0.1, -0.2))]
    cases.append(_case(
        "swap-pairs", "swap", {}, _disk(1.0, "C2"), _disk(1.0, "C2"), 0.05,
        [{"n": n, "points": [[p.real + 1.0 / n, p.imag, q.real, q.imag] for p, q in pairs]} for n in sched],
        "PASS"))
    gsched = [64 * 2 ** k for k in range(6)]
    gsets = []
    for n in gsched:
        S = group_sample(en.closure_of_cyclic(mb.rotation(2.0 * math.pi / n)), 2.0, 0.01, n)
        gsets.append({"n": n, "points": S.to_json()["points"]})
    cases.append(_case(
        "conjugation-rotations", "conjugation", {"theta": 0.5, "a": [0.3, 0.2]},
        _disk(2.0, "group"), _disk(1.5, "group"), 0.05, gsets, "PASS"))
    cases.append(_case(
        "identity-empty", "identity", {}, _disk(1.0), _disk(1.0), 0.05,
        [{"n": n, "points": []} for n in sched], "PASS"))
    cases.append(_case(
        "escaping-mass", "shrink", {}, _disk(3.0), _disk(2.0), 0.05,
        [{"n": n, "points": _pts([complex(n, 0.0)])} for n in sched],
        "hypotheses violated: properness", bound_X=3.0))
    return cases


def load_keyprop(path=None) -> list[dict]:
    if path is None:
        text = resources.files("chabauty").joinpath(DATA, "keyprop.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    if not isinstance(data, list):
        raise FamilyError("key-proposition file must hold a JSON array of cases")
    return data


def keyprop_inputs(case: dict):
    """(maps, sets, window_X, window_Y, tol, bound_X) for one key-proposition case."""
    from .pushforward import Window, make_map, sample_from_json

    def window(w):
        center = [complex(*c) for c in w["center"]]
        return Window(tuple(center), float(w["radius"]), w["space"])

    seq = make_map(case["map"]["name"], case["map"].get("params"))
    wx, wy = window(case["windows"]["X"]), window(case["windows"]["Y"])
    sets = [sample_from_json(s, wx) for s in case["sets"]]
    return seq, sets, wx, wy, float(case["tol"]), case.get("bound_X")


def write_data(directory) -> None:
    """Regenerate the bundled JSON data files."""
    import os

    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, "corpus.json"), "w") as fh:
        json.dump(corpus_json(), fh, indent=1, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(directory, "keyprop.json"), "w") as fh:
        json.dump(build_keyprop(), fh, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    import sys

    write_data(sys.argv[1] if len(sys.argv) > 1 else "data")
