"""JSON encodings for elements, isometry classes and closed subgroups."""

from __future__ import annotations

import json
import math

from . import engine as en
from . import mobius as mb


class CodecError(ValueError):
    pass


def fmt(x: float) -> str:
    """Floats are written with 17 significant digits."""
    return format(float(x), ".17g")


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    try:
        re, im = v
    except (TypeError, ValueError):
        raise CodecError(f"expected [re, im], got {v!r}") from None
    return complex(float(re), float(im))


def element_from_json(obj) -> mb.DiskAutomorphism:
    if isinstance(obj, str):
        obj = json.loads(obj)
    form = obj.get("form")
    if form == "disk":
        return mb.DiskAutomorphism(float(obj["theta"]), _complex(obj["a"]))
    if form == "su11":
        return mb.from_su11(mb.Su11Matrix(_complex(obj["alpha"]), _complex(obj["beta"])))
    if form == "sl2r":
        (p, q), (r, s) = obj["m"]
        return mb.from_sl2r(mb.Sl2RMatrix(float(p), float(q), float(r), float(s)))
    raise CodecError(f"unknown element form {form!r}")


def element_to_json(g: mb.DiskAutomorphism, form: str = "disk") -> dict:
    if form == "disk":
        return {"form": "disk", "theta": g.theta, "a": _pair(g.a)}
    if form == "su11":
        m = mb.to_su11(g)
        return {"form": "su11", "alpha": _pair(m.alpha), "beta": _pair(m.beta)}
    if form == "sl2r":
        m = mb.to_sl2r(g)
        return {"form": "sl2r", "m": [[m.p, m.q], [m.r, m.s]]}
    raise CodecError(f"unknown element form {form!r}")


def class_to_json(cls: mb.IsometryClass) -> dict:
    if isinstance(cls, mb.Identity):
        return {"class": "identity"}
    if isinstance(cls, mb.Elliptic):
        return {"class": "elliptic", "angle": cls.angle, "center": _pair(cls.center),
                "near_boundary": cls.near_boundary}
    if isinstance(cls, mb.Parabolic):
        return {"class": "parabolic", "fixed_point": _pair(cls.fixed_point),
                "direction": cls.direction, "near_boundary": cls.near_boundary}
    return {"class": "hyperbolic", "attracting": _pair(cls.attracting),
            "repelling": _pair(cls.repelling), "translation_length": cls.translation_length,
            "near_boundary": cls.near_boundary}


def subgroup_to_json(G: en.ClosedSubgroup) -> dict:
    out: dict = {"type": G.tag}
    if isinstance(G, en.FiniteElliptic):
        out.update(center=_pair(G.center), order=G.order, rational_by_bound=G.rational_by_bound)
    elif isinstance(G, en.OneParamElliptic):
        out.update(center=_pair(G.center), rational_by_bound=G.rational_by_bound)
    elif isinstance(G, en.CyclicHyperbolic):
        cls = en.closure_classify(G.generator)
        out.update(generator=element_to_json(G.generator),
                   axis_endpoints=[_pair(cls.attracting), _pair(cls.repelling)],
                   translation_length=cls.translation_length)
    elif isinstance(G, en.CyclicParabolic):
        out.update(generator=element_to_json(G.generator),
                   fixed_point=_pair(G.fixed_point), scale=G.scale)
    elif isinstance(G, en.OneParamParabolic):
        out.update(fixed_point=_pair(G.fixed_point))
    elif isinstance(G, en.OneParamHyperbolic):
        out.update(axis_endpoints=[_pair(z) for z in G.axis_endpoints])
    elif isinstance(G, en.ExtendedStratum):
        out.update(name=G.name, data=list(G.data))
    return out


def subgroup_from_json(obj) -> en.ClosedSubgroup:
    """Accepts a subgroup encoding, or an element encoding (read as the closure of <g>)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if "form" in obj:
        return en.closure_of_cyclic(element_from_json(obj))
    kind = obj.get("type")
    if kind == "Trivial":
        return en.Trivial()
    if kind == "FiniteElliptic":
        return en.FiniteElliptic(_complex(obj["center"]), int(obj["order"]))
    if kind == "OneParamElliptic":
        return en.OneParamElliptic(_complex(obj["center"]))
    if kind == "CyclicHyperbolic":
        if "generator" in obj:
            return en.CyclicHyperbolic(element_from_json(obj["generator"]))
        p, q = obj["axis_endpoints"]
        return en.cyclic_hyperbolic(float(obj["translation_length"]), _complex(p), _complex(q))
    if kind == "CyclicParabolic":
        if "generator" in obj:
            return en.CyclicParabolic(element_from_json(obj["generator"]))
        return en.cyclic_parabolic(_complex(obj["fixed_point"]), float(obj["scale"]))
    if kind == "OneParamParabolic":
        return en.OneParamParabolic(_complex(obj["fixed_point"]))
    if kind == "OneParamHyperbolic":
        p, q = obj["axis_endpoints"]
        return en.OneParamHyperbolic((_complex(p), _complex(q)))
    if kind == "ExtendedStratum":
        return en.ExtendedStratum(str(obj["name"]), tuple(obj.get("data", ())))
    raise CodecError(f"unknown subgroup type {kind!r}")


def dumps(obj) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    return json.dumps(_round(obj), sort_keys=True, indent=2, allow_nan=False)


def _round(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj
