"""Sequences n -> g_n of disk automorphisms given by index expressions."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Any, Optional

from . import mobius as mb
from .expr import Expression, evaluate, parse_expression, to_text


class FamilyError(ValueError):
    pass


_GEOMETRIC = re.compile(r"^\s*geometric\s*\(\s*([^,]+),\s*([^,]+),\s*([^,)]+)\)\s*$")


def parse_schedule(schedule) -> list[int]:
    """Accepts a list of integers, "4,8,16" or "geometric(start, ratio, count)"."""
    if isinstance(schedule, str):
        m = _GEOMETRIC.match(schedule)
        if m:
            start, ratio, count = float(m.group(1)), float(m.group(2)), int(m.group(3))
            values = [int(round(start * ratio ** k)) for k in range(count)]
        else:
            values = [int(v) for v in schedule.split(",") if v.strip()]
    else:
        values = [int(v) for v in schedule]
    if not values:
        raise FamilyError("empty schedule")
    if any(v <= 0 for v in values):
        raise FamilyError("schedule indices must be positive")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise FamilyError("schedule must be strictly increasing")
    return values


@dataclass(frozen=True)
class FamilyDescriptor:
    name: str
    theta_expr: str
    a_re_expr: str
    a_im_expr: str
    declared_asymptotics: dict = field(default_factory=dict, compare=False, hash=False)
    expected_stratum: Optional[str] = None
    conjugate_by: Optional[mb.DiskAutomorphism] = None

    def __post_init__(self):
        object.__setattr__(self, "_theta", parse_expression(self.theta_expr))
        object.__setattr__(self, "_a_re", parse_expression(self.a_re_expr))
        object.__setattr__(self, "_a_im", parse_expression(self.a_im_expr))

    def evaluate(self, n) -> mb.DiskAutomorphism:
        theta = evaluate(self._theta, n)
        a = complex(evaluate(self._a_re, n), evaluate(self._a_im, n))
        g = mb.DiskAutomorphism(theta, a)
        if self.conjugate_by is not None:
            g = mb.conjugate(self.conjugate_by, g)
        return g

    def conjugated(self, h: mb.DiskAutomorphism) -> "FamilyDescriptor":
        """The family n -> h g_n h^{-1}."""
        inner = h if self.conjugate_by is None else mb.compose(h, self.conjugate_by)
        return FamilyDescriptor(
            f"{self.name}@conj", self.theta_expr, self.a_re_expr, self.a_im_expr,
            dict(self.declared_asymptotics), self.expected_stratum, inner,
        )

    def check_declared(self, schedule) -> None:
        """Compare the declared asymptotics with the evaluation at the last index.

        Each declared quantity must agree within 10% (relative, with unit floor).
        """
        decl = self.declared_asymptotics or {}
        if not decl:
            return
        if self.conjugate_by is not None:
            return  # declarations describe the unconjugated family
        n_max = schedule[-1]
        g = self.evaluate(n_max)
        if decl.get("a_limit") is not None:
            target = complex(*decl["a_limit"])
            if abs(g.a - target) > 0.1 * max(1.0, abs(target)):
                raise FamilyError(
                    f"{self.name}: declared a_limit {target} inconsistent with a({n_max}) = {g.a}"
                )
        if decl.get("theta_limit") is not None:
            target = float(decl["theta_limit"])
            diff = abs(math.remainder(g.theta - target, mb.TWO_PI))
            if diff > 0.1 * max(1.0, abs(target)):
                raise FamilyError(
                    f"{self.name}: declared theta_limit {target} inconsistent with theta({n_max}) = {g.theta}"
                )
        for key, getter in (("a_gap_exponent", lambda h: 1.0 - abs(h.a)),
                            ("theta_exponent", lambda h: abs(math.remainder(h.theta, mb.TWO_PI)))):
            if decl.get(key) is None or len(schedule) < 2:
                continue
            n0 = schedule[-2]
            x0, x1 = getter(self.evaluate(n0)), getter(g)
            if x0 <= 0 or x1 <= 0:
                raise FamilyError(f"{self.name}: cannot estimate {key} from vanishing values")
            p = -math.log(x1 / x0) / math.log(n_max / n0)
            if abs(p - float(decl[key])) > 0.1 * max(1.0, abs(float(decl[key]))):
                raise FamilyError(
                    f"{self.name}: declared {key} {decl[key]} inconsistent with measured {p:.4g}"
                )

    def to_json(self) -> dict[str, Any]:
        out = {
            "name": self.name,
            "theta_expr": self.theta_expr,
            "a_re_expr": self.a_re_expr,
            "a_im_expr": self.a_im_expr,
            "declared_asymptotics": self.declared_asymptotics,
            "expected_stratum": self.expected_stratum,
        }
        if self.conjugate_by is not None:
            from .codec import element_to_json

            out["conjugate_by"] = element_to_json(self.conjugate_by)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FamilyDescriptor":
        conj = obj.get("conjugate_by")
        if conj is not None:
            from .codec import element_from_json

            conj = element_from_json(conj)
        return cls(
            obj["name"], str(obj["theta_expr"]), str(obj["a_re_expr"]), str(obj["a_im_expr"]),
            dict(obj.get("declared_asymptotics") or {}), obj.get("expected_stratum"), conj,
        )


def constant_family(name: str, g: mb.DiskAutomorphism) -> FamilyDescriptor:
    return FamilyDescriptor(
        name, repr(g.theta), _lit(g.a.real), _lit(g.a.imag),
        {"a_limit": [g.a.real, g.a.imag], "theta_limit": g.theta},
    )


def _lit(x: float) -> str:
    return repr(x) if x >= 0 else f"-{repr(-x)}"


def family_from_expressions(name, theta: Expression, a_re: Expression, a_im: Expression, **kw):
    return FamilyDescriptor(name, to_text(theta), to_text(a_re), to_text(a_im), **kw)
