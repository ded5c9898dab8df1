"""Command-line front end.

Exit codes: 0 success, 2 parse or configuration error, 3 numeric or
verification failure.  Errors are written to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import atlas, codec, corpus, engine, mobius, pushforward
from .expr import EvaluationError, ExpressionError
from .family import FamilyDescriptor, FamilyError, parse_schedule

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(ValueError):
    pass


class VerificationFailure(RuntimeError):
    def __init__(self, message: str, payload: Optional[str] = None):
        super().__init__(message)
        self.payload = payload


@dataclass
class RunConfig:
    window: float = 2.0
    tol: float = 1e-2
    resolution: Optional[float] = None
    schedule: object = "geometric(4, 2, 8)"
    seed: int = 0
    out: Optional[str] = None
    corpus: Optional[str] = None
    schedule_list: list = field(default_factory=list, init=False)

    def __post_init__(self):
        for name in ("window", "tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be a positive number, got {v!r}")
        if self.resolution is None:
            self.resolution = self.tol / 4.0
        elif not (isinstance(self.resolution, (int, float)) and self.resolution > 0):
            raise ConfigError(f"resolution must be a positive number, got {self.resolution!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        try:
            self.schedule_list = parse_schedule(self.schedule)
        except (FamilyError, ValueError) as exc:
            raise ConfigError(f"bad schedule: {exc}") from None


CONFIG_KEYS = ("window", "tol", "resolution", "schedule", "seed", "out", "corpus")


def build_config(args: argparse.Namespace) -> RunConfig:
    values = {k: getattr(args, k) for k in CONFIG_KEYS if getattr(args, k, None) is not None}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - set(CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    return RunConfig(**values)


# -- inputs -----------------------------------------------------------------


def _load_json_arg(text: str):
    text = text.strip()
    if text.startswith(("{", "[")):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON argument: {exc}") from None
    if os.path.exists(text):
        with open(text) as fh:
            try:
                return json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON in {text}: {exc}") from None
    raise ConfigError(f"expected a JSON object or a path to one, got {text!r}")


def load_element(text: str) -> mobius.DiskAutomorphism:
    try:
        return codec.element_from_json(_load_json_arg(text))
    except (mobius.MobiusError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid element: {exc}") from None


def load_group(text: str) -> engine.ClosedSubgroup:
    try:
        return codec.subgroup_from_json(_load_json_arg(text))
    except (mobius.MobiusError, engine.EngineError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid subgroup: {exc}") from None


def load_family(text: str, cfg: RunConfig) -> FamilyDescriptor:
    stripped = text.strip()
    if stripped.startswith("{") or (os.path.exists(stripped) and not stripped.isidentifier()):
        obj = _load_json_arg(stripped)
        if isinstance(obj, list):
            raise ConfigError("expected a single family object")
        return FamilyDescriptor.from_json(obj)
    return corpus.find_family(stripped, cfg.corpus)


# -- outputs ----------------------------------------------------------------


def emit(text: str, cfg: RunConfig, stream=None) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        (stream or sys.stdout).write(text)


def emit_json(obj, cfg: RunConfig) -> None:
    emit(codec.dumps(obj) + "\n", cfg)


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([codec.fmt(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


# -- subcommands ------------------------------------------------------------


def cmd_classify(args, cfg):
    g = load_element(args.element)
    emit_json(codec.class_to_json(mobius.classify(g)), cfg)


def cmd_closure(args, cfg):
    g = load_element(args.element)
    emit_json(codec.subgroup_to_json(engine.closure_of_cyclic(g)), cfg)


def cmd_sample(args, cfg):
    G = load_group(args.group)
    emit(engine.sample(G, cfg.window, cfg.resolution).to_csv(), cfg)


def cmd_distance(args, cfg):
    G, H = load_group(args.first), load_group(args.second)
    d = engine.chabauty_distance(G, H, cfg.window, cfg.resolution)
    emit_json({"distance": d, "window": cfg.window, "resolution": cfg.resolution}, cfg)


def cmd_limit(args, cfg):
    fam = load_family(args.family, cfg)
    cand = load_group(args.candidate)
    rep = engine.limit_verify(fam, cand, cfg.window, cfg.tol, cfg.schedule_list, cfg.resolution)
    out = {"family": fam.name, "verdict": "PASS" if rep.passed else "FAIL", **rep.to_json()}
    emit_json(out, cfg)
    if not rep.passed:
        raise VerificationFailure(f"limit_verify failed: {rep.reason}")


def cmd_predict(args, cfg):
    fam = load_family(args.family, cfg)
    inv = atlas.extract_invariants(fam, cfg.schedule_list)
    G = atlas.classify_limit(inv)
    rep = engine.limit_verify(fam, G, cfg.window, cfg.tol, cfg.schedule_list, cfg.resolution)
    out = {
        "family": fam.name,
        "stratum": G.tag,
        "limit": codec.subgroup_to_json(G),
        "oracle": "PASS" if rep.passed else "FAIL",
        "invariants": inv.to_json(),
        "report": rep.to_json(),
    }
    emit_json(out, cfg)
    if not rep.passed:
        raise VerificationFailure(f"oracle disagrees with the prediction: {rep.reason}")


def cmd_keyprop(args, cfg):
    cases = corpus.load_keyprop(args.cases)
    results = []
    mismatches = []
    for case in cases:
        seq, sets, wx, wy, tol, bound_X = corpus.keyprop_inputs(case)
        res = pushforward.pushforward_limit(seq, sets, wx, wy, tol, bound_X)
        expected = case.get("expected")
        results.append({
            "name": case["name"],
            "verdict": res.verdict,
            "expected": expected,
            "discrepancy": res.discrepancy,
            "hypotheses": res.hypotheses,
        })
        if expected is not None and res.verdict != expected:
            mismatches.append(case["name"])
    emit_json({"cases": results, "mismatches": mismatches}, cfg)
    if mismatches:
        raise VerificationFailure(f"unexpected verdicts for {mismatches}")


def cmd_atlas(args, cfg):
    if args.strata:
        emit_json([{"tag": s.tag, "charts": list(s.charts), "dimension": s.dimension,
                    "description": s.description} for s in atlas.enumerate_strata()], cfg)
        return
    rows = []
    chart = args.chart
    if args.random:
        rng = np.random.default_rng(cfg.seed)
        points = [atlas.random_interior_point(chart, rng) for _ in range(args.random)]
    else:
        points = list(_chart_grid(chart, args.grid))
    for p in points:
        try:
            G = atlas.realize(p)
        except atlas.ChartError:
            continue
        rows.append([p.chart, *[float(c) for c in p.coords], G.tag, _summary(G)])
    emit(csv_text(["chart", "c1", "c2", "v", "stratum", "order_or_length"], rows), cfg)


def _chart_grid(chart: str, k: int):
    vs = [j / k for j in range(k + 1)]
    if chart == "ES":
        for i in range(k + 1):
            r = i / k
            for t in range(2 * k):
                z = r * cmath.exp(1j * math.pi * t / k)
                for v in vs:
                    yield atlas.ChartPoint("ES", (z.real, z.imag, v))
                if r == 0:
                    break
    else:
        for i in range(k):
            phi = math.pi * i / k
            for j in range(k + 1):
                rho = -1.0 + 2.0 * j / k
                for v in vs:
                    yield atlas.ChartPoint("HS", (phi, rho, v))


def _summary(G) -> float:
    if isinstance(G, engine.FiniteElliptic):
        return float(G.order)
    if isinstance(G, engine.CyclicHyperbolic):
        return float(engine.closure_classify(G.generator).translation_length)
    if isinstance(G, engine.CyclicParabolic):
        return float(G.scale)
    return 0.0


def cmd_orbit(args, cfg):
    g = load_element(args.element)
    z = complex(args.point[0], args.point[1])
    if abs(z) >= 1.0:
        raise ConfigError("base point must lie in the open unit disk")
    rows = []
    for k in range(args.count + 1):
        rows.append([k, z.real, z.imag])
        z = g(z)
    emit(csv_text(["k", "re", "im"], rows), cfg)


# -- parser -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=float, help="window radius R around the identity (default 2)")
    common.add_argument("--tol", type=float, help="verification tolerance (default 1e-2)")
    common.add_argument("--resolution", type=float, help="sampling resolution (default tol/4)")
    common.add_argument("--schedule", help='index schedule, "4,8,16" or "geometric(4, 2, 8)"')
    common.add_argument("--seed", type=int, help="random seed (default 0)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--config", help="JSON file whose keys override the flags")
    common.add_argument("--corpus", help="family corpus JSON (default: bundled)")

    p = _Parser(prog="chabauty", description="Chabauty limits of one-generator subgroups of PSL(2,R).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("classify", parents=[common], help="isometry class of an element")
    s.add_argument("element", help="element JSON or path")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("closure", parents=[common], help="closure of the cyclic group of an element")
    s.add_argument("element")
    s.set_defaults(func=cmd_closure)

    s = sub.add_parser("sample", parents=[common], help="CSV sample of a closed subgroup in the window")
    s.add_argument("group", help="subgroup JSON (or element JSON, read as its closure)")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("distance", parents=[common], help="local Chabauty distance of two subgroups")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_distance)

    s = sub.add_parser("limit", parents=[common], help="verify a candidate limit of a family")
    s.add_argument("family", help="corpus family name, family JSON, or path")
    s.add_argument("candidate", help="subgroup JSON or path")
    s.set_defaults(func=cmd_limit)

    s = sub.add_parser("predict", parents=[common], help="closed-form limit plus oracle cross-check")
    s.add_argument("family")
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("keyprop", parents=[common], help="pushforward verdicts on the key-proposition cases")
    s.add_argument("--cases", help="cases JSON (default: bundled)")
    s.set_defaults(func=cmd_keyprop)

    s = sub.add_parser("atlas", parents=[common], help="chart grid dumps")
    s.add_argument("--chart", choices=("ES", "HS"), default="ES")
    s.add_argument("--grid", type=int, default=8, help="grid subdivisions per axis")
    s.add_argument("--random", type=int, default=0, help="dump this many seeded random interior points")
    s.add_argument("--strata", action="store_true", help="print the stratum list instead")
    s.set_defaults(func=cmd_atlas)

    s = sub.add_parser("orbit", parents=[common], help="orbit of a base point as CSV")
    s.add_argument("element")
    s.add_argument("--point", type=float, nargs=2, default=(0.0, 0.0), metavar=("RE", "IM"))
    s.add_argument("--count", type=int, default=50)
    s.set_defaults(func=cmd_orbit)
    return p


CONFIG_ERRORS = (ConfigError, FamilyError, codec.CodecError, json.JSONDecodeError, KeyError)
NUMERIC_ERRORS = (mobius.MobiusError, engine.EngineError, atlas.AtlasError,
                  pushforward.PushforwardError, EvaluationError, ArithmeticError)


def _error(exc: BaseException, code: int) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = build_config(args)
    except CONFIG_ERRORS as exc:
        return _error(exc, EXIT_CONFIG)
    try:
        args.func(args, cfg)
    except VerificationFailure as exc:
        return _error(exc, EXIT_NUMERIC)
    except EvaluationError as exc:
        return _error(exc, EXIT_NUMERIC)
    except ExpressionError as exc:
        return _error(exc, EXIT_CONFIG)
    except CONFIG_ERRORS as exc:
        return _error(exc, EXIT_CONFIG)
    except NUMERIC_ERRORS as exc:
        return _error(exc, EXIT_NUMERIC)
    except OSError as exc:
        return _error(exc, EXIT_CONFIG)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
