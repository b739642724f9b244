"""Command-line front end.

Exit codes: 0 success, 1 I/O or parse error, 2 domain or hypothesis violation,
3 numerical failure. Errors are also written to stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import scenarios
from .analysis import (
    DerivativeMethod,
    analysis_report,
    design_perturbation,
    find_zeros,
    wronskian,
)
from .errors import DomainViolation, HypothesisViolation, MelnikovError, NumericalFailure
from .integrator import integrate_crossing, locate_limit_cycles
from .melnikov import melnikov_coefficients, melnikov_grid
from .model import (
    ThreeZoneSystem,
    ZoneHamiltonian,
    ZonePerturbation,
    check_hypotheses,
    classify_system,
)
from .normal_form import to_normal_form, verify_normal_form
from .unperturbed import annulus_interval, sample_arcs, separatrix_ordinates

SCHEMA_VERSION = 1
ZONE_FIELDS = ("a", "b", "c", "alpha", "beta")
PERT_FIELDS = ("p", "q", "r", "s", "u", "v")
SIDES = ("left", "center", "right")
TOP_FIELDS = {"schema_version", "name", "epsilon", "zones", "perturbation"}


class ConfigError(Exception):
    """Unreadable or malformed configuration (exit code 1)."""


# --- formatting -------------------------------------------------------------

def fmt(x) -> str:
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x + 0.0:.12g}"


def _round(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.12g}") + 0.0   # folds -0.0 into 0.0
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.floating):
        return _round(float(obj))
    return obj


def dump_json(obj) -> str:
    return json.dumps(_round(obj), indent=2, sort_keys=False) + "\n"


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


# --- configuration ----------------------------------------------------------

@dataclass(frozen=True)
class SystemConfig:
    name: str
    system: ThreeZoneSystem
    epsilon: float


def _record(obj, fields, where, required):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(obj) - set(fields)
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {', '.join(sorted(unknown))}")
    missing = [f for f in required if f not in obj]
    if missing:
        raise ConfigError(f"{where}: missing field(s) {', '.join(missing)}")
    out = {}
    for f in fields:
        v = obj.get(f, 0.0)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{where}.{f}: expected a number, got {v!r}")
        out[f] = float(v)
    return out


def parse_config(text: str, source: str = "<config>") -> SystemConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be an object")
    unknown = set(data) - TOP_FIELDS
    if unknown:
        raise ConfigError(f"{source}: unknown field(s) {', '.join(sorted(unknown))}")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"{source}: schema_version must be {SCHEMA_VERSION}")
    zones = data.get("zones")
    if not isinstance(zones, dict) or set(zones) != set(SIDES):
        raise ConfigError(f"{source}: zones must have exactly left, center, right")
    hz = {s: ZoneHamiltonian(**_record(zones[s], ZONE_FIELDS, f"zones.{s}", ("a", "b", "c")))
          for s in SIDES}
    perts = data.get("perturbation", {})
    if not isinstance(perts, dict) or set(perts) - set(SIDES):
        raise ConfigError(f"{source}: perturbation keys must be among left, center, right")
    pz = {s: ZonePerturbation(**_record(perts.get(s, {}), PERT_FIELDS, f"perturbation.{s}", ()))
          for s in SIDES}
    eps = data.get("epsilon", 0.0)
    if isinstance(eps, bool) or not isinstance(eps, (int, float)) or not 0 <= eps < 1:
        raise ConfigError(f"{source}: epsilon must be a number in [0, 1)")
    name = data.get("name", source)
    if not isinstance(name, str):
        raise ConfigError(f"{source}: name must be text")
    system = ThreeZoneSystem(hz["left"], hz["center"], hz["right"],
                             pz["left"], pz["center"], pz["right"], float(eps))
    return SystemConfig(name, system, float(eps))


def config_to_json(cfg: SystemConfig) -> str:
    s = cfg.system
    return dump_json({
        "schema_version": SCHEMA_VERSION,
        "name": cfg.name,
        "epsilon": cfg.epsilon,
        "zones": {"left": dict(zip(ZONE_FIELDS, s.left.as_tuple())),
                  "center": dict(zip(ZONE_FIELDS, s.center.as_tuple())),
                  "right": dict(zip(ZONE_FIELDS, s.right.as_tuple()))},
        "perturbation": {"left": dict(zip(PERT_FIELDS, s.left_pert.as_tuple())),
                         "center": dict(zip(PERT_FIELDS, s.center_pert.as_tuple())),
                         "right": dict(zip(PERT_FIELDS, s.right_pert.as_tuple()))},
    })


def _load(args) -> SystemConfig:
    if args.scenario:
        try:
            sc = scenarios.get(args.scenario)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from None
        cfg = SystemConfig(sc.name, sc.system(), 0.0)
    elif args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"{args.config}: {exc.strerror}") from None
        cfg = parse_config(text, args.config)
    else:
        raise ConfigError("one of --config or --scenario is required")
    if getattr(args, "perturbation", None):
        try:
            vec = [float(v) for v in args.perturbation.split(",")]
        except ValueError:
            raise ConfigError("--perturbation expects 18 comma-separated numbers") from None
        if len(vec) != 18:
            raise ConfigError("--perturbation expects 18 comma-separated numbers")
        cfg = SystemConfig(cfg.name, cfg.system.with_perturbation_vector(vec), cfg.epsilon)
    return cfg


def _normal(cfg: SystemConfig) -> ThreeZoneSystem:
    if verify_normal_form(cfg.system):
        return cfg.system
    return to_normal_form(cfg.system).system


def _targets(text: str | None, default) -> tuple[float, ...]:
    if not text:
        return tuple(default)
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError("--targets expects comma-separated numbers") from None


def _default_targets(cfg: SystemConfig, nsys: ThreeZoneSystem):
    if cfg.name in scenarios.SCENARIOS:
        return scenarios.SCENARIOS[cfg.name].targets
    J = annulus_interval(nsys)
    return (0.2, 0.5, 0.8) if J.bounded and J.upper >= 1 else \
        tuple(J.upper * f for f in (0.2, 0.5, 0.8)) if J.bounded else (0.5, 1.0, 2.0)


# --- commands ---------------------------------------------------------------

def cmd_classify(args, out):
    cfg = _load(args)
    nsys = _normal(cfg)
    cls = classify_system(nsys)
    J = annulus_interval(nsys)
    tau_l, tau_r = separatrix_ordinates(nsys)
    hyp = check_hypotheses(cfg.system)
    report = {
        "name": cfg.name, "class": cls.label, "reflected": cls.reflected,
        "interval": {"lower": J.lower, "upper": J.upper if J.bounded else None},
        "tau": J.upper if J.bounded else None,
        "separatrix_ordinates": {"left": tau_l, "right": tau_r},
        "boundary": J.boundary_kind.value,
        "tangency_count_at_zero": J.tangency_count_at_zero,
        "normal_form": {side: dict(zip(ZONE_FIELDS, z.as_tuple()))
                        for side, z in zip(SIDES, (nsys.left, nsys.center, nsys.right))},
        "hypotheses": hyp.as_dict(),
    }
    if args.format == "json":
        out.write(dump_json(report))
    else:
        interval = f"J=(0,{fmt(J.upper)})" if J.bounded else "J=(0,\u221e)"
        parts = [cls.label, interval]
        if J.bounded:
            parts.append(J.boundary_kind.value)
        out.write(", ".join(parts) + "\n")
        if cls.reflected:
            out.write("read after the reflection (x, y) -> (-x, -y)\n")
        out.write(f"tau: {fmt(J.upper) if J.bounded else 'none'}\n")
        for side, z in zip(SIDES, (nsys.left, nsys.center, nsys.right)):
            coeffs = " ".join(f"{k}={fmt(v)}" for k, v in zip(ZONE_FIELDS, z.as_tuple()))
            out.write(f"{side}: {coeffs}\n")
        out.write(f"hypotheses: H1={hyp.h1} H2={hyp.h2} H3={hyp.h3}\n")
    return 0


def _grid(args, J):
    lo = args.h_min if args.h_min is not None else J.lower + 0.01 * (J.upper if J.bounded else 1)
    hi = args.h_max if args.h_max is not None else (J.upper * 0.99 if J.bounded else 5.0)
    return np.linspace(lo, hi, args.samples)


def cmd_melnikov(args, out):
    cfg = _load(args)
    nsys = _normal(cfg)
    J = annulus_interval(nsys)
    rows = melnikov_grid(nsys, _grid(args, J), with_oracle=args.with_oracle)
    header = ["h", "M_closed"] + (["M_oracle"] if args.with_oracle else [])
    out.write(dump_csv(header, rows))
    return 0


def cmd_zeros(args, out):
    cfg = _load(args)
    nsys = _normal(cfg)
    form = melnikov_coefficients(nsys)
    zs = find_zeros(form, grid=args.grid, cap=args.cap)
    out.write(dump_json(analysis_report(nsys, form, zeros=zs)))
    return 0


def cmd_design(args, out):
    cfg = _load(args)
    nsys = _normal(cfg)
    d = design_perturbation(nsys, _targets(args.targets, _default_targets(cfg, nsys)))
    form = melnikov_coefficients(d.system)
    cap = args.cap if args.cap is not None else 10 * max(1.0, max(d.targets))
    zs = find_zeros(form, grid=args.grid, cap=cap)
    out.write(dump_json(analysis_report(d.system, form, zeros=zs, design=d)))
    return 0


def cmd_validate(args, out):
    cfg = _load(args)
    nsys = _normal(cfg)
    targets = _targets(args.targets, _default_targets(cfg, nsys))
    d = design_perturbation(nsys, targets)
    form = melnikov_coefficients(d.system)
    cap = args.cap if args.cap is not None else 10 * max(1.0, max(d.targets))
    zs = find_zeros(form, grid=args.grid, cap=cap)
    search = locate_limit_cycles(d.system, args.epsilon, zs)
    report = analysis_report(d.system, form, zeros=zs, design=d)
    report.update(search.as_dict())
    report["expected"] = len(targets)
    report["found"] = len(search)
    out.write(dump_json(report))
    return 0 if len(search) >= len(targets) else 3


def cmd_wronskian(args, out):
    cfg = _load(args)
    nsys = _normal(cfg)
    form = melnikov_coefficients(nsys)
    h = args.h
    if h is None:
        golden = scenarios.WRONSKIAN_GOLDENS.get(cfg.name)
        h = golden[0] if golden else 0.5 * (form.domain.upper if form.domain.bounded else 1.0)
    method = DerivativeMethod(args.method)
    rep = wronskian(form.basis, h, method)
    payload = {"name": cfg.name, "basis": [b.name for b in form.basis], **rep.as_dict()}
    out.write(dump_json(payload))
    return 0


def cmd_portrait(args, out):
    cfg = _load(args)
    nsys = _normal(cfg)
    hs = [float(v) for v in args.levels.split(",")] if args.levels else [args.h]
    rows = []
    for h in hs:
        rows.extend((h,) + row for row in sample_arcs(nsys, h, args.samples))
    out.write(dump_csv(["h", "zone", "t", "x", "y"], rows))
    return 0


def cmd_trajectory(args, out):
    cfg = _load(args)
    nsys = _normal(cfg)
    eps = args.epsilon if args.epsilon is not None else cfg.epsilon
    traj = integrate_crossing(nsys, (1.0, args.h), args.t_max, epsilon=eps,
                              max_crossings=4 * args.revolutions)
    out.write(dump_csv(["t", "x", "y", "zone"], traj.rows()))
    return 0


# --- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pwlmelnikov",
                                description="Melnikov analysis of three-zone "
                                            "piecewise-linear Hamiltonian systems")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", help="JSON system configuration")
        src.add_argument("--scenario", help="built-in: " + ", ".join(scenarios.SCENARIOS))
        sp.add_argument("--perturbation",
                        help="18 comma-separated coefficients p,q,r,s,u,v for left, center, right")
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    sp = common(sub.add_parser("classify", help="system class and period annulus"))
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_classify)

    sp = common(sub.add_parser("melnikov", help="M(h) on a grid (CSV)"))
    sp.add_argument("--h-min", type=float)
    sp.add_argument("--h-max", type=float)
    sp.add_argument("--samples", type=int, default=21)
    sp.add_argument("--with-oracle", action="store_true")
    sp.set_defaults(func=cmd_melnikov)

    sp = common(sub.add_parser("zeros", help="zeros of M (JSON)"))
    sp.add_argument("--grid", type=int, default=400)
    sp.add_argument("--cap", type=float, help="scan limit for unbounded annuli")
    sp.set_defaults(func=cmd_zeros)

    for name, func, helptext in (("design", cmd_design, "perturbation with prescribed zeros"),
                                 ("validate", cmd_validate, "design followed by a limit-cycle search")):
        sp = common(sub.add_parser(name, help=helptext))
        sp.add_argument("--targets", help="comma-separated target zeros")
        sp.add_argument("--grid", type=int, default=400)
        sp.add_argument("--cap", type=float)
        if name == "validate":
            sp.add_argument("--epsilon", type=float, default=1e-3)
        sp.set_defaults(func=func)

    sp = common(sub.add_parser("wronskian", help="Wronskian of the basis (JSON)"))
    sp.add_argument("--h", type=float)
    sp.add_argument("--method", choices=[m.value for m in DerivativeMethod],
                    default=DerivativeMethod.ANALYTIC.value)
    sp.set_defaults(func=cmd_wronskian)

    sp = common(sub.add_parser("portrait", help="closed-form orbit samples (CSV)"))
    sp.add_argument("--h", type=float, default=0.5)
    sp.add_argument("--levels", help="comma-separated list of h values")
    sp.add_argument("--samples", type=int, default=50)
    sp.set_defaults(func=cmd_portrait)

    sp = common(sub.add_parser("trajectory", help="integrated trajectory (CSV)"))
    sp.add_argument("--h", type=float, default=0.5)
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--revolutions", type=int, default=1)
    sp.add_argument("--t-max", type=float, default=1e3)
    sp.set_defaults(func=cmd_trajectory)
    return p


def _error(kind: str, exc: BaseException, code: int) -> int:
    payload = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, HypothesisViolation) and exc.hypothesis:
        payload["hypothesis"] = exc.hypothesis
    sys.stderr.write(json.dumps(payload) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except ConfigError as exc:
        return _error("parse", exc, 1)
    except DomainViolation as exc:
        return _error("domain", exc, 2)
    except NumericalFailure as exc:
        return _error("numerical", exc, 3)
    except (MelnikovError, ValueError) as exc:
        return _error("domain", exc, 2)
    text = buf.getvalue()
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            return _error("io", exc, 1)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
