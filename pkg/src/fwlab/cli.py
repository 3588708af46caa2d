"""``fw-lab``: run a configured scenario through a list of transforms and write a report.

Config file (JSON)::

    {
      "scenario": {"preset": "dirac-oscillator", "n_points": 64}
                  | {"scenario": "free", "backend": "momentum-mode", "mass": 1.0,
                     "momentum": [0.3, -0.5, 0.7]}
                  | {"scenario": "electrostatic", "backend": "lattice", "coupling": 0.1,
                     "lattice": {"n_points": 64, "length": 16.0},
                     "profiles": {"A0": {"kind": "cosine", "amplitude": 1.0, "mode": 1}}},
      "transforms": ["eriksen", "ek", "su2-susy(minus)", {"method": "stepwise", "schedule_depth": 2}],
      "tolerances": {"tol_reduction": 1e-8},
      "output": {"path": "report.json", "format": "json"},
      "scaling": [{"method": "perturbative-electrostatic", "parameter": "coupling",
                   "values": [0.2, 0.1, 0.05], "metric": "operator"}]
    }

Exit status: 0 conformant, 1 configuration error, 2 numerical precondition
failure, 3 conformance mismatch.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import hamiltonians as ham
from .exceptions import ConfigurationError, NumericalPreconditionError
from .hamiltonians import SCENARIOS, ScenarioSpec
from .pipeline import (
    APPLICABILITY,
    PreparedScenario,
    Tolerances,
    TransformRequest,
    check_applicable,
    error_record,
    evaluate,
    parse_request,
    run_transform,
    timed,
)
from .report import REPORT_FORMATS, TransformReport, emit_report
from .transforms import METHODS
from .verify import order_scaling_fit

log = logging.getLogger("fwlab")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_MISMATCH = 0, 1, 2, 3

PRESETS = {
    "free-mode": ham.free_mode,
    "free-lattice": ham.free_lattice,
    "dirac-oscillator": ham.dirac_oscillator,
    "electrostatic": ham.electrostatic,
    "gravity": ham.gravity,
}
SCALING_PARAMETERS = ("coupling", "mass", "amplitude")
SCALING_METRICS = ("operator", "hamiltonian")


@dataclass(frozen=True)
class ScalingRequest:
    """Residual ``||X_method - X_eriksen||`` against a scanned scenario parameter."""

    method: str
    parameter: str
    values: tuple
    metric: str = "operator"

    def __post_init__(self):
        parse_request(self.method)
        if self.parameter not in SCALING_PARAMETERS:
            raise ConfigurationError(f"scaling parameter must be one of {SCALING_PARAMETERS}")
        if self.metric not in SCALING_METRICS:
            raise ConfigurationError(f"scaling metric must be one of {SCALING_METRICS}")
        if len(self.values) < 3 or any(not v > 0 for v in self.values):
            raise ConfigurationError("scaling needs at least 3 positive values")

    def to_dict(self):
        return {"method": self.method, "parameter": self.parameter,
                "values": list(self.values), "metric": self.metric}


@dataclass
class RunConfig:
    scenario: ScenarioSpec
    transforms: list
    tolerances: Tolerances = field(default_factory=Tolerances)
    output_path: Path = Path("fw-lab-report.json")
    report_format: str = "json"
    scaling: list = field(default_factory=list)

    def __post_init__(self):
        if self.report_format not in REPORT_FORMATS:
            raise ConfigurationError(f"format must be one of {REPORT_FORMATS}, got {self.report_format!r}")
        self.transforms = [parse_request(t) for t in self.transforms]
        if not self.transforms and not self.scaling:
            raise ConfigurationError("config lists no transforms")
        for req in self.transforms:
            check_applicable(req, self.scenario)
        for sc in self.scaling:
            check_applicable(parse_request(sc.method), self.scenario)

    def echo(self):
        return {
            "scenario": self.scenario.to_dict(),
            "transforms": [t.label for t in self.transforms],
            "tolerances": self.tolerances.resolved(self.scenario.dim),
            "output": {"path": str(self.output_path), "format": self.report_format},
            "scaling": [s.to_dict() for s in self.scaling],
        }


def scenario_from_dict(d, grid_size=None):
    d = dict(d)
    preset = d.pop("preset", None)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        if grid_size is not None and preset != "free-mode":
            d["n_points"] = grid_size
        try:
            return PRESETS[preset](**d)
        except TypeError as exc:
            raise ConfigurationError(f"bad parameters for preset {preset!r}: {exc}") from None
    if grid_size is not None and d.get("lattice"):
        d["lattice"] = {**d["lattice"], "n_points": grid_size}
    try:
        return ScenarioSpec.from_dict(d)
    except (TypeError, KeyError) as exc:
        raise ConfigurationError(f"bad scenario block: {exc}") from None


def config_from_dict(d, tol_overrides=None, grid_size=None, out=None, fmt=None):
    if not isinstance(d, dict) or "scenario" not in d:
        raise ConfigurationError("config must be an object with a 'scenario' block")
    unknown = set(d) - {"scenario", "transforms", "tolerances", "output", "scaling"}
    if unknown:
        raise ConfigurationError(f"unknown config keys {sorted(unknown)}")
    output = d.get("output", {})
    tolerances = {**d.get("tolerances", {}), **(tol_overrides or {})}
    try:
        scaling = [ScalingRequest(s["method"], s["parameter"], tuple(s["values"]), s.get("metric", "operator"))
                   for s in d.get("scaling", [])]
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"bad scaling block: {exc}") from None
    return RunConfig(
        scenario=scenario_from_dict(d["scenario"], grid_size),
        transforms=list(d.get("transforms", [])),
        tolerances=Tolerances.from_mapping(tolerances),
        output_path=Path(out or output.get("path", "fw-lab-report.json")),
        report_format=fmt or output.get("format", "json"),
        scaling=scaling,
    )


def load_config(path, **overrides):
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from None
    return config_from_dict(data, **overrides)


def _scaled_spec(spec, parameter, value):
    if parameter == "coupling":
        return spec.replace(coupling=value)
    if parameter == "mass":
        return spec.replace(mass=value)
    profiles = {}
    for name, prof in spec.profiles.items():
        profiles[name] = replace(prof, amplitude=prof.amplitude * value)
    return spec.replace(profiles=profiles)


def run_scaling(request, spec, tolerances):
    req = parse_request(request.method)
    residuals = []
    try:
        for value in request.values:
            prepared = PreparedScenario.build(_scaled_spec(spec, request.parameter, value))
            result = run_transform(req, prepared, tolerances)
            oracle = prepared.oracle(tolerances.gap_min)
            diff = result.u - oracle.u if request.metric == "operator" else result.h_transformed - oracle.h_transformed
            residuals.append(float(np.linalg.norm(diff, 2)))
        exponent = order_scaling_fit(list(zip(request.values, residuals)))
    except (NumericalPreconditionError, ValueError) as exc:
        return {**request.to_dict(), "status": "error", "error_type": type(exc).__name__, "message": str(exc),
                "residuals": residuals}
    return {**request.to_dict(), "status": "ok", "residuals": residuals, "exponent": exponent}


def run_scenario(config):
    """Build the scenario, run and verify every transform, and assemble the report."""
    prepared = PreparedScenario.build(config.scenario)
    records = []
    for req in config.transforms:
        try:
            (result, elapsed) = timed(run_transform, req, prepared, config.tolerances)
            rec = evaluate(result, prepared, req, config.tolerances)
            rec["wall_time"] = elapsed
        except NumericalPreconditionError as exc:
            log.warning("%s: %s", req.label, exc)
            rec = error_record(req, exc)
        records.append(rec)
    scaling = [run_scaling(s, config.scenario, config.tolerances) for s in config.scaling]
    return TransformReport(config=config.echo(), transforms=records, scaling=scaling)


def exit_status(report):
    if any(r["status"] == "error" for r in report.transforms) or any(
        s["status"] == "error" for s in report.scaling
    ):
        return EXIT_NUMERICAL
    if report.conformance["mismatches"]:
        return EXIT_MISMATCH
    return EXIT_OK


def _parse_tol(items):
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigurationError(f"--tol expects name=value, got {item!r}")
        out[name.strip()] = value.strip()
    return out


def _format_table(report):
    lines = [f"{'method':24s} {'expected':>8s} {'observed':>8s}  {'unitarity':>9s} {'blockdiag':>9s} "
             f"{'spectrum':>9s} {'mismatch':>9s}"]
    for r in report.transforms:
        if r["status"] == "error":
            lines.append(f"{r['method']:24s} {str(r['expected']):>8s} {'ERROR':>8s}  {r['message']}")
            continue
        lines.append(
            f"{r['method']:24s} {str(r['expected']):>8s} {r['observed']:>8s}  {r['unitarity_residual']:9.2e} "
            f"{r['blockdiag_residual']:9.2e} {r['spectrum_residual']:9.2e} "
            f"{r['reduction']['max_oracle_mismatch']:9.2e}"
        )
    for s in report.scaling:
        tail = f"exponent {s['exponent']:.3f}" if s["status"] == "ok" else f"ERROR {s['message']}"
        lines.append(f"scaling {s['method']} vs {s['parameter']} ({s['metric']}): {tail}")
    return "\n".join(lines)


def build_parser():
    parser = argparse.ArgumentParser(prog="fw-lab", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a config file")
    run.add_argument("config")
    run.add_argument("--tol", action="append", metavar="NAME=VALUE", help="tolerance override (repeatable)")
    run.add_argument("--grid-size", type=int, help="override the lattice size N")
    run.add_argument("--out", help="report path")
    run.add_argument("--format", choices=REPORT_FORMATS)
    sub.add_parser("list-scenarios", help="list scenarios and presets")
    sub.add_parser("list-transforms", help="list transforms and where they apply")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "list-scenarios":
        for name in SCENARIOS:
            print(name)
        for name in sorted(PRESETS):
            print(f"preset:{name}")
        return EXIT_OK
    if args.command == "list-transforms":
        for name in METHODS:
            scenarios, backends = APPLICABILITY[name]
            expected = TransformRequest(name).expected
            print(f"{name:28s} scenarios={','.join(scenarios)} backends={','.join(backends)} "
                  f"expected={expected}")
        return EXIT_OK
    try:
        config = load_config(args.config, tol_overrides=_parse_tol(args.tol), grid_size=args.grid_size,
                             out=args.out, fmt=args.format)
        report = run_scenario(config)
    except ConfigurationError as exc:
        print(f"fw-lab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalPreconditionError as exc:
        print(f"fw-lab: numerical precondition failed: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    try:
        written = emit_report(report, config.output_path, config.report_format)
    except OSError as exc:
        print(f"fw-lab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(_format_table(report))
    for path in written:
        print(f"wrote {path}")
    status = exit_status(report)
    if status == EXIT_MISMATCH:
        print(f"fw-lab: conformance mismatch: {', '.join(report.conformance['mismatches'])}", file=sys.stderr)
    elif status == EXIT_NUMERICAL:
        print("fw-lab: numerical precondition failures: "
              f"{', '.join(report.conformance['errors'])}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
