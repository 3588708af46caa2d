"""Method dispatch, applicability rules and the per-transform verification battery.

Shared by the command-line runner and the estimator wrappers.
"""

import re
import time
from dataclasses import dataclass, field, fields

import numpy as np

from .exceptions import ConfigurationError
from .hamiltonians import BACKENDS, SCENARIOS, ScenarioSpec, build_hamiltonian, build_susy
from .transforms import (
    METHODS,
    eriksen,
    ek,
    ek_then_fw,
    fw_commuting,
    heidenreich,
    melosh,
    melosh_then_fw,
    perturbative_electrostatic,
    perturbative_gravity,
    stepwise_fw,
    su2_susy,
    u0_free,
)
from .validation import GAP_MIN, default_tol
from .verify import (
    TOL_DEGEN,
    check_block_diagonal,
    check_reduction,
    check_spectrum_preserved,
    check_unitary,
    off_block_norm,
)

_ALL = (SCENARIOS, BACKENDS)
_MODE_ONLY = (("free",), ("momentum-mode",))
APPLICABILITY = {
    "u0-free": (("free",), BACKENDS),
    "fw-commuting": _ALL,
    "eriksen": _ALL,
    "stepwise": _ALL,
    "perturbative-electrostatic": (("electrostatic",), ("lattice",)),
    "perturbative-gravity": (("gravity",), ("lattice",)),
    "su2-susy": (("susy-fields",), ("lattice",)),
    "ek": (("free", "gravity"), BACKENDS),
    "ek-to-fw": _MODE_ONLY,
    "melosh": _MODE_ONLY,
    "melosh-to-fw": _MODE_ONLY,
    "heidenreich": (("free", "gravity"), BACKENDS),
}
OPTION_CHOICES = {
    "su2-susy": {"sign": ("plus", "minus")},
    "stepwise": {"schedule_depth": (1, 2, 3)},
}
# reduction-condition classification of each operator; None = not classified
_EXPECTED = {
    "u0-free": "pass",
    "fw-commuting": "pass",
    "eriksen": "pass",
    "stepwise": None,
    "perturbative-electrostatic": "pass",
    "perturbative-gravity": "pass",
    "ek": "fail",
    "ek-to-fw": "pass",
    "melosh": "fail",
    "melosh-to-fw": "pass",
    "heidenreich": "fail",
}
PERTURBATIVE = ("perturbative-electrostatic", "perturbative-gravity")


@dataclass(frozen=True)
class TransformRequest:
    method: str
    options: tuple = ()

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigurationError(f"unknown transform {self.method!r}; choose from {METHODS}")
        allowed = OPTION_CHOICES.get(self.method, {})
        for key, value in self.options:
            if key not in allowed:
                raise ConfigurationError(f"transform {self.method!r} takes no option {key!r}")
            if value not in allowed[key]:
                raise ConfigurationError(f"{self.method} option {key}={value!r}; choose from {allowed[key]}")

    @property
    def kwargs(self):
        return dict(self.options)

    @property
    def label(self):
        if not self.options:
            return self.method
        return f"{self.method}({','.join(str(v) for _, v in self.options)})"

    @property
    def expected(self):
        if self.method == "su2-susy":
            return "fail" if self.kwargs.get("sign", "plus") == "minus" else "pass"
        return _EXPECTED[self.method]

    def to_dict(self):
        return {"method": self.method, **self.kwargs}


_LABEL = re.compile(r"^\s*([a-z0-9-]+)\s*(?:\(\s*([^)]*?)\s*\))?\s*$")


def parse_request(item):
    """Accept ``"ek"``, ``"su2-susy(minus)"``, ``"stepwise(2)"`` or ``{"method": ..., **options}``."""
    if isinstance(item, TransformRequest):
        return item
    if isinstance(item, dict):
        d = dict(item)
        method = d.pop("method", None)
        if method is None:
            raise ConfigurationError(f"transform entry {item!r} has no 'method'")
        return TransformRequest(method, tuple(sorted(d.items())))
    if not isinstance(item, str):
        raise ConfigurationError(f"cannot read transform entry {item!r}")
    match = _LABEL.match(item)
    if not match:
        raise ConfigurationError(f"cannot read transform entry {item!r}")
    method, arg = match.groups()
    if not arg:
        return TransformRequest(method)
    keys = list(OPTION_CHOICES.get(method, {}))
    if len(keys) != 1:
        raise ConfigurationError(f"transform {method!r} takes no positional option")
    value = int(arg) if arg.isdigit() else arg
    return TransformRequest(method, ((keys[0], value),))


def check_applicable(request, spec):
    scenarios, backends = APPLICABILITY[request.method]
    if spec.scenario not in scenarios or spec.backend not in backends:
        raise ConfigurationError(
            f"transform {request.label!r} does not apply to scenario {spec.scenario!r} "
            f"on the {spec.backend!r} backend"
        )


@dataclass
class Tolerances:
    """Tolerance set; ``None`` entries resolve to dimension-dependent defaults."""

    tol_reduction: float | None = None
    tol_unitary: float | None = None
    tol_blockdiag: float | None = None
    tol_spectrum: float = 1e-9
    tol_commute: float | None = None
    tol_degen: float = TOL_DEGEN
    gap_min: float = GAP_MIN

    @classmethod
    def from_mapping(cls, mapping):
        names = {f.name for f in fields(cls)}
        out = {}
        for key, value in (mapping or {}).items():
            if key not in names:
                raise ConfigurationError(f"unknown tolerance {key!r}; choose from {sorted(names)}")
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ConfigurationError(f"tolerance {key} must be a number, got {value!r}") from None
            if not value > 0:
                raise ConfigurationError(f"tolerance {key} must be positive, got {value}")
            out[key] = value
        return cls(**out)

    def resolved(self, dim):
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        for key in ("tol_reduction", "tol_unitary", "tol_blockdiag"):
            if d[key] is None:
                d[key] = default_tol(dim)
        return d

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class PreparedScenario:
    """A built scenario plus the Eriksen oracle, computed once and shared."""

    spec: ScenarioSpec | None
    split: object
    triple: object = None
    _oracle: object = field(default=None, repr=False)

    @classmethod
    def build(cls, spec):
        if spec.scenario == "susy-fields":
            split, triple = build_susy(spec)
            return cls(spec, split, triple)
        return cls(spec, build_hamiltonian(spec))

    def oracle(self, gap_min=GAP_MIN):
        if self._oracle is None:
            self._oracle = eriksen(self.split.h_full, gap_min)
        return self._oracle


def _need_spec(prepared, method):
    if prepared.spec is None:
        raise ConfigurationError(f"transform {method!r} needs a scenario specification")
    return prepared.spec


def run_transform(request, prepared, tolerances=None):
    """Compute one transform; precondition failures propagate as exceptions."""
    tol = tolerances or Tolerances()
    method, kw = request.method, request.kwargs
    split = prepared.split
    if prepared.spec is not None:
        check_applicable(request, prepared.spec)
    if method == "eriksen":
        return prepared.oracle(tol.gap_min)
    if method == "fw-commuting":
        return fw_commuting(split, tol.tol_commute)
    if method == "stepwise":
        return stepwise_fw(split, kw.get("schedule_depth", 3))[0]
    if method == "ek":
        return ek(split, tol.gap_min)
    if method == "heidenreich":
        return heidenreich(split, tol.gap_min)
    spec = _need_spec(prepared, method)
    if method == "u0-free":
        if spec.backend == "lattice":
            return u0_free(spec.mass, lattice=spec.lattice)
        return u0_free(spec.mass, spec.momentum)
    if method == "perturbative-electrostatic":
        return perturbative_electrostatic(spec)
    if method == "perturbative-gravity":
        return perturbative_gravity(spec)
    if method == "su2-susy":
        return su2_susy(prepared.triple, kw.get("sign", "plus"), tol.gap_min)
    if method == "ek-to-fw":
        return ek_then_fw(spec.mass, spec.momentum, tol.gap_min)
    if method == "melosh":
        return melosh(spec.mass, spec.momentum)
    return melosh_then_fw(spec.mass, spec.momentum, tol.gap_min)


def jsonable(value):
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    return value


def evaluate(result, prepared, request, tolerances=None):
    """Run the verification battery on one transform result and return a flat record.

    Truncated perturbative operators are neither exactly unitary nor exactly
    spectrum preserving; their reduction and unitarity thresholds are the
    truncation tolerance recorded in the result metadata.
    """
    tol = (tolerances or Tolerances()).resolved(prepared.split.dim)
    h = prepared.split.h_full
    tol_red, tol_unit = tol["tol_reduction"], tol["tol_unitary"]
    if request.method in PERTURBATIVE:
        tol_red = tol_unit = result.metadata["truncation_tolerance"]
    verdict = check_reduction(result.u, h, tol_red, tol_unit, tol["gap_min"], tol["tol_degen"],
                              oracle=prepared.oracle(tol["gap_min"]).u)
    observed = "pass" if verdict.passed else "fail"
    expected = request.expected
    return {
        "method": request.label,
        "request": request.to_dict(),
        "status": "ok",
        "expected": expected,
        "observed": observed,
        "conformant": None if expected is None else observed == expected,
        "unitarity_residual": check_unitary(result.u),
        "unitarity_residual_fro": check_unitary(result.u, "fro"),
        "blockdiag_residual": check_block_diagonal(result.h_transformed),
        "off_block_norm": off_block_norm(result.h_transformed),
        "spectrum_residual": check_spectrum_preserved(h, result.h_transformed, relative=True),
        "reduction": verdict.summary(),
        "reduction_groups": verdict.per_group,
        "metadata": jsonable(result.metadata),
    }


def error_record(request, exc):
    return {
        "method": request.label,
        "request": request.to_dict(),
        "status": "error",
        "expected": request.expected,
        "observed": None,
        "conformant": None,
        "error_type": type(exc).__name__,
        "message": str(exc),
    }


def timed(func, *args, **kwargs):
    start = time.perf_counter()
    out = func(*args, **kwargs)
    return out, time.perf_counter() - start
