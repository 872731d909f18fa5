"""Grid sweeps over the force/spring surfaces and a derivative-free
dimensional-synthesis search for the straight-line stage.

Sweeps are full-factorial, row-major in declared variable order; points
the model cannot evaluate are kept in the table with an INFEASIBLE status
rather than dropped. Synthesis runs a deterministic Nelder-Mead descent
(fixed initial simplex at +5 per cent of each starting ratio, no
randomness), so identical specs reproduce identical logs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np
from scipy.optimize import minimize

from .errors import HoeckenError, InsufficientTravel, TargetMismatch, UnknownVariable
from .finger import FingerParams
from .forces import envelope_forces, pinch_force_chain
from .linkage import HoeckenDims, dxD_dthetaA, flattest_segment, trace_path
from .spring import sample as spring_sample

OK = "OK"
INFEASIBLE = "INFEASIBLE"


@dataclass(frozen=True)
class SweepVariable:
    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"variable {self.name!r} needs count >= 2")
        if self.hi < self.lo:
            raise ValueError(f"variable {self.name!r} has hi < lo")

    def values(self) -> list[float]:
        return [self.lo + (self.hi - self.lo) * i / (self.count - 1)
                for i in range(self.count)]


@dataclass(frozen=True)
class SweepSpec:
    variables: tuple[SweepVariable, ...]
    target: str
    fixed: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SweepTable:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]


# Angles cross the API in degrees (matching the CSV columns); conversion to
# radians happens inside the evaluators.

def _eval_pinch(p: FingerParams, fixed: dict, point: dict) -> dict:
    tau_A = fixed.get("tau_A", p.tau_A)
    theta1 = math.radians(point["theta1"])
    F1 = pinch_force_chain(p, 0.0, theta1, point["h2"],
                           tau_A=tau_A, r_eq=fixed["r_eq"], J_x=fixed["J_x"])
    return {"F1_N": F1, "F1_norm": F1 / tau_A}


def _eval_spring(p: FingerParams, fixed: dict, point: dict) -> dict:
    s = spring_sample(p, math.radians(point["theta1"]),
                      math.radians(point["theta2"]))
    return {"alpha_deg": math.degrees(s.alpha), "tau_d_Nmm": s.tau_d,
            "s1": s.s1, "s2": s.s2}


def _eval_envelope(p: FingerParams, fixed: dict, point: dict) -> dict:
    f = envelope_forces(p, math.radians(point["theta1"]),
                        math.radians(point["theta2"]))
    return {"F2_N": f.F2, "F3_N": f.F3}


def _eval_deviation(p: FingerParams, fixed: dict, point: dict) -> dict:
    dev = deviation_objective(
        point["lAC_ratio"], point["lBD_ratio"],
        l=fixed.get("l", p.hoecken.l),
        min_x_travel_units=fixed.get("min_x_travel_units", 5.18),
        samples=fixed.get("samples", 3601))
    return {"deviation_units": dev}


_TARGETS: dict[str, tuple[tuple[str, ...], tuple[str, ...], Callable]] = {
    # target: (variable names, variable column labels, evaluator)
    "PinchForce": (("h2", "theta1"), ("h2_mm", "theta1_deg"), _eval_pinch),
    "SpringAngle": (("theta1", "theta2"), ("theta1_deg", "theta2_deg"),
                    _eval_spring),
    "EnvelopeForces": (("theta1", "theta2"), ("theta1_deg", "theta2_deg"),
                       _eval_envelope),
    "Deviation": (("lAC_ratio", "lBD_ratio"), ("lAC_ratio", "lBD_ratio"),
                  _eval_deviation),
}

_VALUE_COLUMNS = {
    "PinchForce": ("F1_N", "F1_norm"),
    "SpringAngle": ("alpha_deg", "tau_d_Nmm", "s1", "s2"),
    "EnvelopeForces": ("F2_N", "F3_N"),
    "Deviation": ("deviation_units",),
}

_ALL_VARIABLES = frozenset(
    name for vars_, _, _ in _TARGETS.values() for name in vars_)


def _window_mid(dims: HoeckenDims, fixed: dict) -> float:
    trace = trace_path(dims, 0.0, 2.0 * math.pi,
                       fixed.get("samples", 3601))
    (w0, w1), _, _ = flattest_segment(
        trace, fixed.get("min_x_travel_units", 5.18) * dims.l)
    return 0.5 * (w0 + w1)


def run_sweep(spec: SweepSpec, params: FingerParams) -> SweepTable:
    """Full-factorial evaluation of a sweep spec against finger parameters."""
    if spec.target not in _TARGETS:
        raise TargetMismatch(f"unknown sweep target {spec.target!r}")
    var_names, var_labels, evaluator = _TARGETS[spec.target]
    if len(spec.variables) > 2:
        raise ValueError("surface targets take at most 2 swept variables")
    seen = set()
    for v in spec.variables:
        if v.name not in _ALL_VARIABLES:
            raise UnknownVariable(f"unknown sweep variable {v.name!r}")
        if v.name not in var_names:
            raise TargetMismatch(
                f"variable {v.name!r} is not consumed by target {spec.target!r}")
        if v.name in seen:
            raise ValueError(f"variable {v.name!r} swept twice")
        seen.add(v.name)
    missing = [n for n in var_names if n not in seen and n not in spec.fixed]
    if missing:
        raise TargetMismatch(
            f"target {spec.target!r} needs values for {missing}")

    fixed = dict(spec.fixed)
    if spec.target == "PinchForce":
        # The constant-arm surface form: resolve its constants once.
        fixed.setdefault("r_eq", params.h1)
        if fixed.get("J_x") is None:
            fixed["J_x"] = abs(dxD_dthetaA(
                params.hoecken, _window_mid(params.hoecken, fixed)))

    labels = [var_labels[var_names.index(v.name)] for v in spec.variables]
    value_cols = _VALUE_COLUMNS[spec.target]
    columns = tuple(labels) + value_cols + ("status",)

    rows = []
    for combo in itertools.product(*(v.values() for v in spec.variables)):
        point = {n: fixed[n] for n in var_names if n in fixed}
        point.update({v.name: value for v, value in zip(spec.variables, combo)})
        try:
            out = evaluator(params, fixed, point)
            rows.append(combo + tuple(out[c] for c in value_cols) + (OK,))
        except HoeckenError:
            rows.append(combo + tuple(math.nan for _ in value_cols)
                        + (INFEASIBLE,))
    return SweepTable(columns=columns, rows=tuple(rows))


def table_to_csv_rows(table: SweepTable) -> Iterable[str]:
    yield ",".join(table.columns)
    for row in table.rows:
        cells = []
        for value in row:
            if isinstance(value, str):
                cells.append(value)
            else:
                cells.append(f"{value:.6f}")
        yield ",".join(cells)


# ---------------------------------------------------------------------------
# Dimensional synthesis


def deviation_objective(lac_ratio: float, lbd_ratio: float, l: float = 30.0,
                        min_x_travel_units: float = 5.18,
                        samples: int = 3601) -> float:
    """Vertical band of the flattest window, in crank-length units."""
    dims = HoeckenDims.from_ratios(l, lac_ratio, lbd_ratio)
    trace = trace_path(dims, 0.0, 2.0 * math.pi, samples)
    _, dev, _ = flattest_segment(trace, min_x_travel_units * l)
    return dev / l


@dataclass(frozen=True)
class SynthesisSpec:
    lac_bounds: tuple[float, float] = (1.2, 1.8)
    lbd_bounds: tuple[float, float] = (5.0, 7.0)
    start: tuple[float, float] = (1.5, 6.0)
    budget: int = 100
    l: float = 30.0
    min_x_travel_units: float = 5.18
    samples: int = 3601

    def __post_init__(self):
        if self.budget < 20:
            raise ValueError("synthesis budget must be at least 20")
        for (lo, hi), x in zip((self.lac_bounds, self.lbd_bounds), self.start):
            if not lo <= x <= hi:
                raise ValueError("bounds must contain the starting ratios")


@dataclass(frozen=True)
class SynthesisEval:
    idx: int
    lac_ratio: float
    lbd_ratio: float
    deviation_units: float  # nan when infeasible
    status: str


@dataclass(frozen=True)
class SynthesisResult:
    best_ratios: tuple[float, float]
    best_deviation_units: float
    log: tuple[SynthesisEval, ...]
    status: str  # "Converged" | "BudgetExhausted"


def synthesize(spec: SynthesisSpec) -> SynthesisResult:
    """Deterministic Nelder-Mead descent on the straightness objective.

    Out-of-bounds or invalid linkage ratios score +inf and are logged as
    INFEASIBLE. Budget exhaustion is reported in the result status with the
    best point found so far, never raised.
    """
    log: list[SynthesisEval] = []

    def objective(x) -> float:
        lac, lbd = float(x[0]), float(x[1])
        idx = len(log)
        if not (spec.lac_bounds[0] <= lac <= spec.lac_bounds[1]
                and spec.lbd_bounds[0] <= lbd <= spec.lbd_bounds[1]):
            log.append(SynthesisEval(idx, lac, lbd, math.nan, INFEASIBLE))
            return math.inf
        try:
            dev = deviation_objective(lac, lbd, spec.l,
                                      spec.min_x_travel_units, spec.samples)
        except (ValueError, InsufficientTravel):
            log.append(SynthesisEval(idx, lac, lbd, math.nan, INFEASIBLE))
            return math.inf
        log.append(SynthesisEval(idx, lac, lbd, dev, OK))
        return dev

    x0 = np.array(spec.start, dtype=float)
    simplex = np.array([x0,
                        x0 + np.array([0.05 * x0[0], 0.0]),
                        x0 + np.array([0.0, 0.05 * x0[1]])])
    result = minimize(objective, x0, method="Nelder-Mead",
                      options={"initial_simplex": simplex,
                               "maxfev": spec.budget,
                               "xatol": 1e-6, "fatol": 1e-12,
                               "disp": False})

    feasible = [e for e in log if e.status == OK]
    if not feasible:
        raise InsufficientTravel("no feasible design inside the bounds")
    best = min(feasible, key=lambda e: (e.deviation_units, e.idx))
    status = "Converged" if result.success else "BudgetExhausted"
    return SynthesisResult(
        best_ratios=(best.lac_ratio, best.lbd_ratio),
        best_deviation_units=best.deviation_units,
        log=tuple(log),
        status=status,
    )


def synthesis_log_csv_rows(result: SynthesisResult) -> Iterable[str]:
    yield "eval_idx,lAC_ratio,lBD_ratio,deviation_units,status"
    for e in result.log:
        yield (f"{e.idx},{e.lac_ratio:.6f},{e.lbd_ratio:.6f},"
               f"{e.deviation_units:.6f},{e.status}")
