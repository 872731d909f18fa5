"""Run configuration: JSON loading, strict validation, and hashing.

A config file overrides the shipped defaults key by key. Unknown keys are
rejected with a diagnostic naming the offending path; keys starting with
an underscore are comments and pass through untouched. The effective
(merged) config is hashed so identical configurations produce identical
output files.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ConfigError
from .finger import FingerParams
from .geometry import Point2
from .linkage import HoeckenDims
from .simulate import HandConfig
from .sweep import SynthesisSpec

SEED_DIR_ENV = "HOECKEN_SEED_DIR"
DEFAULTS_FILENAME = "defaults.json"


def _load_defaults() -> dict:
    text = resources.files("hoecken").joinpath("data/defaults.json").read_text(
        encoding="utf-8")
    return json.loads(text)


def _merge(base: dict, override: dict, path: str = "") -> dict:
    merged = dict(base)
    for key, value in override.items():
        here = f"{path}.{key}" if path else key
        if key.startswith("_"):
            merged[key] = value
            continue
        if key not in base:
            raise ConfigError(f"unknown config key: {here!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key {here!r} must be an object")
            merged[key] = _merge(base[key], value, here)
        else:
            merged[key] = value
    return merged


def config_hash(effective: dict) -> str:
    canonical = json.dumps(effective, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration with constructed domain objects."""

    effective: dict
    hash: str
    dims: HoeckenDims
    finger: FingerParams
    hand: HandConfig
    synthesis: SynthesisSpec

    @property
    def trace_samples(self) -> int:
        return int(self.effective["trace"]["samples"])

    @property
    def min_x_travel_units(self) -> float:
        return float(self.effective["trace"]["min_x_travel_units"])

    @property
    def pinch(self) -> dict:
        return self.effective["pinch"]

    @property
    def envelope(self) -> dict:
        return self.effective["envelope"]


def _build(effective: dict) -> RunConfig:
    try:
        h = effective["hoecken"]
        dims = HoeckenDims(l=float(h["l"]), l_AC=float(h["l_AC"]),
                           l_BD=float(h["l_BD"]))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid 'hoecken' section: {exc}") from exc
    try:
        f = effective["finger"]
        finger = FingerParams(
            AH=float(f["AH"]), BH=float(f["BH"]), AB0=float(f["AB0"]),
            EF=float(f["EF"]), E=Point2(float(f["E"][0]), float(f["E"][1])),
            l1=float(f["l1"]), h1=float(f["h1"]), h2_env=float(f["h2_env"]),
            k_d=float(f["k_d"]), tau1=float(f["tau1"]),
            tau_A=float(f["tau_A"]), preload=float(f["preload"]),
            hoecken=dims)
    except (ValueError, TypeError, IndexError) as exc:
        raise ConfigError(f"invalid 'finger' section: {exc}") from exc
    try:
        hd = effective["hand"]
        tr = effective["trace"]
        hand = HandConfig(
            finger=finger, span=float(hd["span"]), step=float(hd["step"]),
            symmetric=bool(hd["symmetric"]),
            min_x_travel_units=float(tr["min_x_travel_units"]),
            window_samples=int(tr["samples"]))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid 'hand'/'trace' section: {exc}") from exc
    try:
        s = effective["synthesis"]
        synthesis = SynthesisSpec(
            lac_bounds=tuple(float(v) for v in s["lAC_ratio_bounds"]),
            lbd_bounds=tuple(float(v) for v in s["lBD_ratio_bounds"]),
            start=tuple(float(v) for v in s["start"]),
            budget=int(s["budget"]), l=dims.l,
            min_x_travel_units=float(effective["trace"]["min_x_travel_units"]),
            samples=int(effective["trace"]["samples"]))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid 'synthesis' section: {exc}") from exc
    return RunConfig(effective=effective, hash=config_hash(effective),
                     dims=dims, finger=finger, hand=hand, synthesis=synthesis)


def load_run_config(path: str | os.PathLike | None = None) -> RunConfig:
    """Load and validate a run configuration.

    Search order: explicit path, then $HOECKEN_SEED_DIR/defaults.json,
    then the packaged defaults.
    """
    override: dict = {}
    if path is not None:
        try:
            override = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in {path!r}: {exc}") from exc
    else:
        seed_dir = os.environ.get(SEED_DIR_ENV)
        if seed_dir:
            candidate = Path(seed_dir) / DEFAULTS_FILENAME
            if candidate.is_file():
                try:
                    override = json.loads(candidate.read_text(encoding="utf-8"))
                except json.JSONDecodeError as exc:
                    raise ConfigError(
                        f"malformed JSON in {candidate}: {exc}") from exc
    if not isinstance(override, dict):
        raise ConfigError("config root must be a JSON object")
    effective = _merge(_load_defaults(), override)
    return _build(effective)
