"""Run-configuration parsing for the command-line front end.

Configs are a single JSON document; CLI flags override individual fields.
SI values appear only here.  Durations carry an explicit units field
("seconds" or "dimensionless") and are never inferred.  A missing mass
defaults to 87 atomic mass units with a loud notice on stderr, since
absolute SI reproductions need an assumed species.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field

from .errors import InvalidSpecError
from .protocols import FAMILIES
from .units import ATOMIC_MASS_KG, DEFAULT_MASS_AMU, TrapSpec

DEFAULT_FAMILIES = ("bang-singular-bang", "unconstrained", "polynomial")


@dataclass
class SimOptions:
    potential_model: str = "quartic"
    dt: float = 5e-4
    n_points: int = 4096
    half_width: float | None = None  # None: derived from gamma and waist
    leak_threshold: float = 1e-4
    auto_converge: bool = True
    quantum_number: int = 0
    snapshot_stride: int | None = None  # steps between |psi|^2 dumps


@dataclass
class SweepOptions:
    axis: str  # "t_f" | "waist"
    start: float  # SI units (seconds or meters) unless dimensionless flagged
    stop: float
    points: int
    scale: str = "linear"
    units: str | None = None  # for t_f axis: "seconds" | "dimensionless"
    families: tuple[str, ...] = DEFAULT_FAMILIES
    simulate: bool = True


@dataclass
class RunConfig:
    trap: TrapSpec
    delta: float | None
    family: str | None
    tau_f: float | None  # dimensionless; resolved from the duration block
    sim: SimOptions
    sweep: SweepOptions | None
    families: tuple[str, ...] = DEFAULT_FAMILIES
    protocol_file: str | None = None
    raw: dict = field(default_factory=dict)


def _pick_one(block: dict, keys: tuple[str, ...], what: str) -> tuple[str, float]:
    present = [k for k in keys if k in block]
    if len(present) != 1:
        raise InvalidSpecError(
            what, f"exactly one of {keys} required, found {present or 'none'}"
        )
    return present[0], float(block[present[0]])


def parse_trap(block: dict, notice=None) -> TrapSpec:
    key0, v0 = _pick_one(block, ("omega0_rad_per_s", "frequency0_hz"), "trap.omega0")
    keyf, vf = _pick_one(block, ("omega_f_rad_per_s", "frequency_f_hz"), "trap.omega_f")
    omega0 = v0 if key0.startswith("omega") else 2.0 * math.pi * v0
    omega_f = vf if keyf.startswith("omega") else 2.0 * math.pi * vf
    if "waist_m" not in block:
        raise InvalidSpecError("trap.waist_m", "required")
    waist = float(block["waist_m"])
    if "mass_kg" in block and "mass_amu" in block:
        raise InvalidSpecError("trap.mass", "give mass_kg or mass_amu, not both")
    if "mass_kg" in block:
        mass = float(block["mass_kg"])
    elif "mass_amu" in block:
        mass = float(block["mass_amu"]) * ATOMIC_MASS_KG
    else:
        mass = DEFAULT_MASS_AMU * ATOMIC_MASS_KG
        print(
            f"NOTICE: trap.mass not given; defaulting to {DEFAULT_MASS_AMU:g} "
            "atomic mass units. Absolute fidelities depend on this choice.",
            file=notice if notice is not None else sys.stderr,
        )
    return TrapSpec(omega0=omega0, omega_f=omega_f, waist=waist, mass=mass)


def parse_duration(block: dict | None, omega0: float, what: str = "duration") -> float | None:
    """Resolve a {value, units} block to dimensionless tau."""
    if block is None:
        return None
    if not isinstance(block, dict) or "value" not in block or "units" not in block:
        raise InvalidSpecError(what, 'must be {"value": <number>, "units": "seconds"|"dimensionless"}')
    value = float(block["value"])
    units = block["units"]
    if units == "seconds":
        return value * omega0
    if units == "dimensionless":
        return value
    raise InvalidSpecError(f"{what}.units", f"unknown units {units!r}")


def _parse_families(items, what: str) -> tuple[str, ...]:
    fams = tuple(items)
    for f in fams:
        if f not in FAMILIES:
            raise InvalidSpecError(what, f"unknown family {f!r} (choose from {FAMILIES})")
    return fams


def parse_config(doc: dict, notice=None) -> RunConfig:
    if "trap" not in doc:
        raise InvalidSpecError("trap", "required block")
    trap = parse_trap(doc["trap"], notice)

    delta = None
    if "bound" in doc:
        raw_delta = doc["bound"].get("delta")
        if raw_delta is None or float(raw_delta) <= 0:
            raise InvalidSpecError("bound.delta", f"must be > 0, got {raw_delta!r}")
        delta = float(raw_delta)

    family = None
    tau_f = None
    proto = doc.get("protocol")
    if proto:
        family = proto.get("family")
        if family is not None and family not in FAMILIES:
            raise InvalidSpecError(
                "protocol.family", f"unknown family {family!r} (choose from {FAMILIES})"
            )
        tau_f = parse_duration(proto.get("duration"), trap.omega0, "protocol.duration")

    sim = SimOptions()
    for key, value in (doc.get("sim") or {}).items():
        if not hasattr(sim, key):
            raise InvalidSpecError(f"sim.{key}", "unknown option")
        setattr(sim, key, value)

    sweep = None
    sw = doc.get("sweep")
    if sw:
        for key in ("axis", "start", "stop", "points"):
            if key not in sw:
                raise InvalidSpecError(f"sweep.{key}", "required")
        if sw["axis"] not in ("t_f", "waist"):
            raise InvalidSpecError("sweep.axis", f"must be t_f or waist, got {sw['axis']!r}")
        start, stop = float(sw["start"]), float(sw["stop"])
        if not (0 < start <= stop):
            raise InvalidSpecError("sweep.start", "range must be positive and ordered")
        sweep = SweepOptions(
            axis=sw["axis"],
            start=start,
            stop=stop,
            points=int(sw["points"]),
            scale=sw.get("scale", "linear"),
            units=sw.get("units"),
            families=_parse_families(sw.get("families", DEFAULT_FAMILIES), "sweep.families"),
            simulate=bool(sw.get("simulate", True)),
        )
        if sweep.scale not in ("linear", "log"):
            raise InvalidSpecError("sweep.scale", f"must be linear or log, got {sweep.scale!r}")
        if sweep.axis == "t_f" and sweep.units not in ("seconds", "dimensionless"):
            raise InvalidSpecError(
                "sweep.units", 't_f sweeps need units "seconds" or "dimensionless"'
            )

    families = _parse_families(doc.get("families", DEFAULT_FAMILIES), "families")

    return RunConfig(
        trap=trap,
        delta=delta,
        family=family,
        tau_f=tau_f,
        sim=sim,
        sweep=sweep,
        families=families,
        protocol_file=doc.get("protocol_file"),
        raw=doc,
    )


def load_config(path: str, notice=None) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(json.load(fh), notice)
