"""Scenario configurations: plain-text key = value files with strict validation.

Values are numbers, comma lists (``8,16,32``), inclusive ranges (``8..64``)
and strings; unknown keys are rejected with the offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

SCENARIOS = (
    "grushin-scaling",
    "heisenberg-yau",
    "density",
    "courant",
    "ballbox",
    "boxcount",
    "desing-check",
    "riemannian-limit",
    "flag-report",
)

# per-scenario schema: key -> (type tag, default); types: int, float, str,
# int_list, float_list
_COMMON: dict[str, tuple[str, Any]] = {
    "seed": ("int", 0),
    "threads": ("int", 1),
    "deterministic": ("int", 1),
    "out": ("str", ""),
}

SCENARIO_SPECS: dict[str, dict[str, tuple[str, Any]]] = {
    "grushin-scaling": {
        "alpha_list": ("int_list", [1]),
        "k_list": ("int_list", [8, 11, 16, 23, 32, 45, 64]),
        "n": ("int", 2048),
        "tolerance": ("float", 0.05),
    },
    "heisenberg-yau": {
        "m_list": ("int_list", [0, 1, 2, 3]),
        "count_m_list": ("int_list", [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]),
        "grid": ("int_list", [48, 48, 64]),
        "measure_grid": ("int_list", [32, 97, 96]),
        "proxy_eps": ("float", 0.05),
        "proxy_band_max": ("float", 3.0),
        "oscillator_n": ("int", 4096),
        "value_rtol": ("float", 0.03),
        "cosine_min": ("float", 0.98),
        "overlap_modes": ("int", 8),
    },
    "density": {
        "alpha": ("int", 1),
        "k_list": ("int_list", [4, 6, 8, 11, 16, 23, 32]),
        "grid": ("int_list", [101, 512]),
        "oscillator_n": ("int", 2048),
        "stencil_radius": ("float", 3.0),
        "band_max": ("float", 4.0),
        "tau_max": ("float", 0.5),
    },
    "courant": {
        "modes": ("int", 30),
        "grushin_grid": ("int_list", [64, 64]),
        "heisenberg_grid": ("int_list", [32, 32, 48]),
        "solver_tol": ("float", 1e-6),
    },
    "ballbox": {
        "alpha_list": ("int_list", [1, 2]),
        "grid": ("int_list", [256, 256]),
        "eps_list": ("float_list", [0.05, 0.1, 0.2, 0.3, 0.4]),
        "stencil_radius": ("float", 3.0),
        "ratio_max": ("float", 4.0),
    },
    "boxcount": {
        "grid": ("int_list", [50, 48, 48]),
        "eps_list": ("float_list", [0.3, 0.6, 1.2, 2.4]),
        "stencil_radius": ("float", 3.0),
        "slope_volume": ("float", 4.0),
        "slope_surface": ("float", 3.0),
        "slope_tol": ("float", 0.3),
    },
    "desing-check": {
        "alpha": ("int", 1),
        "flag_points": ("int", 20),
        "pairs": ("int", 50),
        "grid2d": ("int_list", [47, 160]),
        "grid3d": ("int_list", [47, 160, 80]),
        "pair_min_distance": ("float", 2.0),
        "inner_band": ("float", 0.85),
        "distance_rtol": ("float", 0.05),
    },
    "riemannian-limit": {
        "alpha": ("int", 1),
        "grid": ("int_list", [64, 64]),
        "eps_list": ("float_list", [0.0, 0.05, 0.1, 0.2, 0.4, 0.8]),
        "k_modes": ("int", 4),
    },
    "flag-report": {
        "structure": ("str", "grushin"),
        "alpha": ("int", 1),
        "depth_max": ("int", 6),
        "points": ("int", 12),
    },
}


@dataclass
class ScenarioConfig:
    scenario: str
    params: dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, key: str):
        return self.params[key]

    def to_text(self) -> str:
        lines = [f"scenario = {self.scenario}"]
        for key in sorted(self.params):
            val = self.params[key]
            if isinstance(val, list):
                lines.append(f"{key} = {','.join(_fmt(v) for v in val)}")
            else:
                lines.append(f"{key} = {_fmt(val)}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _parse_value(tag: str, raw: str, key: str, lineno: int):
    raw = raw.strip()
    try:
        if tag == "int":
            return int(raw)
        if tag == "float":
            return float(raw)
        if tag == "str":
            return raw
        if tag in ("int_list", "float_list"):
            conv = int if tag == "int_list" else float
            if tag == "int_list" and ".." in raw:
                lo, hi = raw.split("..")
                return list(range(int(lo), int(hi) + 1))
            return [conv(p) for p in raw.split(",") if p.strip()]
    except ValueError as exc:
        raise ValueError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    raise ValueError(f"line {lineno}: unhandled type {tag}")


def default_config(scenario: str) -> ScenarioConfig:
    if scenario not in SCENARIO_SPECS:
        raise ValueError(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")
    params = {k: (list(v) if isinstance(v, list) else v) for k, (_, v) in SCENARIO_SPECS[scenario].items()}
    for k, (_, v) in _COMMON.items():
        params[k] = v
    return ScenarioConfig(scenario=scenario, params=params)


def load_config_text(text: str, scenario: str | None = None) -> ScenarioConfig:
    entries: list[tuple[int, str, str]] = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "scenario":
            declared = value
        else:
            entries.append((lineno, key, value))
    name = scenario or declared
    if name is None:
        raise ValueError("config must declare a scenario (or pass one on the command line)")
    if declared is not None and scenario is not None and declared != scenario:
        raise ValueError(f"config declares scenario {declared!r} but {scenario!r} was requested")
    cfg = default_config(name)
    spec = SCENARIO_SPECS[name]
    for lineno, key, value in entries:
        if key in spec:
            tag = spec[key][0]
        elif key in _COMMON:
            tag = _COMMON[key][0]
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r} for scenario {name!r}")
        cfg.params[key] = _parse_value(tag, value, key, lineno)
    _validate(cfg)
    return cfg


def load_config(path, scenario: str | None = None) -> ScenarioConfig:
    with open(path) as fh:
        return load_config_text(fh.read(), scenario=scenario)


def _validate(cfg: ScenarioConfig) -> None:
    for key, val in cfg.params.items():
        if isinstance(val, list) and not val:
            raise ValueError(f"{key} must be a nonempty list")
    grids = [k for k in cfg.params if k.endswith("grid") or k in ("grid2d", "grid3d")]
    for k in grids:
        counts = cfg.params[k]
        if any(int(c) < 3 for c in counts):
            raise ValueError(f"{k}: per-axis counts must be >= 3")
        total = 1
        for c in counts:
            total *= int(c)
        if total > 3_000_000:
            raise ValueError(f"{k}: grid exceeds the desk-scale budget")
