"""Run configuration: ``key = value`` files with ``[model] [initial] [integrator] [output]``.

Precedence, lowest first: preset defaults, config file, environment
(``CONTACTDYN_OUTPUT_DIR`` for the output directory), command-line flags.
"""

from __future__ import annotations

import configparser
import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ContactError, InvalidConfig
from .integrator import IntegratorConfig, Scheme
from .io import format_float
from .models import ModelKind, ModelSpec, default_experiment
from .state import ContactState, validate

__all__ = ["RunConfig", "OUTPUT_DIR_ENV", "parse_vector", "load_sections", "resolve", "to_ini"]

OUTPUT_DIR_ENV = "CONTACTDYN_OUTPUT_DIR"

SECTIONS = {
    "model": ("kind", "omega", "gamma", "a", "omega1_sq", "omega2_sq", "g"),
    "initial": ("q", "p", "z", "lambda", "t"),
    "integrator": ("h", "n_steps", "record_every", "scheme"),
    "output": ("dir", "csv", "svg"),
}


@dataclass(frozen=True)
class RunConfig:
    model: ModelSpec
    initial: ContactState
    integ: IntegratorConfig
    outdir: Path = Path(".")
    csv: "str | None" = "trajectory.csv"
    svg: "str | None" = None

    @property
    def csv_path(self) -> "Path | None":
        return None if not self.csv else self.outdir / self.csv

    @property
    def svg_path(self) -> "Path | None":
        return None if not self.svg else self.outdir / self.svg


def parse_vector(text: str) -> list[float]:
    parts = [p for p in str(text).replace(" ", "").split(",") if p]
    if not parts:
        raise InvalidConfig(f"empty vector {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise InvalidConfig(f"cannot parse vector {text!r}") from exc


def load_sections(path: "str | Path") -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise InvalidConfig(f"cannot read config {path}: {exc}") from exc
    out: dict[str, dict[str, str]] = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise InvalidConfig(f"unknown section [{section}]")
        for key, value in parser.items(section):
            if key not in SECTIONS[section]:
                raise InvalidConfig(f"unknown key {key!r} in [{section}]")
        out[section] = dict(parser.items(section))
    return out


def _merge(base: dict, extra: "dict | None") -> dict:
    merged = {k: dict(v) for k, v in base.items()}
    for section, values in (extra or {}).items():
        merged.setdefault(section, {}).update({k: v for k, v in values.items() if v is not None})
    return merged


def _float(section: str, key: str, value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise InvalidConfig(f"[{section}] {key} = {value!r} is not a number") from exc


def _int(section: str, key: str, value) -> int:
    try:
        f = float(value)
    except (TypeError, ValueError) as exc:
        raise InvalidConfig(f"[{section}] {key} = {value!r} is not an integer") from exc
    if f != int(f):
        raise InvalidConfig(f"[{section}] {key} = {value!r} is not an integer")
    return int(f)


def resolve(
    preset: "str | None" = None,
    variant: int = 0,
    path: "str | Path | None" = None,
    overrides: "dict | None" = None,
    env: "dict | None" = None,
) -> RunConfig:
    """Assemble a validated :class:`RunConfig`; raises :class:`InvalidConfig` on any bad input."""
    env = os.environ if env is None else env
    file_values = load_sections(path) if path else {}
    kind_text = (
        (overrides or {}).get("model", {}).get("kind")
        or file_values.get("model", {}).get("kind")
        or preset
        or "A"
    )
    try:
        kind = ModelKind.parse(preset or kind_text)
        experiments = default_experiment(kind)
    except ContactError as exc:
        raise InvalidConfig(str(exc)) from exc
    if not 0 <= variant < len(experiments):
        raise InvalidConfig(f"preset {kind.value} has {len(experiments)} variant(s), got {variant}")
    ex = experiments[variant]
    values = _merge(
        {
            "model": {f.name: getattr(ex.spec, f.name) for f in dataclasses.fields(ex.spec)},
            "initial": {
                "q": ex.initial.q.tolist(),
                "p": ex.initial.p.tolist(),
                "z": ex.initial.z,
                "lambda": ex.initial.lam,
                "t": ex.initial.t,
            },
            "integrator": {
                "h": ex.config.h,
                "n_steps": ex.config.n_steps,
                "record_every": ex.config.record_every,
                "scheme": ex.config.scheme.value,
            },
            "output": {"dir": ".", "csv": "trajectory.csv", "svg": None},
        },
        file_values,
    )
    if env.get(OUTPUT_DIR_ENV):
        values["output"]["dir"] = env[OUTPUT_DIR_ENV]
    values = _merge(values, overrides)
    if preset:
        values["model"]["kind"] = kind.value

    m = values["model"]
    try:
        spec = ModelSpec(
            kind=ModelKind.parse(m["kind"]),
            **{k: _float("model", k, m[k]) for k in SECTIONS["model"][1:]},
        ).check()
    except ContactError as exc:
        raise InvalidConfig(str(exc)) from exc

    i = values["initial"]

    def vec(key):
        v = i[key]
        return parse_vector(v) if isinstance(v, str) else [float(x) for x in v]

    try:
        state = validate(
            ContactState(
                q=vec("q"),
                p=vec("p"),
                z=_float("initial", "z", i["z"]),
                lam=_float("initial", "lambda", i["lambda"]),
                t=_float("initial", "t", i["t"]),
            )
        )
    except ContactError as exc:
        raise InvalidConfig(f"invalid initial state: {exc}") from exc
    if state.n != spec.n:
        raise InvalidConfig(f"model {spec.kind.value} needs n={spec.n}, initial state has n={state.n}")

    g = values["integrator"]
    try:
        integ = IntegratorConfig(
            h=_float("integrator", "h", g["h"]),
            n_steps=_int("integrator", "n_steps", g["n_steps"]),
            record_every=_int("integrator", "record_every", g["record_every"]),
            scheme=Scheme.parse(str(g["scheme"])),
        )
    except ContactError as exc:
        raise InvalidConfig(str(exc)) from exc

    o = values["output"]
    return RunConfig(
        model=spec,
        initial=state,
        integ=integ,
        outdir=Path(o.get("dir") or "."),
        csv=o.get("csv") or None,
        svg=o.get("svg") or None,
    )


def to_ini(rc: RunConfig) -> str:
    """Serialise a run configuration in the format :func:`load_sections` reads."""
    m = rc.model
    lines = ["[model]", f"kind = {m.kind.value}"]
    lines += [f"{k} = {format_float(getattr(m, k))}" for k in SECTIONS["model"][1:]]
    s = rc.initial
    lines += [
        "",
        "[initial]",
        "q = " + ", ".join(format_float(v) for v in s.q),
        "p = " + ", ".join(format_float(v) for v in s.p),
        f"z = {format_float(s.z)}",
        f"lambda = {format_float(s.lam)}",
        f"t = {format_float(s.t)}",
        "",
        "[integrator]",
        f"h = {format_float(rc.integ.h)}",
        f"n_steps = {rc.integ.n_steps}",
        f"record_every = {rc.integ.record_every}",
        f"scheme = {rc.integ.scheme.value}",
        "",
        "[output]",
        f"dir = {rc.outdir}",
        f"csv = {rc.csv or ''}",
        f"svg = {rc.svg or ''}",
    ]
    return "\n".join(lines) + "\n"
