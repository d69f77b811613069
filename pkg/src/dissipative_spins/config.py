"""INI-style configuration files for sweeps and cold-atom parameter sets.

Sweep config grammar (``#`` or ``;`` start comments, keys are case-insensitive)::

    [model]
    n_sites = 4
    model = ising            ; xxz | ising | heisenberg
    alpha1 = 0.25            ; xxz XX+YY coupling
    alpha2 = 1.0             ; xxz ZZ coupling
    alpha3 = 1.0             ; ising ZZ coupling
    alpha = 1.0              ; heisenberg coupling
    boundary = open          ; open | periodic
    b_z = 0.0
    nu_tilde = 0.0

    [dissipator]
    kind = local             ; local | collective | local_with_heating
    rate = 1.0               ; equal local rate, or the collective rate
    rates = 1, 1.5, 0.7, 1.2 ; per-site local rates (overrides rate)
    a_minus = 1.0            ; local_with_heating only
    a_plus = 0.0

    [sweep]
    parameter = b_x
    start = 0.05
    stop = 3.0
    points = 2001
    gammas = 1e-3, 1e-4      ; scale factors applied to every rate
    delta_b = 3e-6           ; infidelity offset, must be below the grid step

    [sector]                 ; optional, collective dissipation + periodic chain
    T = 1
    R = 1

    [output]
    outputs = jx, jz, spectrum, infidelity, crossings, cnorms
    directory = out

Parameter files for ``params``/``check`` use sections ``[lambda]``,
``[raman]`` (optional), ``[hubbard]`` (optional) and ``[validity]``
(``margin``).  ``[lambda]`` takes either ``eta1`` or ``k1`` plus ``mass``.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .coldatom import HubbardParams, LambdaSystemParams, RamanFieldParams
from .models import DissipatorSpec, ModelSpec

OUTPUTS = ("jx", "jz", "spectrum", "infidelity", "crossings", "cnorms")


class ConfigError(ValueError):
    def __init__(self, message: str, path=None, line: int | None = None):
        where = str(path) if path is not None else "<config>"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}")
        self.line = line


@dataclass(frozen=True)
class SweepConfig:
    model: ModelSpec
    dissipator: DissipatorSpec
    start: float
    stop: float
    points: int
    gammas: tuple[float, ...] = (1.0,)
    sector: tuple[float, float] | None = None
    outputs: tuple[str, ...] = ("jx", "jz")
    delta_b: float | None = None
    directory: Path = Path(".")
    parameter: str = "b_x"

    def __post_init__(self):
        if self.points < 2:
            raise ValueError("points must be >= 2")
        if not self.stop > self.start:
            raise ValueError("stop must exceed start")
        if self.delta_b is not None and not 0 < self.delta_b < self.step:
            raise ValueError(f"delta_b must lie in (0, grid step = {self.step:.6g})")
        if "infidelity" in self.outputs and self.delta_b is None:
            raise ValueError("infidelity output needs delta_b")
        unknown = set(self.outputs) - set(OUTPUTS)
        if unknown:
            raise ValueError(f"unknown outputs {sorted(unknown)}")

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.points - 1)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class ParamFile:
    lam: LambdaSystemParams
    raman: RamanFieldParams | None = None
    hubbard: HubbardParams | None = None
    margin: float = 0.1


_SECTION = re.compile(r"^\s*\[([^\]]+)\]")
_KEY = re.compile(r"^\s*([^=:#;\s][^=:]*?)\s*[=:]")


def _line_index(text: str) -> dict[tuple[str, str], int]:
    """(section, key) -> 1-based line number, mirroring configparser's view."""
    out, section = {}, None
    for n, line in enumerate(text.splitlines(), start=1):
        m = _SECTION.match(line)
        if m:
            section = m.group(1).strip().lower()
            out[(section, "")] = n
            continue
        m = _KEY.match(line)
        if m and section is not None and not line[:1].isspace():
            out.setdefault((section, m.group(1).strip().lower()), n)
    return out


class _Reader:
    """Typed access to a parsed INI file with line-numbered errors."""

    def __init__(self, text: str, path=None):
        self.path = path
        self.parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        try:
            self.parser.read_string(text, source=str(path or "<config>"))
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            if line is None and getattr(exc, "errors", None):
                line = exc.errors[0][0]
            raise ConfigError(exc.message.splitlines()[0], path, line) from None
        self.lines = _line_index(text)
        self.used: set[tuple[str, str]] = set()

    def error(self, msg, section, key=""):
        line = self.lines.get((section, key)) or self.lines.get((section, ""))
        return ConfigError(msg, self.path, line)

    def has(self, section):
        return self.parser.has_section(section)

    def raw(self, section, key, default=None, required=False):
        if not self.parser.has_section(section):
            if required:
                raise ConfigError(f"missing section [{section}]", self.path)
            return default
        self.used.add((section, key))
        if not self.parser.has_option(section, key):
            if required:
                raise self.error(f"missing key {key!r}", section)
            return default
        return self.parser.get(section, key)

    def get(self, section, key, conv, default=None, required=False):
        value = self.raw(section, key, None, required)
        if value is None:
            return default
        try:
            return conv(value)
        except ValueError as exc:
            raise self.error(f"bad value for {key!r}: {value!r} ({exc})", section, key) from None

    def check_unknown(self, allowed: dict[str, set[str]]):
        for section in self.parser.sections():
            if section not in allowed:
                raise self.error(f"unknown section [{section}]", section)
            for key in self.parser.options(section):
                if key not in allowed[section]:
                    raise self.error(f"unknown key {key!r} in [{section}]", section, key)


def _floats(value: str) -> tuple[float, ...]:
    items = [v for v in re.split(r"[,\s]+", value.strip()) if v]
    if not items:
        raise ValueError("empty list")
    return tuple(float(v) for v in items)


def _words(value: str) -> tuple[str, ...]:
    return tuple(v.lower() for v in re.split(r"[,\s]+", value.strip()) if v)


_MODEL_FLOATS = ("alpha1", "alpha2", "alpha3", "alpha", "b_z", "nu_tilde")
_SWEEP_ALLOWED = {
    "model": {"n_sites", "model", "boundary", *_MODEL_FLOATS},
    "dissipator": {"kind", "rate", "rates", "a_minus", "a_plus"},
    "sweep": {"parameter", "start", "stop", "points", "gammas", "delta_b"},
    "sector": {"t", "r"},
    "output": {"outputs", "directory"},
}


def parse_sweep_config(text: str, path=None) -> SweepConfig:
    r = _Reader(text, path)
    r.check_unknown(_SWEEP_ALLOWED)

    n_sites = r.get("model", "n_sites", int, required=True)
    model_kw = {k: r.get("model", k, float) for k in _MODEL_FLOATS}
    model_kw = {k: v for k, v in model_kw.items() if v is not None}
    try:
        model = ModelSpec(n_sites, model=r.get("model", "model", str.lower, "ising"),
                          boundary=r.get("model", "boundary", str.lower, "open"), **model_kw)
    except ValueError as exc:
        raise r.error(str(exc), "model") from None

    kind = r.get("dissipator", "kind", str.lower, "local", required=True)
    try:
        if kind == "local":
            rates = r.get("dissipator", "rates", _floats)
            if rates is None:
                rates = (r.get("dissipator", "rate", float, 1.0),) * n_sites
            dissipator = DissipatorSpec.local(rates)
            if len(rates) != n_sites:
                raise r.error(f"expected {n_sites} rates, got {len(rates)}", "dissipator", "rates")
        elif kind == "collective":
            dissipator = DissipatorSpec.collective(r.get("dissipator", "rate", float, 1.0))
        else:
            dissipator = DissipatorSpec(kind, a_minus=r.get("dissipator", "a_minus", float, 1.0),
                                        a_plus=r.get("dissipator", "a_plus", float, 0.0))
    except ConfigError:
        raise
    except ValueError as exc:
        raise r.error(str(exc), "dissipator", "kind") from None

    parameter = r.get("sweep", "parameter", str.lower, "b_x")
    if parameter != "b_x":
        raise r.error(f"only b_x sweeps are supported, got {parameter!r}", "sweep", "parameter")

    sector = None
    if r.has("sector"):
        sector = (r.get("sector", "t", float, 1.0), r.get("sector", "r", float, 1.0))
        if not dissipator.is_collective:
            raise r.error("a symmetry sector needs collective dissipation", "sector")
        if model.boundary != "periodic":
            raise r.error("a symmetry sector needs a periodic chain", "sector")

    outputs = r.get("output", "outputs", _words, ("jx", "jz"))
    try:
        return SweepConfig(
            model=model,
            dissipator=dissipator,
            start=r.get("sweep", "start", float, required=True),
            stop=r.get("sweep", "stop", float, required=True),
            points=r.get("sweep", "points", int, required=True),
            gammas=r.get("sweep", "gammas", _floats, (1.0,)),
            sector=sector,
            outputs=outputs,
            delta_b=r.get("sweep", "delta_b", float),
            directory=Path(r.get("output", "directory", str, ".")),
            parameter=parameter,
        )
    except ValueError as exc:
        msg = str(exc)
        # point at the offending key where the message names one
        for section, key in (("sweep", "delta_b"), ("sweep", "points"), ("sweep", "stop"),
                             ("output", "outputs")):
            if key in msg or (key == "outputs" and "output" in msg):
                raise r.error(msg, section, key) from None
        raise r.error(msg, "sweep") from None


def load_sweep_config(path) -> SweepConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", path) from None
    return parse_sweep_config(text, path)


_PARAM_SECTIONS = {
    "lambda": {f.name for f in fields(LambdaSystemParams)} | {"k1", "mass"},
    "raman": {f.name for f in fields(RamanFieldParams)},
    "hubbard": {f.name for f in fields(HubbardParams)},
    "validity": {"margin"},
}


def _block(r: _Reader, section: str, cls, extra: dict | None = None):
    kw = {}
    for f in fields(cls):
        if extra and f.name in extra:
            continue
        kw[f.name] = r.get(section, f.name, float, required=True)
    kw.update(extra or {})
    try:
        return cls(**kw)
    except ValueError as exc:
        raise r.error(str(exc), section) from None


def parse_param_file(text: str, path=None) -> ParamFile:
    r = _Reader(text, path)
    r.check_unknown(_PARAM_SECTIONS)
    if not r.has("lambda"):
        raise ConfigError("missing section [lambda]", path)
    eta1 = r.get("lambda", "eta1", float)
    if eta1 is None:
        k1 = r.get("lambda", "k1", float, required=True)
        mass = r.get("lambda", "mass", float, required=True)
        nu = r.get("lambda", "nu", float, required=True)
        from .coldatom import lamb_dicke
        try:
            eta1 = lamb_dicke(k1, mass, nu)
        except ValueError as exc:
            raise r.error(str(exc), "lambda") from None
    lam = _block(r, "lambda", LambdaSystemParams, {"eta1": eta1})
    raman = _block(r, "raman", RamanFieldParams) if r.has("raman") else None
    hubbard = _block(r, "hubbard", HubbardParams) if r.has("hubbard") else None
    margin = r.get("validity", "margin", float, 0.1)
    if not margin > 0:
        raise r.error("margin must be positive", "validity", "margin")
    return ParamFile(lam, raman, hubbard, margin)


def load_param_file(path) -> ParamFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read parameter file: {exc.strerror}", path) from None
    return parse_param_file(text, path)
