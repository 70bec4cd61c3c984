"""Parameter sweeps and their on-disk formats.

Three sweeps are supported:

``radial``
    ``g_m(r exp(-i theta))`` for ``r`` on ``[lo, hi]`` at fixed ``theta``.
``phase``
    ``g_m(r exp(-i theta))`` for ``theta`` on ``[lo, hi]`` at fixed ``r``.
``chi_spectrum``
    susceptibility ratio for ``omega`` on ``[lo, hi]``.

Records are written as CSV (header ``abscissa,re,im,err``, 17 significant
digits, ``\\n`` line endings) or, for a ``.json`` path, as a JSON array of
objects with the same keys.  Run configurations are flat ``key = value``
files whose keys mirror the command-line flags.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .core import M_MAX, PolarArg, g
from .errors import GFunctionError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .rotor import ResponseParams, RotorSpec, susceptibility

__all__ = [
    "CSV_HEADER",
    "ConfigError",
    "SweepIOError",
    "SweepRecord",
    "SweepSpec",
    "format_csv",
    "grid",
    "read_config",
    "read_csv",
    "read_json",
    "run_sweep",
    "write_csv",
    "write_json",
    "write_records",
]

CSV_HEADER = ("abscissa", "re", "im", "err")
KINDS = ("radial", "phase", "chi_spectrum")


class ConfigError(GFunctionError, ValueError):
    """Malformed run configuration."""


class SweepIOError(GFunctionError, OSError):
    """Reading or writing a sweep file failed."""


@dataclass(frozen=True)
class SweepSpec:
    """One uniform sweep; ``fixed`` is ``theta`` for radial and ``r`` for phase sweeps."""

    kind: str
    lo: float
    hi: float
    steps: int
    m: int = 1
    fixed: float = 0.0
    rotor: Optional[RotorSpec] = None
    params: Optional[ResponseParams] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 2:
            raise ValueError(f"steps must be an integer >= 2, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))
        for name in ("lo", "hi", "fixed"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got lo={self.lo!r}, hi={self.hi!r}")
        if self.lo < 0:
            raise ValueError(f"lo must be >= 0, got {self.lo!r}")
        if self.kind == "chi_spectrum":
            if self.rotor is None or self.params is None:
                raise ValueError("chi_spectrum sweeps need a rotor and response parameters")
            return
        if isinstance(self.m, bool) or int(self.m) != self.m or not 0 <= self.m <= M_MAX:
            raise ValueError(f"m must be an integer in 0..{M_MAX}, got {self.m!r}")
        if self.kind == "radial":
            PolarArg(0.0, self.fixed)
        else:
            PolarArg(self.fixed, 0.0)
            if self.hi > math.pi / 2:
                raise ValueError(f"phase sweep must stay within [0, pi/2], got hi={self.hi!r}")


@dataclass(frozen=True)
class SweepRecord:
    abscissa: float
    re: float
    im: float
    err: float


def grid(spec: SweepSpec) -> list[float]:
    """``lo + k (hi - lo) / (steps - 1)`` for ``k = 0 .. steps - 1``."""
    n = spec.steps - 1
    return [spec.lo + k * (spec.hi - spec.lo) / n for k in range(spec.steps)]


def _point(spec: SweepSpec, x: float, cfg: QuadratureConfig) -> SweepRecord:
    try:
        if spec.kind == "chi_spectrum":
            params = ResponseParams(spec.params.beta, spec.params.tau, x)
            res = susceptibility(spec.rotor, params, cfg)
        else:
            if spec.kind == "radial":
                arg = PolarArg(x, spec.fixed)
            else:
                arg = PolarArg(spec.fixed, min(x, math.pi / 2))
            res = g(spec.m, arg.to_complex(), cfg)
    except GFunctionError as exc:
        raise type(exc)(f"sweep point {x!r}: {exc}") from exc
    return SweepRecord(x, res.value.real, res.value.imag, res.abs_error_estimate)


def run_sweep(spec: SweepSpec, cfg: QuadratureConfig = DEFAULT_CONFIG,
              workers: int = 1) -> list[SweepRecord]:
    """Evaluate the sweep; records come back in grid order whatever ``workers`` is."""
    xs = grid(spec)
    if workers <= 1:
        return [_point(spec, x, cfg) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda x: _point(spec, x, cfg), xs))


def _fmt(x: float) -> str:
    return format(x, ".17g")


def format_csv(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([_fmt(r.abscissa), _fmt(r.re), _fmt(r.im), _fmt(r.err)])
    return buf.getvalue()


def _write_text(path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise SweepIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _read_text(path) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise SweepIOError(f"cannot read {path}: {exc.strerror or exc}") from exc


def write_csv(records: Sequence[SweepRecord], path) -> None:
    _write_text(path, format_csv(records))


def write_json(records: Sequence[SweepRecord], path) -> None:
    rows = [dict(zip(CSV_HEADER, (r.abscissa, r.re, r.im, r.err))) for r in records]
    _write_text(path, json.dumps(rows, indent=1) + "\n")


def write_records(records: Sequence[SweepRecord], path) -> None:
    """CSV, or JSON when ``path`` ends in ``.json``."""
    if str(path).lower().endswith(".json"):
        write_json(records, path)
    else:
        write_csv(records, path)


def read_csv(path) -> list[SweepRecord]:
    rows = list(csv.reader(io.StringIO(_read_text(path))))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ConfigError(f"{path}: expected header {','.join(CSV_HEADER)}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 4:
            raise ConfigError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
        try:
            out.append(SweepRecord(*(float(v) for v in row)))
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return out


def read_json(path) -> list[SweepRecord]:
    try:
        rows = json.loads(_read_text(path))
        return [SweepRecord(*(float(row[k]) for k in CSV_HEADER)) for row in rows]
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"{path}: malformed sweep JSON ({exc})") from exc


_FLOAT_KEYS = {"theta", "r", "lo", "hi", "omega-lo", "omega-hi", "i1", "i3", "dipole", "beta", "tau"}
_INT_KEYS = {"m", "steps"}
CONFIG_KEYS = frozenset(_FLOAT_KEYS | _INT_KEYS | {"kind"})
_KIND_ALIASES = {"sweep-r": "radial", "sweep-theta": "phase", "chi": "chi_spectrum"}


def parse_config(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines into typed values, rejecting unknown keys."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
                if not math.isfinite(values[key]):
                    raise ValueError(f"{value!r} is not finite")
            else:
                values[key] = _KIND_ALIASES.get(value, value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from exc
    return values


def spec_from_values(values: dict) -> SweepSpec:
    """Build a :class:`SweepSpec` from parsed config / flag values."""
    kind = values.get("kind")
    if kind is None:
        raise ConfigError("missing key 'kind'")
    try:
        if kind == "chi_spectrum":
            rotor = RotorSpec(values.get("i1", 1.0), values.get("i3", 1.0), values.get("dipole", 1.0))
            params = ResponseParams(values.get("beta", 1.0), values.get("tau", 1.0), 0.0)
            lo = values.get("omega-lo", values.get("lo"))
            hi = values.get("omega-hi", values.get("hi"))
            return SweepSpec(kind, lo, hi, values.get("steps"), rotor=rotor, params=params)
        fixed = values.get("theta") if kind == "radial" else values.get("r")
        if fixed is None:
            raise ConfigError(f"{kind} sweep needs {'theta' if kind == 'radial' else 'r'}")
        return SweepSpec(kind, values.get("lo"), values.get("hi"), values.get("steps"),
                         m=values.get("m", 1), fixed=fixed)
    except TypeError as exc:
        raise ConfigError(f"incomplete sweep configuration: {exc}") from exc


def read_config(path) -> SweepSpec:
    """Read a ``key = value`` run configuration (``#`` starts a comment)."""
    text = _read_text(path)
    try:
        return spec_from_values(parse_config(text, str(Path(path))))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
