"""Parameter sweeps over state families, with CSV (and optional SVG) output.

A sweep evaluates the closed-form bound, and optionally the GA-optimized
value, on an evenly spaced parameter grid. Rows are produced in grid order
and written once the whole sweep is done; per-point GA seeds derive from the
base seed as ``seed + point_index`` so any single point can be reproduced in
isolation.

The CSV artifact is deterministic for a fixed configuration and seed. The
``wall_time_ms`` column is therefore written as a constant 0 placeholder;
measured timings stay on the :class:`SweepRow` objects and are reported to
the progress callback instead of the file.
"""

from __future__ import annotations

import dataclasses
import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSpectrum, LquError, ParamOutOfRange, SoundnessError
from .lqu_core import lower_bound
from .optimizer import GAConfig, optimize_lqu
from .states import StateSpec

SOUNDNESS_SLACK = 1e-6

CSV_HEADER = "param,bound,optimized,alpha,lambda_max,wall_time_ms"

SPECTRUM_PRESETS = {
    "qubit": (1.0, -1.0),
    "qutrit": (1.0, -1.0, 0.0),
    "qudit4": (3.0, 1.0, -1.0, -3.0),
}

MODES = ("bound", "optimize", "both")
FORMATS = ("csv", "csv+svg")


def default_spectrum(dim: int) -> tuple[float, ...]:
    """Default observable spectrum for an A factor of dimension ``dim``.

    diag(1, -1) for qubits, diag(1, -1, 0) for qutrits, diag(3, 1, -1, -3)
    for dimension 4; beyond that, the evenly spaced traceless ladder
    ``d-1, d-3, ..., 1-d``.
    """
    if dim == 2:
        return SPECTRUM_PRESETS["qubit"]
    if dim == 3:
        return SPECTRUM_PRESETS["qutrit"]
    if dim == 4:
        return SPECTRUM_PRESETS["qudit4"]
    return tuple(float(dim - 1 - 2 * k) for k in range(dim))


def parse_spectrum(text: str) -> tuple[float, ...]:
    """Parse a spectrum given as a preset name or comma-separated diagonal."""
    key = text.strip().lower()
    if key in SPECTRUM_PRESETS:
        return SPECTRUM_PRESETS[key]
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ParamOutOfRange(
            f"spectrum {text!r} is neither a preset {sorted(SPECTRUM_PRESETS)} "
            f"nor a comma-separated diagonal"
        ) from exc
    if len(values) < 2:
        raise ParamOutOfRange("spectrum needs at least two diagonal values")
    return values


@dataclass(frozen=True)
class SweepRow:
    """One evaluated grid point.

    ``optimized`` is None in bound-only mode. ``wall_time_ms`` is the
    measured wall time of the point; the CSV writer substitutes a constant
    so the artifact stays byte-reproducible.
    """

    param_value: float
    bound: float
    optimized: float | None
    alpha: float
    lambda_max: float
    wall_time_ms: int


@dataclass(frozen=True)
class SweepConfig:
    """Full description of one sweep."""

    state: StateSpec
    parameter: str
    start: float
    stop: float
    steps: int
    mode: str = "both"
    spectrum: tuple[float, ...] | None = None
    ga: GAConfig = field(default_factory=GAConfig)
    output: str | None = None
    fmt: str = "csv"

    def __post_init__(self) -> None:
        if self.parameter not in ("p", "h", "t"):
            raise ParamOutOfRange(f"parameter must be p, h or t; got {self.parameter!r}")
        if self.steps < 2:
            raise ParamOutOfRange(f"steps must be >= 2, got {self.steps}")
        if not self.start < self.stop:
            raise ParamOutOfRange(
                f"start must be below stop, got [{self.start}, {self.stop}]"
            )
        if self.mode not in MODES:
            raise ParamOutOfRange(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.fmt not in FORMATS:
            raise ParamOutOfRange(f"format must be one of {FORMATS}, got {self.fmt!r}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def spectrum_matrix(self, dim_a: int) -> np.ndarray:
        values = self.spectrum if self.spectrum is not None else default_spectrum(dim_a)
        if len(values) != dim_a:
            raise ParamOutOfRange(
                f"spectrum has {len(values)} values but the A factor has dimension {dim_a}"
            )
        return np.diag(np.asarray(values, dtype=np.float64))


def load_config(path, **overrides) -> SweepConfig:
    """Build a :class:`SweepConfig` from a JSON file plus keyword overrides.

    The JSON mirrors the dataclass fields: ``state`` (object with ``family``
    and its parameters), ``parameter``, ``range`` ([start, stop, steps]),
    ``mode``, ``spectrum`` (preset name or list), ``ga`` (object of GAConfig
    fields), ``output``, ``format``. Overrides win over file values.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LquError(f"config {path!s} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise LquError(f"config {path!s} must be a JSON object")

    known = {"state", "parameter", "range", "mode", "spectrum", "ga", "output", "format"}
    unknown = set(raw) - known
    if unknown:
        raise LquError(f"config {path!s} has unknown keys: {sorted(unknown)}")

    state_raw = raw.get("state", {})
    if not isinstance(state_raw, dict) or "family" not in state_raw:
        raise LquError(f"config {path!s}: 'state' must be an object with a 'family'")
    rng = raw.get("range")
    if not (isinstance(rng, list) and len(rng) == 3):
        raise LquError(f"config {path!s}: 'range' must be [start, stop, steps]")

    spectrum = raw.get("spectrum")
    if isinstance(spectrum, str):
        spectrum = parse_spectrum(spectrum)
    elif spectrum is not None:
        spectrum = tuple(float(v) for v in spectrum)

    ga_raw = raw.get("ga", {})
    if not isinstance(ga_raw, dict):
        raise LquError(f"config {path!s}: 'ga' must be an object")

    fields: dict = {
        "state": StateSpec(**state_raw),
        "parameter": raw.get("parameter", "p"),
        "start": float(rng[0]),
        "stop": float(rng[1]),
        "steps": int(rng[2]),
        "mode": raw.get("mode", "both"),
        "spectrum": spectrum,
        "ga": GAConfig(**ga_raw),
        "output": raw.get("output"),
        "fmt": raw.get("format", "csv"),
    }
    for key, value in overrides.items():
        if value is not None:
            fields[key] = value
    try:
        return SweepConfig(**fields)
    except TypeError as exc:
        raise LquError(f"config {path!s}: {exc}") from exc


class SweepAborted(LquError):
    """A grid point failed mid-sweep; carries the rows finished before it."""

    def __init__(self, message: str, rows: list[SweepRow], param_value: float):
        super().__init__(message)
        self.rows = rows
        self.param_value = param_value


def run_sweep(config: SweepConfig, progress=None) -> list[SweepRow]:
    """Evaluate every grid point of ``config`` in order.

    ``progress`` is called with one human-readable line per finished point.
    Validation problems (bad spectrum, bad state parameters on the grid)
    surface as their usual error types before or at the first affected
    point; an optimizer failure partway through raises :class:`SweepAborted`
    with the finished rows attached.
    """
    rows: list[SweepRow] = []
    want_opt = config.mode in ("optimize", "both")
    spectrum = None
    for index, value in enumerate(config.grid()):
        started = time.perf_counter()
        state = config.state.with_param(config.parameter, float(value)).build()
        if spectrum is None:
            spectrum = config.spectrum_matrix(state.dim_a)
            if want_opt:
                # fail fast on spectra the optimizer cannot accept
                eigs = np.sort(np.diag(spectrum).real)
                if float(np.min(np.diff(eigs))) < 1e-9:
                    raise DegenerateSpectrum(
                        "sweep in optimize mode needs a spectrum with distinct eigenvalues"
                    )
        report = lower_bound(state, spectrum)
        optimized = None
        if want_opt:
            point_cfg = dataclasses.replace(config.ga, seed=config.ga.seed + index)
            try:
                optimized = optimize_lqu(state, spectrum, point_cfg).value
            except Exception as exc:
                raise SweepAborted(
                    f"optimizer failed at {config.parameter}={value:g}: {exc}",
                    rows, float(value),
                ) from exc
        elapsed_ms = int(round((time.perf_counter() - started) * 1000.0))
        row = SweepRow(
            param_value=float(value),
            bound=report.bound,
            optimized=optimized,
            alpha=report.alpha,
            lambda_max=report.lambda_max,
            wall_time_ms=elapsed_ms,
        )
        rows.append(row)
        if progress is not None:
            opt_text = "" if optimized is None else f" optimized={optimized:.6g}"
            progress(
                f"{config.parameter}={value:.6g} bound={report.bound:.6g}"
                f"{opt_text} ({elapsed_ms} ms)"
            )
    return rows


def _fmt(x: float) -> str:
    return format(x, ".12g")


def write_csv(rows, out) -> None:
    """Write sweep rows as CSV to a path or text stream.

    Enforces the bound/optimized soundness relation before any bytes go out:
    an optimized value below ``bound - 1e-6`` raises :class:`SoundnessError`.
    Floats carry 12 significant digits; the timing column is a constant 0 so
    repeated runs produce identical files.
    """
    for row in rows:
        if row.optimized is not None and row.optimized < row.bound - SOUNDNESS_SLACK:
            raise SoundnessError(
                f"optimized value {row.optimized!r} undercuts bound {row.bound!r} "
                f"at param {row.param_value!r}"
            )
    lines = [CSV_HEADER]
    for row in rows:
        opt = "" if row.optimized is None else _fmt(row.optimized)
        lines.append(
            f"{_fmt(row.param_value)},{_fmt(row.bound)},{opt},"
            f"{_fmt(row.alpha)},{_fmt(row.lambda_max)},0"
        )
    text = "\n".join(lines) + "\n"
    if isinstance(out, io.TextIOBase):
        out.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def write_marker_csv(rows, out, message: str) -> None:
    """Write the rows finished before an abort, plus a trailing marker line."""
    buffer = io.StringIO()
    write_csv(rows, buffer)
    text = buffer.getvalue() + f"# aborted: {message}\n"
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def preset_configs(name: str, seed: int = 42, output: str | None = None,
                   svg: bool = False) -> list[SweepConfig]:
    """Named sweep presets. ``fig3`` expands to two sweeps (two rate pairs).

    Outputs default to ``<name>.csv`` (``fig3_a.csv``/``fig3_b.csv``); an
    explicit ``output`` replaces the stem, keeping the suffix scheme.
    """
    fmt = "csv+svg" if svg else "csv"
    ga = GAConfig(seed=seed)
    stem = None
    if output is not None:
        stem = output[:-4] if output.endswith(".csv") else output

    if name == "fig1":
        return [SweepConfig(
            state=StateSpec(family="werner"), parameter="p",
            start=0.0, stop=1.0, steps=51, mode="both",
            ga=ga, output=f"{stem or 'fig1'}.csv", fmt=fmt,
        )]
    if name == "fig2":
        return [SweepConfig(
            state=StateSpec(family="horodecki33"), parameter="h",
            start=0.0, stop=1.0, steps=51, mode="both",
            ga=ga, output=f"{stem or 'fig2'}.csv", fmt=fmt,
        )]
    if name == "fig3":
        base = stem or "fig3"
        configs = []
        for tag, rate_a, rate_b in (("a", 0.5, 0.5), ("b", 2.0, 1.0)):
            configs.append(SweepConfig(
                state=StateSpec(family="dephased_bell33", rate_a=rate_a, rate_b=rate_b),
                parameter="t", start=0.0, stop=5.0, steps=21, mode="both",
                ga=ga, output=f"{base}_{tag}.csv", fmt=fmt,
            ))
        return configs
    if name == "fig4":
        return [SweepConfig(
            state=StateSpec(family="horodecki42"), parameter="h",
            start=0.02, stop=1.0, steps=50, mode="both",
            ga=ga, output=f"{stem or 'fig4'}.csv", fmt=fmt,
        )]
    raise ParamOutOfRange(f"unknown preset {name!r}")
