"""Command-line interface.

Subcommands: ``bound`` and ``optimize`` evaluate one state, ``sweep`` runs a
configured parameter sweep, ``generators`` prints a basis with its algebra
residuals, and ``fig1``..``fig4`` reproduce the reference sweeps.

Exit codes: 0 success, 2 invalid input or configuration, 3 optimizer failure
during a sweep (a partial CSV with a trailing marker line is written),
4 internal soundness violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .errors import LquError, ParamOutOfRange, SoundnessError
from .linalg import hermitian_eigendecompose
from .lqu_core import lower_bound
from .optimizer import GAConfig, optimize_lqu
from .states import StateSpec
from .su_generators import generator_basis
from .sweep import (
    SweepAborted,
    load_config,
    parse_spectrum,
    preset_configs,
    run_sweep,
    write_csv,
    write_marker_csv,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_OPTIMIZER = 3
EXIT_SOUNDNESS = 4

GENERATOR_RESIDUAL_TOL = 1e-11


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _add_state_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--state", required=True,
                        help="state family: werner | horodecki33 | horodecki42 | "
                             "bell33 | dephased_bell33 | raw")
    parser.add_argument("--p", type=float, default=0.0, help="werner mixing parameter")
    parser.add_argument("--h", type=float, default=0.0, help="horodecki family parameter")
    parser.add_argument("--t", type=float, default=0.0, help="dephasing time")
    parser.add_argument("--rate-a", type=float, default=0.5, help="A-side dephasing rate")
    parser.add_argument("--rate-b", type=float, default=0.5, help="B-side dephasing rate")
    parser.add_argument("--file", default=None, help="state file for --state raw")
    parser.add_argument("--spectrum", default=None,
                        help="observable spectrum: preset name or comma-separated diagonal")


def _state_spec(args) -> StateSpec:
    return StateSpec(
        family=args.state, p=args.p, h=args.h, t=args.t,
        rate_a=args.rate_a, rate_b=args.rate_b, path=args.file,
    )


def _spectrum_matrix(args, dim_a: int) -> np.ndarray:
    if args.spectrum is None:
        from .sweep import default_spectrum

        values = default_spectrum(dim_a)
    else:
        values = parse_spectrum(args.spectrum)
    if len(values) != dim_a:
        raise ParamOutOfRange(
            f"spectrum has {len(values)} values but the A factor has dimension {dim_a}"
        )
    return np.diag(np.asarray(values, dtype=np.float64))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lqu",
        description="Closed-form lower bound and GA-optimized value of the "
                    "local quantum uncertainty for bipartite states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound", help="closed-form bound for one state")
    _add_state_flags(p_bound)

    p_opt = sub.add_parser("optimize", help="GA-optimized value for one state")
    _add_state_flags(p_opt)
    p_opt.add_argument("--seed", type=int, default=0, help="GA seed")

    p_sweep = sub.add_parser("sweep", help="run a sweep from a JSON config")
    p_sweep.add_argument("--config", required=True, help="JSON sweep configuration")
    p_sweep.add_argument("--state", default=None, help="override the configured family")
    p_sweep.add_argument("--rate-a", type=float, default=None)
    p_sweep.add_argument("--rate-b", type=float, default=None)
    p_sweep.add_argument("--spectrum", default=None)
    p_sweep.add_argument("--seed", type=int, default=None, help="override the GA seed")
    p_sweep.add_argument("--out", default=None, help="override the output CSV path")
    p_sweep.add_argument("--svg", action="store_true", help="also render an SVG figure")

    p_gen = sub.add_parser("generators", help="print a generator basis and residuals")
    p_gen.add_argument("--dim", type=int, required=True, help="dimension, 2..8")

    for name in ("fig1", "fig2", "fig3", "fig4"):
        p_fig = sub.add_parser(name, help=f"reproduce the {name} sweep")
        p_fig.add_argument("--out", default=None, help="output CSV path (stem for fig3)")
        p_fig.add_argument("--svg", action="store_true", help="also render an SVG figure")
        p_fig.add_argument("--seed", type=int, default=42, help="GA base seed")

    return parser


def _cmd_bound(args) -> int:
    state = _state_spec(args).build()
    spectrum = _spectrum_matrix(args, state.dim_a)
    report = lower_bound(state, spectrum)
    print(f"state: {args.state} ({state.dim_a}x{state.dim_b})")
    print(f"alpha: {_fmt(report.alpha)}")
    print(f"beta: {_fmt(report.beta)}")
    print(f"lambda_max: {_fmt(report.lambda_max)}")
    print(f"W: {report.w.shape[0]}x{report.w.shape[1]}")
    print(f"bound: {_fmt(report.bound)}")
    print(f"bound_clamped: {_fmt(report.bound_clamped)}")
    return EXIT_OK


def _cmd_optimize(args) -> int:
    state = _state_spec(args).build()
    spectrum = _spectrum_matrix(args, state.dim_a)
    report = lower_bound(state, spectrum)
    result = optimize_lqu(state, spectrum, GAConfig(seed=args.seed))
    if result.value < report.bound - 1e-6:
        raise SoundnessError(
            f"optimized value {result.value!r} undercuts bound {report.bound!r}"
        )
    print(f"state: {args.state} ({state.dim_a}x{state.dim_b})")
    print(f"bound: {_fmt(report.bound)}")
    print(f"optimized: {_fmt(result.value)}")
    print(f"generations: {len(result.history)}")
    print(f"evaluations: {result.evaluations}")
    return EXIT_OK


def _run_configs(configs) -> int:
    from .plotting import render_sweep_figure

    for config in configs:
        out = config.output or "sweep.csv"
        try:
            rows = run_sweep(config, progress=_log)
        except SweepAborted as aborted:
            write_marker_csv(aborted.rows, out, str(aborted))
            _log(f"error: {aborted}")
            _log(f"partial output written to {out}")
            return EXIT_OPTIMIZER
        write_csv(rows, out)
        _log(f"wrote {out}")
        if config.fmt == "csv+svg":
            svg_path = out[:-4] + ".svg" if out.endswith(".csv") else out + ".svg"
            render_sweep_figure(rows, svg_path,
                                title=f"{config.state.family} sweep",
                                parameter=config.parameter)
            _log(f"wrote {svg_path}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = load_config(args.config)
    state_patch = {}
    if args.state is not None:
        state_patch["family"] = args.state
    if args.rate_a is not None:
        state_patch["rate_a"] = args.rate_a
    if args.rate_b is not None:
        state_patch["rate_b"] = args.rate_b
    if state_patch:
        config = dataclasses.replace(config,
                                     state=dataclasses.replace(config.state, **state_patch))
    if args.seed is not None:
        config = dataclasses.replace(config, ga=dataclasses.replace(config.ga, seed=args.seed))
    if args.spectrum is not None:
        config = dataclasses.replace(config, spectrum=parse_spectrum(args.spectrum))
    if args.out is not None:
        config = dataclasses.replace(config, output=args.out)
    if args.svg:
        config = dataclasses.replace(config, fmt="csv+svg")
    return _run_configs([config])


def _cmd_generators(args) -> int:
    if not 2 <= args.dim <= 8:
        raise ParamOutOfRange(f"--dim must be in [2, 8], got {args.dim}")
    gens, consts = generator_basis(args.dim)
    d = args.dim
    n = len(gens)
    with np.printoptions(precision=6, suppress=True, linewidth=120):
        for k, mat in enumerate(gens):
            print(f"lambda_{k + 1} =")
            print(np.array2string(mat))
    gram = np.einsum("iab,jba->ij", gens.matrices, gens.matrices).real
    ortho_residual = float(np.max(np.abs(gram - 2.0 * np.eye(n))))
    eye = np.eye(d)
    recon_residual = 0.0
    for i in range(n):
        for j in range(n):
            expansion = (1j * np.einsum("k,kab->ab", consts.f[i, j], gens.matrices)
                         + np.einsum("k,kab->ab", consts.g[i, j], gens.matrices)
                         + (2.0 / d) * (1.0 if i == j else 0.0) * eye)
            recon_residual = max(recon_residual, float(np.max(np.abs(
                gens.matrices[i] @ gens.matrices[j] - expansion))))
    print(f"orthonormality residual: {ortho_residual:.3e}")
    print(f"product expansion residual: {recon_residual:.3e}")
    if ortho_residual >= GENERATOR_RESIDUAL_TOL or recon_residual >= GENERATOR_RESIDUAL_TOL:
        raise SoundnessError(
            f"generator residuals exceed {GENERATOR_RESIDUAL_TOL:.1e}: "
            f"orthonormality {ortho_residual:.3e}, expansion {recon_residual:.3e}"
        )
    return EXIT_OK


def _cmd_fig(args, name: str) -> int:
    configs = preset_configs(name, seed=args.seed, output=args.out, svg=args.svg)
    return _run_configs(configs)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bound":
            return _cmd_bound(args)
        if args.command == "optimize":
            return _cmd_optimize(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "generators":
            return _cmd_generators(args)
        return _cmd_fig(args, args.command)
    except SoundnessError as exc:
        _log(f"error: {exc}")
        return EXIT_SOUNDNESS
    except (LquError, ValueError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
