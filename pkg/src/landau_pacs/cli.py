"""Command-line front end: figure data, state dumps, cavity reports and the
verification suite. All numeric output is CSV with ``#`` metadata lines."""

import argparse
import contextlib
import math
import sys

import numpy as np

from . import cavity, diagnostics, measure, wavefun
from .fock import PhysicalScales, TruncationError, dump_state
from .states import StateLabel, format_complex, pacs_state, parse_complex
from .verify import run_checks

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

FIG3B_THETAS = (
    ("0", 0.0),
    ("pi/6", math.pi / 6),
    ("pi/4", math.pi / 4),
    ("pi/3", math.pi / 3),
    ("pi/2", math.pi / 2),
)


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _n_arg(text):
    """``k`` or an inclusive range ``lo..hi``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if lo < 0 or hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        value = int(text)
        if value < 0:
            raise ValueError
        return [value]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer or range lo..hi, got {text!r}") from None


def _positive(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _non_negative(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _steps(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 2:
        raise argparse.ArgumentTypeError("steps must be at least 2")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--beta", type=_complex_arg, default=1 + 0j, help="complex β as a+bi (default 1+0i)")
    common.add_argument("--alpha", type=_complex_arg, default=0j, help="complex α as a+bi (default 0+0i)")
    common.add_argument("--n", type=_n_arg, default=None, help="excitation order k or range lo..hi")
    common.add_argument("--beta-min", type=_non_negative, default=None, help="grid start for |β|")
    common.add_argument("--beta-max", type=_non_negative, default=5.0, help="grid end for |β| (default 5)")
    common.add_argument("--steps", type=_steps, default=200, help="number of grid points (default 200)")
    common.add_argument("--theta", type=float, default=0.0, help="phase θ of β for fig3a (default 0)")
    common.add_argument("--hbar", type=_positive, default=1.0)
    common.add_argument("--mass", type=_positive, default=1.0)
    common.add_argument("--omega", type=_positive, default=1.0)
    common.add_argument("--tol", type=_positive, default=None, help="verify: loosen every check to at least this")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")

    parser = argparse.ArgumentParser(prog="landau-pacs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("fig1", parents=[common], help="measure density K_n(|β|), n = 0..5")
    sub.add_parser("fig2", parents=[common], help="Mandel Q_n(|β|), n = 0..5")
    sub.add_parser("fig3a", parents=[common], help="σ_pp vs |β| at fixed θ, n = 0..5")
    sub.add_parser("fig3b", parents=[common], help="σ_pp vs |β| at n = 2 for five phases")

    state = sub.add_parser("state", parents=[common], help="dump |β, α; n⟩ amplitudes or wavefunction samples")
    state.add_argument("--format", choices=("amplitudes", "wavefunction"), default="amplitudes")
    state.add_argument("--family", choices=("landau", "displaced", "two_variable", "pacs"), default="pacs")
    state.add_argument("--r-max", type=_positive, default=4.0, help="wavefunction: largest radius")
    state.add_argument("--angles", type=_steps, default=8, help="wavefunction: number of angles")

    sub.add_parser("verify", parents=[common], help="run the invariant suite")

    cav = sub.add_parser("cavity", parents=[common], help="cavity protocol report")
    cav.add_argument("--g", type=float, default=10.0)
    cav.add_argument("--omega1", type=float, default=1.0)
    cav.add_argument("--omega2", type=float, default=1.0)
    cav.add_argument("--phi", type=float, default=0.0)
    cav.add_argument("--mu", type=float, default=0.05)
    cav.add_argument("--t", type=float, default=1.0)
    return parser


def _scales(args):
    return PhysicalScales(args.hbar, args.mass, args.omega)


def _grid(args, default_min=0.0):
    lo = default_min if args.beta_min is None else args.beta_min
    if args.beta_max <= lo:
        raise ValueError(f"--beta-max ({args.beta_max}) must exceed the grid start ({lo})")
    return np.linspace(lo, args.beta_max, args.steps)


def _n_values(args, default):
    return default if args.n is None else args.n


def _units_meta(args):
    return {"hbar": f"{args.hbar:.12g}", "mass": f"{args.mass:.12g}", "omega": f"{args.omega:.12g}"}


def cmd_fig1(args, out):
    grid = _grid(args, default_min=0.01)
    ns = _n_values(args, list(range(6)))
    meta = {"command": "fig1", "quantity": "K_n(|beta|)", "n": ",".join(map(str, ns))}
    measure.write_fig1_csv(out, grid, ns, meta)
    return EXIT_OK


def cmd_fig2(args, out):
    grid = _grid(args)
    ns = _n_values(args, list(range(6)))
    cols = {f"Q_n{n}": np.array([diagnostics.mandel_q(b, n) for b in grid]) for n in ns}
    meta = {"command": "fig2", "quantity": "Mandel Q_n(|beta|)", "n": ",".join(map(str, ns))}
    diagnostics.write_series_csv(out, "beta_abs", grid, cols, meta)
    return EXIT_OK


def cmd_fig3a(args, out):
    grid = _grid(args)
    ns = _n_values(args, list(range(6)))
    scan = diagnostics.squeezing_scan(ns, [args.theta], grid, _scales(args))
    cols = {f"sigma_pp_n{n}": scan[(n, args.theta)] for n in ns}
    meta = {"command": "fig3a", "quantity": "sigma_pp", "theta": f"{args.theta:.12g}", **_units_meta(args)}
    meta.update({f"series.sigma_pp_n{n}": f"n={n} theta={args.theta:.12g}" for n in ns})
    diagnostics.write_series_csv(out, "beta_abs", grid, cols, meta)
    return EXIT_OK


def cmd_fig3b(args, out):
    grid = _grid(args)
    ns = _n_values(args, [2])
    if len(ns) != 1:
        raise ValueError("fig3b takes a single --n")
    n = ns[0]
    thetas = [th for _, th in FIG3B_THETAS]
    scan = diagnostics.squeezing_scan([n], thetas, grid, _scales(args))
    cols = {}
    meta = {"command": "fig3b", "quantity": "sigma_pp", "n": str(n), **_units_meta(args)}
    for name, th in FIG3B_THETAS:
        key = "sigma_pp_theta_" + name.replace("/", "_")
        cols[key] = scan[(n, th)]
        meta[f"series.{key}"] = f"n={n} theta={name}"
    diagnostics.write_series_csv(out, "beta_abs", grid, cols, meta)
    return EXIT_OK


def cmd_state(args, out):
    ns = _n_values(args, [0])
    if len(ns) != 1:
        raise ValueError("state takes a single --n")
    label = StateLabel(args.beta, args.alpha, ns[0])
    if args.format == "amplitudes":
        out.write(f"# family=pacs beta={format_complex(label.beta)} alpha={format_complex(label.alpha)} n={label.n_exc}\n")
        dump_state(pacs_state(label), out)
    else:
        radii = np.linspace(0.0, args.r_max, args.steps)
        angles = 2 * math.pi * np.arange(args.angles) / args.angles
        wavefun.write_samples(out, args.family, label, radii, angles, _scales(args))
    return EXIT_OK


def cmd_verify(args, out):
    user_tol = args.tol or 0.0
    results = run_checks(user_tol)
    out.write(f"# command=verify checks={len(results)} user_tol={user_tol:.3g}\n")
    out.write("status,check,measured,tol\n")
    for r in results:
        out.write(f"{'PASS' if r.passed else 'FAIL'},{r.name},{r.measured:.12g},{r.tol:.3g}\n")
    failed = [r.name for r in results if not r.passed]
    passed = len(results) - len(failed)
    out.write(f"# summary passed={passed} failed={len(failed)}\n")
    if failed:
        print("verify failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_cavity(args, out):
    params = cavity.CavityParams(args.g, args.omega1, args.omega2, args.phi, args.mu, args.t)
    beta, alpha = cavity.cavity_labels(params)
    evolved = cavity.effective_evolve(params)
    closed = cavity.superposition_state(params)
    reference = cavity.reference_superposition(params)
    addition = cavity.photon_addition_protocol(args.beta, args.alpha, args.mu, args.t)
    rows = [
        ("g", args.g),
        ("omega1", args.omega1),
        ("omega2", args.omega2),
        ("phi", args.phi),
        ("mu", args.mu),
        ("t", args.t),
        ("strong_drive", int(params.strong_drive)),
        ("cavity_beta", format_complex(beta)),
        ("cavity_alpha", format_complex(alpha)),
        ("effective_vs_closed_form_max_dev", cavity.max_entry_deviation(evolved, closed)),
        ("effective_vs_reference_form_max_dev", cavity.max_entry_deviation(evolved, reference)),
        ("exact_vs_effective_fidelity", cavity.exact_vs_effective_fidelity(params)),
        ("addition_beta", format_complex(args.beta)),
        ("addition_alpha", format_complex(args.alpha)),
        ("ground_branch_probability", addition.ground_probability),
        ("ground_branch_fidelity", addition.ground_fidelity),
        ("excited_branch_fidelity", addition.excited_fidelity),
    ]
    out.write("# command=cavity\n")
    out.write("param,value\n")
    for key, value in rows:
        text = value if isinstance(value, str) else f"{value:.12g}"
        out.write(f"{key},{text}\n")
    return EXIT_OK


COMMANDS = {
    "fig1": cmd_fig1,
    "fig2": cmd_fig2,
    "fig3a": cmd_fig3a,
    "fig3b": cmd_fig3b,
    "state": cmd_state,
    "verify": cmd_verify,
    "cavity": cmd_cavity,
}


@contextlib.contextmanager
def _open_out(path):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        with _open_out(args.out) as out:
            return COMMANDS[args.command](args, out)
    except ValueError as exc:
        print(f"landau-pacs {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TruncationError as exc:
        print(f"landau-pacs {args.command}: truncation: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
