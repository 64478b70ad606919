"""Command-line interface.

Subcommands: ``mmse`` (optimal-measurement error for a state and prior),
``bound`` (trace-inequality lower bound and tightness diagnostic), ``pnr``
(photon-counting error and conditional means), ``fisher`` (Fisher-type
bounds), ``sweep`` (random-state scatter dataset), and ``figures`` (all
six reference datasets, CSV plus rendered PNG).

Exit codes: 0 success, 2 configuration error, 3 numerical ill-posedness.
Floats print with 12 significant digits; diverging quantities print as
the string ``divergent``.
"""

import argparse
import sys

import numpy as np

from .figures import generate_figure_data
from .fisher_bounds import bounds_report
from .fock_core import FockState, InBetweenState, PureState
from .numeric import is_divergent
from .personick_solver import mmse
from .pnr_measurement import conditional_means, pnr_mse
from .priors import parse_prior
from .search_harness import conjecture_check, sweep

__all__ = ["main", "parse_state"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ILL_POSED = 3

#: Largest Fock index accepted from the command line (keeps binomial sums
#: well inside float range even off the log-space path).
MAX_FOCK_N = 170


def parse_state(spec: str):
    """Parse ``fock:n``, ``inbetween:nbar`` or ``amps:<csv>`` state specs.

    Amplitudes may be complex in Python syntax (``0.6,0,0.8j``) and are
    normalized.
    """
    kind, _, body = spec.partition(":")
    if not body:
        raise ValueError(f"malformed state spec {spec!r}")
    if kind == "fock":
        n = int(body)
        if n > MAX_FOCK_N:
            raise ValueError(f"fock index capped at {MAX_FOCK_N}")
        return FockState(n)
    if kind == "inbetween":
        nbar = float(body)
        if nbar > MAX_FOCK_N:
            raise ValueError(f"mean photon number capped at {MAX_FOCK_N}")
        return InBetweenState(nbar)
    if kind == "amps":
        try:
            amps = np.array([complex(p) for p in body.split(",")])
        except ValueError as exc:
            raise ValueError(f"bad amplitude in {spec!r}") from exc
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise ValueError("amplitudes must not all vanish")
        return PureState(amps / norm)
    raise ValueError(f"unknown state kind {kind!r}")


def _fmt(x) -> str:
    if is_divergent(x):
        return "divergent"
    return f"{float(x):.12g}"


def _add_common(parser, with_state=True):
    if with_state:
        parser.add_argument("--state", required=True, help="fock:n | inbetween:nbar | amps:<csv>")
    parser.add_argument("--prior", required=True, help="delta:t0 | twopoint:q,t0,t1 | beta:a,b | file:<path>")
    parser.add_argument("--cutoff", type=int, default=None, help="Fock truncation (default: natural)")
    parser.add_argument("--order", type=int, default=None, help="quadrature order (default: adaptive)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="personick",
        description="Bayesian MMSE toolkit for transmissivity sensing of pure-loss channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mmse", help="optimal-measurement mean square error")
    _add_common(p)

    p = sub.add_parser("bound", help="lower bound on the MMSE and tightness diagnostic")
    _add_common(p)

    p = sub.add_parser("pnr", help="photon-counting MSE with the Bayes estimator")
    _add_common(p)

    p = sub.add_parser("fisher", help="Fisher-type Bayesian bounds for a Fock probe")
    p.add_argument("--n", type=int, required=True, help="probe photon number")
    p.add_argument("--prior", required=True)
    p.add_argument(
        "--field",
        choices=["je_inv", "jd", "jp", "jb", "jd_inv", "jb_inv"],
        default=None,
        help="print a single quantity instead of the full report",
    )

    p = sub.add_parser("sweep", help="random-state MSE sweep over mean photon number")
    p.add_argument("--prior", required=True)
    p.add_argument("--cutoff", type=int, default=4)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--nbar-min", type=float, default=0.0)
    p.add_argument("--nbar-max", type=float, default=None, help="default: cutoff")
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--order", type=int, default=200)
    p.add_argument("--out", required=True, help="output file path")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("figures", help="regenerate all reference datasets")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--cutoff", type=int, default=4)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--order", type=int, default=200)
    p.add_argument("--no-plots", action="store_true", help="write CSVs only")
    return parser


def _cmd_mmse(args) -> int:
    prior = parse_prior(args.prior)
    state = parse_state(args.state)
    report = mmse(state, prior, order=args.order, cutoff=args.cutoff)
    print(f"delta = {_fmt(report.delta)}")
    print(f"delta_lb = {_fmt(report.delta_lb)}")
    print(f"tr_gamma2 = {_fmt(report.tr_gamma2)}")
    print(f"commutator_g01 = {_fmt(report.commutator_g01)}")
    print("b_eigenvalues = " + " ".join(_fmt(v) for v in report.b_eigenvalues))
    return EXIT_ILL_POSED if report.ill_posed else EXIT_OK


def _cmd_bound(args) -> int:
    prior = parse_prior(args.prior)
    state = parse_state(args.state)
    report = mmse(state, prior, order=args.order, cutoff=args.cutoff)
    print(f"delta_lb = {_fmt(report.delta_lb)}")
    print(f"delta = {_fmt(report.delta)}")
    print(f"commutator_g01 = {_fmt(report.commutator_g01)}")
    print(f"tight = {'yes' if report.commutator_g01 < 1e-10 else 'no'}")
    return EXIT_ILL_POSED if report.ill_posed else EXIT_OK


def _cmd_pnr(args) -> int:
    prior = parse_prior(args.prior)
    state = parse_state(args.state)
    order = args.order or 200
    value = pnr_mse(state, prior, order=order)
    means = conditional_means(state, prior, order=order)
    print(f"pnr_mse = {_fmt(value)}")
    print("conditional_means = " + " ".join(_fmt(v) for v in means))
    return EXIT_OK


def _cmd_fisher(args) -> int:
    prior = parse_prior(args.prior)
    report = bounds_report(args.n, prior)
    if args.field:
        print(_fmt(getattr(report, args.field)))
        return EXIT_OK
    for key, value in report.as_dict().items():
        if key in ("n", "prior"):
            print(f"{key} = {value}")
        else:
            print(f"{key} = {_fmt(value)}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    prior = parse_prior(args.prior)
    hi = args.nbar_max if args.nbar_max is not None else float(args.cutoff)
    n_steps = int(round((hi - args.nbar_min) / args.step))
    grid = [round(args.nbar_min + k * args.step, 10) for k in range(n_steps + 1)]
    result = sweep(prior, grid, cutoff=args.cutoff, count=args.count, seed=args.seed, order=args.order)
    if args.format == "csv":
        result.to_csv(args.out)
    else:
        result.to_json(args.out)
    report = conjecture_check(result)
    print(f"wrote {args.out} ({len(result.samples)} samples)")
    print(f"conjecture_violations = {len(report.violations)}")
    for v in report.violations:
        print(
            f"  violator: nbar={v['nbar']!r} index={v['index']} seed={v['seed']} gap={_fmt(v['gap'])}"
        )
    return EXIT_OK


def _cmd_figures(args) -> int:
    written = generate_figure_data(
        args.out,
        seed=args.seed,
        cutoff=args.cutoff,
        count=args.count,
        step=args.step,
        order=args.order,
        render=not args.no_plots,
    )
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


_COMMANDS = {
    "mmse": _cmd_mmse,
    "bound": _cmd_bound,
    "pnr": _cmd_pnr,
    "fisher": _cmd_fisher,
    "sweep": _cmd_sweep,
    "figures": _cmd_figures,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
