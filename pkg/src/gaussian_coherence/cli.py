"""Command-line front end.

Exit codes: 0 success, 1 invalid state or channel, 2 parse error,
3 channel is not incoherent, 4 numerical-quality failure.
"""

import argparse
import json
import sys

from . import channels as ch
from . import fock
from . import selftest
from .coherence import coherence, is_incoherent, mean_photon_numbers
from .core import DataError, ShapeError, UnphysicalStateError, validate_state
from .io import SpecError, load_json, parse_channel, parse_state, write_trajectory

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_NOT_INCOHERENT = 3
EXIT_NUMERICS = 4

MONOTONICITY_TOL = 1e-9
# oracle-compare acceptance thresholds
ORACLE_NBAR_TOL = 1e-6
ORACLE_COHERENCE_TOL = 1e-3
ORACLE_DIAG_TOL = 1e-6


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _load_state(path, check=True):
    doc = load_json(path)
    try:
        return parse_state(doc, check=check)
    except SpecError:
        raise
    except (ShapeError, DataError, UnphysicalStateError, ValueError) as exc:
        raise _Fail(EXIT_INVALID, f"invalid state: {exc}") from exc


def _load_channel(path, modes=None):
    doc = load_json(path)
    try:
        return parse_channel(doc, modes=modes)
    except SpecError:
        raise
    except (ShapeError, DataError, ValueError) as exc:
        raise _Fail(EXIT_INVALID, f"invalid channel: {exc}") from exc


def cmd_validate(args):
    state = _load_state(args.state, check=False)
    report = validate_state(state.V, state.d, state.modes)
    print(report)
    return EXIT_OK if report.ok else EXIT_INVALID


def _fmt(x):
    return f"{x:.12g}"


def cmd_coherence(args):
    state = _load_state(args.state)
    report = coherence(state)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
        return EXIT_OK
    print(f"coherence: {_fmt(report.coherence_bits)} bits")
    print(f"entropy:   {_fmt(report.entropy_bits)} bits")
    for i, n in enumerate(report.mean_photons):
        print(f"mode {i + 1}: nbar = {_fmt(n)}")
    print("symplectic eigenvalues: " + ", ".join(_fmt(nu) for nu in report.symplectic.values))
    parts = " ⊗ ".join(f"thermal(nbar={_fmt(n)})" for n in report.mean_photons)
    print(f"closest incoherent state: {parts}")
    return EXIT_OK


def cmd_evolve(args):
    state = _load_state(args.state)
    channel = _load_channel(args.channel, modes=state.modes)
    if channel.modes != state.modes:
        raise _Fail(
            EXIT_INVALID, f"channel acts on {channel.modes} mode(s), state has {state.modes}"
        )
    incoherent = bool(ch.classify_incoherent(channel))
    rows = []
    previous = None
    violations = []
    for step in range(args.steps + 1):
        if step:
            state = ch.apply(channel, state)
        rep = coherence(state)
        rows.append((step, rep.coherence_bits, rep.entropy_bits, rep.mean_photons, rep.symplectic.values))
        if incoherent and previous is not None and rep.coherence_bits > previous + MONOTONICITY_TOL:
            violations.append(step)
        previous = rep.coherence_bits
    if args.csv and args.csv != "-":
        with open(args.csv, "w", encoding="utf-8", newline="") as f:
            write_trajectory(rows, state.modes, f)
    else:
        write_trajectory(rows, state.modes, sys.stdout)
    if violations:
        print(f"monotonicity violated at steps {violations}", file=sys.stderr)
        return EXIT_NUMERICS
    return EXIT_OK


def cmd_check_incoherent(args):
    channel = _load_channel(args.channel)
    result = ch.classify_incoherent(channel)
    if isinstance(result, ch.Rejection):
        print(f"not incoherent: {result}")
        return EXIT_NOT_INCOHERENT
    print("incoherent")
    print(f"permutation (output <- input): {list(result.permutation)}")
    for i, b in enumerate(result.blocks):
        print(
            f"mode {i + 1}: t = {_fmt(b.t)}, theta = {_fmt(b.theta)}, "
            f"det O = {b.det_O:+d}, w = {_fmt(b.w)} (bound {_fmt(b.bound)})"
        )
    return EXIT_OK


def cmd_oracle_compare(args):
    state = _load_state(args.state)
    if state.modes != 1:
        raise _Fail(EXIT_INVALID, "oracle is one-mode only")
    if args.cutoff is None:
        fm = fock.adaptive_fock_matrix(state.V, state.d)
    else:
        fm = fock.fock_matrix(state.V, state.d, args.cutoff)
    print(f"cutoff: {fm.cutoff}")
    print(f"trace deficit: {fm.trace_deficit:.3e}")
    if fm.trace_deficit > fock.COHERENCE_MAX_DEFICIT:
        print(
            f"trace deficit exceeds {fock.COHERENCE_MAX_DEFICIT:g}; raise the cutoff",
            file=sys.stderr,
        )
        return EXIT_NUMERICS
    rep = coherence(state)
    n_analytic = mean_photon_numbers(state)[0]
    n_oracle = fock.oracle_mean_photon(fm)
    c_oracle = fock.oracle_coherence(fm)
    resid = fock.diagonality_residual(fm)
    n_tol = max(ORACLE_NBAR_TOL, 10 * fm.trace_deficit)
    rows = [
        ("nbar", n_analytic, n_oracle, n_tol),
        ("S(rho||delta) [bits]", rep.coherence_bits, c_oracle, ORACLE_COHERENCE_TOL),
    ]
    ok = True
    print(f"{'quantity':<22}{'analytic':>22}{'oracle':>22}{'delta':>12}")
    for name, a, o, tol in rows:
        delta = abs(a - o)
        ok &= delta <= tol
        print(f"{name:<22}{a:>22.15g}{o:>22.15g}{delta:>12.3e}")
    print(f"diagonality residual: {resid:.3e}")
    if is_incoherent(state, 1e-8):
        ok &= resid <= ORACLE_DIAG_TOL
    return EXIT_OK if ok else EXIT_NUMERICS


def cmd_selftest(args):
    results = selftest.run(seed=args.seed, trials=args.trials, workers=args.workers)
    ok = True
    for name, passed, detail in results:
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if ok else EXIT_NUMERICS


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gaussian-coherence",
        description="Relative entropy of coherence for Gaussian states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check that a state is physical")
    p.add_argument("state", help="state JSON file, or - for stdin")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("coherence", help="coherence report for a state")
    p.add_argument("state", help="state JSON file, or - for stdin")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="machine-readable output")
    fmt.add_argument("--text", action="store_true", help="human-readable output (default)")
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("evolve", help="iterate a channel and tabulate coherence")
    p.add_argument("state", help="state JSON file, or - for stdin")
    p.add_argument("channel", help="channel JSON file (object, or list composed in order)")
    p.add_argument("--steps", type=int, default=1, help="number of applications (default: %(default)s)")
    p.add_argument("--csv", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("check-incoherent", help="decompose an incoherent channel")
    p.add_argument("channel", help="channel JSON file, or - for stdin")
    p.set_defaults(func=cmd_check_incoherent)

    p = sub.add_parser("oracle-compare", help="closed form vs truncated Fock matrix")
    p.add_argument("state", help="one-mode state JSON file, or - for stdin")
    p.add_argument(
        "--cutoff",
        type=int,
        default=None,
        help="Fock cutoff (default: grown from the mean photon number until the trace deficit is negligible)",
    )
    p.set_defaults(func=cmd_oracle_compare)

    p = sub.add_parser("selftest", help="randomised invariant sweep")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _Fail as exc:
        print(exc, file=sys.stderr)
        return exc.code
    except (fock.TruncationError, OverflowError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS


if __name__ == "__main__":
    sys.exit(main())
