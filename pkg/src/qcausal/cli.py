"""Command-line front end: witness sweeps, property campaigns, figure data.

Three subcommands:

* ``sweep``      one CSV row of witness values per control weight, for one of
                 the switch case studies;
* ``verify``     run a seeded property campaign and emit a JSON summary, exit
                 status 1 on any tolerance failure;
* ``reproduce``  write the CSV data behind the standard sweep figures.

Output goes to ``--out`` (or stdout); diagnostics go to stderr.  Identical
command lines produce byte-identical files: sweeps are deterministic and
campaigns derive every sample from explicit per-trial seeds.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import campaigns
from .entropy import MAX_ENTROPY, MIN_ENTROPY, VON_NEUMANN, EntropySpec, renyi
from .labeled import trace_distance
from .process import SwitchSpec, interventional_state
from .witness import evaluate

PROCESS_TAGS = ("switch_full", "upsilon1", "upsilon2")
_FUTURE_OF = {
    "switch_full": "full",
    "upsilon1": "trace_control",
    "upsilon2": "trace_target",
}
FIGURES = ("3a", "3b", "3c", "4", "5a", "5b")
BACKEND_AGREE_TOL = 1e-9

CSV_COLUMNS = ("lambda", "dp_ab", "bound_ab", "dp_ba", "bound_ba",
               "violated_ab", "violated_ba", "i1_ab", "i2_ab", "i1_ba", "i2_ba",
               "verdict")


class BackendMismatch(Exception):
    """The two interventional-state backends disagreed beyond tolerance."""


def parse_entropy(text: str) -> EntropySpec:
    """Parse ``vn``, ``renyi:<alpha>`` (``inf`` allowed), ``min`` or ``max``."""
    if text == "vn":
        return VON_NEUMANN
    if text == "min":
        return MIN_ENTROPY
    if text == "max":
        return MAX_ENTROPY
    if text.startswith("renyi:"):
        raw = text.split(":", 1)[1]
        try:
            alpha = float(raw)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad Renyi parameter {raw!r}") from None
        try:
            return renyi(alpha)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    raise argparse.ArgumentTypeError(
        f"entropy must be vn, renyi:<alpha>, min or max, got {text!r}"
    )


def sweep_reports(process: str, lams, spec: EntropySpec,
                  backend: str = "statevector") -> list[tuple[float, object]]:
    """Evaluate the witness report at each control weight of one case study.

    Marginal witnesses are always included (von Neumann) so the CSV schema
    does not depend on the entropy family chosen for the DP columns.
    """
    if process not in PROCESS_TAGS:
        raise ValueError(f"process must be one of {PROCESS_TAGS}, got {process!r}")
    mode = _FUTURE_OF[process]
    rows = []
    for lam in lams:
        lam = float(lam)
        s = SwitchSpec(lam, future_mode=mode)
        if backend == "both":
            tau = interventional_state(s, "statevector")
            other = interventional_state(s, "contraction")
            dist = trace_distance(tau.tau, other.tau)
            if dist > BACKEND_AGREE_TOL:
                raise BackendMismatch(
                    f"backends disagree at {process} lambda={lam:.6g}: "
                    f"trace distance {dist:.3e} > {BACKEND_AGREE_TOL}"
                )
        else:
            tau = interventional_state(s, backend)
        tag = f"{process}@{lam:.6g}"
        rows.append((lam, evaluate(tau, spec=spec, tag=tag, marginals=True)))
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    return "%.12g" % value


def csv_text(rows) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for lam, r in rows:
        lines.append(",".join((
            _fmt(lam),
            _fmt(r.dp_ab), _fmt(r.bound_ab), _fmt(r.dp_ba), _fmt(r.bound_ba),
            _fmt(r.violated_ab), _fmt(r.violated_ba),
            _fmt(r.i1_ab), _fmt(r.i2_ab), _fmt(r.i1_ba), _fmt(r.i2_ba),
            r.verdict,
        )))
    return "\n".join(lines) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def cmd_sweep(args) -> int:
    if not 0.0 <= args.lambda_min <= args.lambda_max <= 1.0:
        print("error: need 0 <= lambda-min <= lambda-max <= 1", file=sys.stderr)
        return 2
    if args.lambda_steps < 2:
        print("error: lambda-steps must be at least 2", file=sys.stderr)
        return 2
    lams = np.linspace(args.lambda_min, args.lambda_max, args.lambda_steps)
    try:
        rows = sweep_reports(args.process, lams, args.entropy, args.backend)
    except BackendMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write(csv_text(rows), args.out)
    return 0


def cmd_verify(args) -> int:
    trials = args.trials
    if trials is None:
        trials = campaigns.DEFAULT_TRIALS[args.campaign]
    summary = campaigns.RUNNERS[args.campaign](trials=trials, seed=args.seed)
    _write(json.dumps(summary, indent=2, sort_keys=True) + "\n", args.out)
    if summary["failures"]:
        print(f"error: campaign {args.campaign} had {summary['failures']} "
              f"tolerance failures (worst slack {summary['worst_slack']:.3e})",
              file=sys.stderr)
        return 1
    return 0


# figure tag -> list of (file name, process, entropy spec)
_FIGURE_PLAN = {
    "3a": [("fig3a.csv", "switch_full", VON_NEUMANN)],
    "3b": [("fig3b.csv", "upsilon1", VON_NEUMANN)],
    "3c": [("fig3c.csv", "upsilon2", VON_NEUMANN)],
    "4": [("fig4.csv", "upsilon1", VON_NEUMANN)],
    "5a": [("fig5a_vn.csv", "upsilon2", VON_NEUMANN),
           ("fig5a_alpha0.5.csv", "upsilon2", renyi(0.5)),
           ("fig5a_alpha0.65.csv", "upsilon2", renyi(0.65)),
           ("fig5a_alpha0.8.csv", "upsilon2", renyi(0.8))],
    "5b": [("fig5b_vn.csv", "upsilon2", VON_NEUMANN),
           ("fig5b_alpha2.csv", "upsilon2", renyi(2.0)),
           ("fig5b_alpha3.csv", "upsilon2", renyi(3.0)),
           ("fig5b_alpha4.csv", "upsilon2", renyi(4.0)),
           ("fig5b_alphainf.csv", "upsilon2", MIN_ENTROPY)],
}


def cmd_reproduce(args) -> int:
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    lams = np.linspace(0.0, 1.0, 101)
    for name, process, spec in _FIGURE_PLAN[args.figure]:
        rows = sweep_reports(process, lams, spec, "statevector")
        path = outdir / name
        with open(path, "w", newline="\n") as fh:
            fh.write(csv_text(rows))
        print(f"wrote {path}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qcausal",
        description="Entropic witnesses of indefinite causal order: sweeps, "
                    "property campaigns, figure data.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="witness values over a control-weight grid")
    sw.add_argument("--process", choices=PROCESS_TAGS, required=True,
                    help="which case-study process to sweep")
    sw.add_argument("--lambda-min", type=float, default=0.0)
    sw.add_argument("--lambda-max", type=float, default=1.0)
    sw.add_argument("--lambda-steps", type=int, default=101)
    sw.add_argument("--entropy", type=parse_entropy, default=VON_NEUMANN,
                    metavar="vn|renyi:<alpha>|min|max",
                    help="entropy family for the DP columns (default vn)")
    sw.add_argument("--backend", choices=("statevector", "contraction", "both"),
                    default="statevector",
                    help="'both' cross-checks the backends at every grid point")
    sw.add_argument("--seed", type=int, default=0,
                    help="accepted for interface uniformity; sweeps are deterministic")
    sw.add_argument("--out", default=None, help="CSV path (default stdout)")
    sw.set_defaults(func=cmd_sweep)

    ve = sub.add_parser("verify", help="run a property campaign")
    ve.add_argument("campaign", choices=campaigns.CAMPAIGNS)
    ve.add_argument("--trials", type=int, default=None,
                    help="trial count (default per campaign)")
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--out", default=None, help="JSON path (default stdout)")
    ve.set_defaults(func=cmd_verify)

    rp = sub.add_parser("reproduce", help="write figure-data CSV files")
    rp.add_argument("figure", choices=FIGURES)
    rp.add_argument("--out", default=".", help="output directory (default .)")
    rp.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trials", None) is not None and args.trials < 1:
        print("error: trials must be at least 1", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
