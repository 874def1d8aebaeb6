"""Command-line surface: sampling, densities, posteriors, tables, closure checks.

Every subcommand is reproducible per (flags, seed): identical invocations
write identical bytes.  Validation failures exit nonzero with a single-line
JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import __version__, families
from .families import FamilySpec, complement
from .grids import DEFAULT_GRID_SAMPLES, density_grid
from .inference import (
    DiagnosticData,
    PriorSpec,
    joint_posterior,
    marginal_csv,
    pi_posterior,
    posterior_summary,
    predictive_propensity,
)
from .sampling import RngState, estimate_moments, sample_pairs
from .special import BetaParams
from .survivability import MonteCarloSettings, reproduce_table, table_csv
from .synth import SynthConfig, generate, true_params
from .serialize import csv_text, json_text, write_text


class CliError(ValueError):
    pass


def _parse_floats(text: str, what: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise CliError(f"could not parse {what} {text!r}: {exc}") from None


def _parse_beta(text: str, what: str) -> BetaParams:
    values = _parse_floats(text, what)
    if len(values) != 2:
        raise CliError(f"{what} needs exactly two values a,b, got {text!r}")
    return BetaParams(values[0], values[1])


def _family_from_flags(
    variant: Optional[str],
    alphas: Optional[str],
    beta1: Optional[str],
    beta2: Optional[str],
    prefix: str = "--",
) -> FamilySpec:
    if variant is None:
        raise CliError(f"missing {prefix}family")
    if variant == families.INDEPENDENT:
        if beta1 is None or beta2 is None:
            raise CliError(f"family 'indep' needs {prefix}beta1 and {prefix}beta2")
        return FamilySpec.independent(
            _parse_beta(beta1, f"{prefix}beta1"), _parse_beta(beta2, f"{prefix}beta2")
        )
    if alphas is None:
        raise CliError(f"family {variant!r} needs {prefix}alphas")
    return FamilySpec(variant, tuple(_parse_floats(alphas, f"{prefix}alphas")))


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        write_text(out, text)


def _meta(args: argparse.Namespace, keys: Sequence[str]) -> dict:
    meta = {k: getattr(args, k.replace("-", "_")) for k in keys}
    meta["version"] = __version__
    return meta


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_sample(args: argparse.Namespace) -> None:
    family = _family_from_flags(args.family, args.alphas, args.beta1, args.beta2)
    if args.n < 0:
        raise CliError(f"--n must be >= 0, got {args.n}")
    rng = RngState(args.seed, args.stream)
    x, y = sample_pairs(rng, family, args.n)
    if args.format == "csv":
        _emit(csv_text(["x", "y"], zip(x.tolist(), y.tolist())), args.out)
    else:
        meta = _meta(args, ["family", "alphas", "beta1", "beta2", "n", "seed", "stream"])
        _emit(json_text(meta, {"x": x.tolist(), "y": y.tolist()}), args.out)


def _cmd_density(args: argparse.Namespace) -> None:
    family = _family_from_flags(args.family, args.alphas, args.beta1, args.beta2)
    rng = RngState(args.seed, args.stream)
    grid = density_grid(family, m=args.m, n_samples=args.mc_samples, rng=rng)
    _emit(grid.to_csv() if args.format == "csv" else grid.to_json(), args.out)


def _cmd_posterior(args: argparse.Namespace) -> None:
    prior_family = _family_from_flags(
        args.prior_family, args.prior_alphas, args.prior_beta1, args.prior_beta2, "--prior-"
    )
    prior = PriorSpec(prior_family, _parse_beta(args.pi_prior, "--pi-prior"))
    rng = RngState(args.seed, args.stream)
    truth = None
    if args.data is not None:
        counts = _parse_floats(args.data, "--data")
        if len(counts) != 4 or any(c != int(c) for c in counts):
            raise CliError(f"--data needs four integers n,n1,k1,k2, got {args.data!r}")
        try:
            d = DiagnosticData(*(int(c) for c in counts))
        except ValueError as exc:
            raise CliError(str(exc)) from None
    elif args.synth_n is not None:
        config = SynthConfig(
            pi=args.synth_pi,
            n=args.synth_n,
            mu0=args.synth_mu0,
            mu1=args.synth_mu1,
            t=args.synth_t,
            rng=RngState(args.seed, args.stream + 1),
        )
        d = generate(config)
        truth = true_params(config)
    else:
        raise CliError("posterior needs either --data n,n1,k1,k2 or --synth-n (with synth flags)")

    if args.out in (None, "-"):
        raise CliError("posterior writes multiple files and needs --out PREFIX")
    gp = joint_posterior(d, prior, m=args.m, rng=rng, prior_samples=args.mc_samples)
    summary = posterior_summary(gp)
    pi_post = pi_posterior(d, prior.pi_prior)
    lam, psi = predictive_propensity(gp)
    out = args.out
    _emit(gp.to_csv(), f"{out}.weights.csv")
    _emit(gp.to_json(seed=rng.identity), f"{out}.grid.json")
    _emit(marginal_csv(gp, "eta"), f"{out}.marginal_eta.csv")
    _emit(marginal_csv(gp, "theta"), f"{out}.marginal_theta.csv")
    meta = _meta(args, ["m", "seed", "stream", "prior_family"])
    data = {
        "data": {"n": d.n, "n1": d.n1, "k1": d.k1, "k2": d.k2},
        "mean_eta": summary.mean_eta,
        "mean_theta": summary.mean_theta,
        "mode_cell": list(summary.mode_cell),
        "correlation": summary.correlation,
        "pi_posterior": [pi_post.a, pi_post.b],
        "predictive_positive": lam,
        "predictive_negative": psi,
    }
    if truth is not None:
        data["true_eta"] = truth[0]
        data["true_theta"] = truth[1]
    _emit(json_text(meta, data), f"{out}.summary.json")


def _cmd_tables(args: argparse.Namespace) -> None:
    mc = None
    if args.table in (5, 6):
        mc = MonteCarloSettings(args.mc_samples, RngState(args.seed, args.stream))
    rows = reproduce_table(args.table, mc)
    _emit(table_csv(rows), args.out)


def _cmd_closure_check(args: argparse.Namespace) -> None:
    family = _family_from_flags(args.family, args.alphas, args.beta1, args.beta2)
    flipped = complement(family, args.which)
    back = complement(flipped, args.which)
    rng = RngState(args.seed, args.stream)
    x, y = sample_pairs(rng, family, args.mc_samples)
    if args.which in ("x", "both"):
        x = 1.0 - x
    if args.which in ("y", "both"):
        y = 1.0 - y
    est = estimate_moments(flipped, args.mc_samples, RngState(args.seed, args.stream + 1))
    n = args.mc_samples
    checks = {
        "mean_x": (float(x.mean()), est.mean_x, 4.0 * np.sqrt((x.var() + est.var_x) / n)),
        "mean_y": (float(y.mean()), est.mean_y, 4.0 * np.sqrt((y.var() + est.var_y) / n)),
        "correlation": (
            float(np.corrcoef(x, y)[0, 1]),
            est.correlation,
            4.0 * np.sqrt(2.0) * est.std_error_corr,
        ),
    }
    passed = all(abs(a - b) <= tol for a, b, tol in checks.values())
    meta = _meta(args, ["family", "alphas", "which", "mc_samples", "seed", "stream"])
    data = {
        "complement": flipped.label(),
        "double_complement": back.label(),
        "involution": back == family,
        "oracle": {
            k: {"complemented_samples": a, "returned_spec": b, "tolerance": tol}
            for k, (a, b, tol) in checks.items()
        },
        "oracle_passed": bool(passed),
    }
    _emit(json_text(meta, data), args.out)
    if not passed:
        raise CliError("equality-in-law oracle failed for the complemented spec")


# ---------------------------------------------------------------------------
# parser plumbing
# ---------------------------------------------------------------------------


def _add_family_flags(p: argparse.ArgumentParser, prefix: str = "") -> None:
    dash = f"--{prefix}" if prefix else "--"
    p.add_argument(f"{dash}family", choices=sorted(families.VARIANTS), default=None)
    p.add_argument(f"{dash}alphas", default=None, help="comma-separated alpha vector")
    p.add_argument(f"{dash}beta1", default=None, help="a,b of the first marginal (indep)")
    p.add_argument(f"{dash}beta2", default=None, help="a,b of the second marginal (indep)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--out", default=None, help="output path ('-' or omitted: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--config", default=None, help="JSON file of flag defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bibeta",
        description="Bivariate beta families, screening-test inference, survivability tables",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw (x, y) pairs from a family")
    _add_family_flags(p)
    p.add_argument("--n", type=int, default=1000)
    _add_common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("density", help="density grid of a family")
    _add_family_flags(p)
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--mc-samples", type=int, default=DEFAULT_GRID_SAMPLES)
    _add_common(p)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("posterior", help="grid posterior from counts or synthetic data")
    p.add_argument(
        "--data", default=None, help="observed counts n,n1,k1,k2 (takes precedence over --synth-n)"
    )
    p.add_argument("--synth-pi", type=float, default=0.35)
    p.add_argument("--synth-n", type=int, default=None)
    p.add_argument("--synth-mu0", type=float, default=3.0)
    p.add_argument("--synth-mu1", type=float, default=4.0)
    p.add_argument("--synth-t", type=float, default=3.25)
    _add_family_flags(p, "prior-")
    p.add_argument("--pi-prior", default="1,1", help="a,b of the beta prior on prevalence")
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--mc-samples", type=int, default=DEFAULT_GRID_SAMPLES)
    _add_common(p)
    p.set_defaults(func=_cmd_posterior)

    p = sub.add_parser("tables", help="reproduce a published survivability table")
    p.add_argument("--table", type=int, choices=[4, 5, 6], required=True)
    p.add_argument("--mc-samples", type=int, default=1_000_000)
    _add_common(p)
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser("closure-check", help="complement a family and run the law oracle")
    _add_family_flags(p)
    p.add_argument("--which", choices=["x", "y", "both"], default="y")
    p.add_argument("--mc-samples", type=int, default=1_000_000)
    _add_common(p)
    p.set_defaults(func=_cmd_closure_check)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: List[str]) -> argparse.Namespace:
    # config values fill in flags the user left unset; explicit flags win.
    # Re-parsing (config flags first, user flags after) keeps argparse's
    # type conversion and choice validation in force for config values.
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    try:
        with open(args.config) as fh:
            overrides = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"could not read --config {args.config!r}: {exc}") from None
    if not isinstance(overrides, dict):
        raise CliError("--config must contain a JSON object of flag values")
    explicit = {a.split("=", 1)[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    filled = []
    for key, value in overrides.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise CliError(f"--config key {key!r} is not a flag of this subcommand")
        if attr not in explicit and value is not None:
            filled.extend([f"--{attr.replace('_', '-')}", str(value)])
    if filled:
        args = parser.parse_args(argv[:1] + filled + argv[1:])
    return args


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, list(sys.argv[1:] if argv is None else argv))
        args.func(args)
    except ValueError as exc:  # CliError, NotClosedError and all validation errors
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
