"""Command-line entry point.

Exit codes: 0 success, 2 malformed input, 3 guard violation, 4 numerical
failure.  Every command is a pure function of its flags, so repeated runs
(with any --threads value) print and write the same bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import binary_example, capacity, channels, outer, sim, support
from .errors import GuardError, NumericalError, SpecParseError
from .geometry import ConvexRegion2D

EXIT_PARSE, EXIT_GUARD, EXIT_NUMERICAL = 2, 3, 4


def _fmt(v: float) -> str:
    s = f"{v:.9f}"
    return "0.000000000" if s == "-0.000000000" else s


def _print_region(region: ConvexRegion2D, out) -> None:
    print(f"area: {_fmt(region.area)}", file=out)
    print("corners:", file=out)
    for ry, rz in region.vertices:
        print(f"  {_fmt(ry)} {_fmt(rz)}", file=out)


def _search_config(args) -> capacity.SearchConfig:
    return capacity.SearchConfig(
        weight_sweep_count=args.sweeps,
        random_restarts=args.restarts,
        local_steps=args.steps,
        seed=args.seed,
        deterministic_selection=getattr(args, "deterministic_selection", False),
    )


def _write_csv(region: ConvexRegion2D, path) -> None:
    if path:
        Path(path).write_text(region.to_csv())


def cmd_region_inner(args, out):
    ch = channels.parse_semidet(args.channel)
    region = capacity.inner_region(ch, _search_config(args), workers=args.threads)
    _write_csv(region, args.out)
    _print_region(region, out)


def cmd_region_outer(args, out):
    ch = channels.parse_general(args.channel)
    region = outer.outer_region_estimate(ch, _search_config(args), workers=args.threads)
    _write_csv(region, args.out)
    print(f"estimate: {region.meta['estimate']}", file=out)
    _print_region(region, out)


def cmd_region_causal(args, out):
    ch = channels.parse_general(args.channel)
    letters = outer.strategy_letters(ch.x_size, ch.s_size)
    region = outer.causal_outer_region(ch, _search_config(args))
    _write_csv(region, args.out)
    print(f"strategies: {len(letters)}", file=out)
    _print_region(region, out)


def _summary(name, region: ConvexRegion2D, out) -> None:
    v = region.vertices
    print(f"{name}: {len(v)} vertices, area {_fmt(region.area)}, "
          f"R_y axis {_fmt(v[:, 0].max())}, R_z axis {_fmt(v[:, 1].max())}", file=out)


def cmd_example_figure1(args, out):
    res = binary_example.write_figure1(args.out_dir, args.p, args.sigma, causal=not args.no_causal)
    d = Path(args.out_dir)
    _summary("noncausal", res["noncausal"], out)
    if res["causal"] is not None:
        _summary("causal", res["causal"], out)
    names = ["noncausal.csv"] + (["causal.csv"] if res["causal"] is not None else []) + ["figure1.svg"]
    for name in names:
        print(f"wrote {d / name}", file=out)


def _selection(ch, pol):
    if isinstance(pol, channels.SelectionPolicy):
        return pol
    return sim.selection_from_policy(ch, pol)


def cmd_simulate(args, out):
    ch = channels.parse_semidet(args.channel)
    pol = channels.parse_policy(args.policy, ch.x_size, ch.s_size)
    sel = _selection(ch, pol)
    cfg = sim.SimConfig(args.n, args.ry, args.rz, args.cry, args.crz, args.eps, args.trials, args.seed)
    report = sim.run_trials(ch, sel, cfg, workers=args.threads, fixed_codebook=args.fixed_codebook)
    out.write(report.to_text())


def cmd_reduce_support(args, out):
    ch = channels.parse_semidet(args.channel)
    pol = channels.parse_policy(args.policy, ch.x_size, ch.s_size)
    if not isinstance(pol, channels.AuxPolicy):
        raise SpecParseError("p_xu_given_s", "reduce-support needs a P_{XU|S} policy")
    joint = capacity.joint_from_policy(ch, pol)
    reduced = support.reduce_support(joint)
    before = capacity.triple_from_joint(joint)
    after = capacity.triple_from_joint(reduced)
    new_pol = channels.AuxPolicy.from_joint(reduced)
    print(f"support: {int(np.sum(joint.marginal('U').mass > 0))} -> {new_pol.u_size}", file=out)
    for name, b, a in zip(("H(Y|S)", "I(U;Z)-I(U;S)", "sum bound"), before, after):
        print(f"{name}: {_fmt(b)} -> {_fmt(a)}", file=out)
    if args.out:
        Path(args.out).write_text(json.dumps(channels.policy_to_dict(new_pol), indent=1) + "\n")


def _add_search_flags(p, default_sweeps=64, default_restarts=50):
    p.add_argument("--channel", required=True, help="channel spec (JSON)")
    p.add_argument("--sweeps", type=int, default=default_sweeps, help="weight directions")
    p.add_argument("--restarts", type=int, default=default_restarts, help="random starts per direction")
    p.add_argument("--steps", type=int, default=30, help="local search rounds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the vertex CSV here")
    p.add_argument("--threads", type=int, default=1, help="worker cap; does not change results")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semidet-bc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("region-inner", help="searched capacity region of a semideterministic channel")
    _add_search_flags(p)
    p.add_argument("--deterministic-selection", action="store_true",
                   help="search only policies with X a function of (Y, U, S)")
    p.set_defaults(func=cmd_region_inner)

    p = sub.add_parser("region-outer", help="searched outer bound for a general channel")
    _add_search_flags(p)
    p.set_defaults(func=cmd_region_outer)

    p = sub.add_parser("region-causal", help="strategy-letter outer bound with causal state")
    _add_search_flags(p)
    p.set_defaults(func=cmd_region_causal)

    p = sub.add_parser("example-figure1", help="closed-form regions of the binary example")
    p.add_argument("--p", type=float, default=0.2, help="BSC crossover")
    p.add_argument("--sigma", type=float, default=0.5, help="P(S = 1)")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--no-causal", action="store_true", help="skip the causal overlay")
    p.add_argument("--threads", type=int, default=1, help="accepted for uniformity; unused")
    p.set_defaults(func=cmd_example_figure1)

    p = sub.add_parser("simulate", help="Monte Carlo run of the binned coding scheme")
    p.add_argument("--channel", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ry", type=float, required=True)
    p.add_argument("--rz", type=float, required=True)
    p.add_argument("--cry", type=float, required=True)
    p.add_argument("--crz", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--fixed-codebook", action="store_true",
                   help="share one codebook across trials instead of redrawing per trial")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reduce-support", help="shrink the auxiliary alphabet of a policy")
    p.add_argument("--channel", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--out", help="write the reduced policy (JSON)")
    p.add_argument("--threads", type=int, default=1, help="accepted for uniformity; unused")
    p.set_defaults(func=cmd_reduce_support)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_PARSE
    try:
        args.func(args, out)
    except GuardError as e:
        print(f"guard violation: {e}", file=sys.stderr)
        return EXIT_GUARD
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SpecParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    return 0


if __name__ == "__main__":
    sys.exit(main())
