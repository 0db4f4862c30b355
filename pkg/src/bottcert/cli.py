"""Command-line interface for verification, inspection and reports."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .comparison import brute_force_max_trivial, closed_form_max_trivial, max_trivial_multiple
from .errors import BottcertError, BudgetExhaustedError, ParameterError, SizeExceededError
from .euler import max_trivial_by_euler
from .projections import DisjointFamilySummary, FormalProjection
from .tower import FanoutSequence, Tower, TowerParams, decimal_approx
from .verifier import check_certificate, trace_growth, verify_not_properly_infinite

_CONFIG_KEYS = {"max_stage", "truncation_depth", "k_kind", "k_base", "k_values", "k_constant"}
_PARANOID_EXPANSION_LIMIT = 20000


class _ArgumentParser(argparse.ArgumentParser):
    """Report usage problems through the package's error path (exit 3)."""

    def error(self, message):
        raise ParameterError(message)


def _parse_config_value(raw: str):
    raw = raw.strip()
    if len(raw) >= 2 and raw.startswith('"') and raw.endswith('"'):
        return raw[1:-1]
    if raw.startswith("[") and raw.endswith("]"):
        inner = raw[1:-1].strip()
        if not inner:
            return []
        try:
            return [int(part) for part in inner.split(",")]
        except ValueError:
            raise ParameterError(f"config lists hold integers only, got {raw!r}") from None
    try:
        return int(raw)
    except ValueError:
        raise ParameterError(f"cannot parse config value {raw!r}") from None


def load_config(path) -> dict:
    """Read the flat ``key = value`` configuration format.

    Recognised keys: max_stage, truncation_depth, k_kind, k_base,
    k_values, k_constant.  Values are integers, quoted strings or
    bracketed integer lists; ``#`` starts a comment.  (A flat subset of
    TOML, since nothing nested is ever needed.)
    """
    options: dict = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, sep, raw = stripped.partition("=")
        if not sep:
            raise ParameterError(f"{path}:{lineno}: expected key = value")
        options[key.strip()] = _parse_config_value(raw)
    unknown = sorted(set(options) - _CONFIG_KEYS)
    if unknown:
        raise ParameterError(f"unknown config keys {unknown}; expected {sorted(_CONFIG_KEYS)}")
    return options


def _params_from(args) -> TowerParams:
    options = load_config(args.config) if getattr(args, "config", None) else {}
    kind = options.get("k_kind", "geometric")
    if kind == "geometric":
        fanouts = FanoutSequence.geometric(options.get("k_base", 1))
    elif kind == "explicit":
        fanouts = FanoutSequence.explicit(options.get("k_values", ()))
    elif kind == "constant":
        fanouts = FanoutSequence.constant_value(options.get("k_constant", 1))
    else:
        raise ParameterError(f"unknown k_kind {kind!r}")
    max_stage = getattr(args, "max_stage", None)
    if max_stage is None:
        max_stage = options.get("max_stage", 12)
    depth = getattr(args, "depth", None)
    if depth is None:
        depth = options.get("truncation_depth", 40)
    return TowerParams(fanouts=fanouts, max_stage=max_stage, truncation_depth=depth)


def _cmd_verify(args) -> int:
    params = _params_from(args)
    cert = verify_not_properly_infinite(params, args.n)
    check_certificate(cert)
    series = cert.series
    print(f"series enclosure: [{decimal_approx(series.lo)}, {decimal_approx(series.hi)}]"
          f" (width {decimal_approx(series.width, 15)})")
    print(f"threshold: {cert.threshold} (least integer above {decimal_approx(cert.uniform_bound, 6)})")
    print(f"stage checks: all {len(cert.stage_checks)} pairs strictly below the bound")
    witness = cert.witness
    print(f"witness stage: capacity {witness.capacity} >= bound {witness.bound}"
          f" at scale {witness.scale}, source {witness.source}, target {witness.target}")
    print(f"conclusion: {cert.conclusion}")
    print("certificate self-check: passed")
    if args.json:
        Path(args.json).write_text(cert.canonical_json() + "\n", encoding="utf-8")
        print(f"certificate written to {args.json}")
    return 0


def _cmd_trace_growth(args) -> int:
    params = _params_from(args)
    report = trace_growth(params, args.mode, args.stages)
    if report.verified_rank_stages:
        print(f"rank identities verified through stage {report.verified_rank_stages}")
    print(f"trace values ({report.mode} mode): {', '.join(report.values())}")
    if args.json:
        Path(args.json).write_text(
            json.dumps(report.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n",
            encoding="utf-8",
        )
        print(f"report written to {args.json}")
    return 0


def _cmd_compare(args) -> int:
    if args.copies < 0:
        raise ParameterError(f"--copies must be nonnegative, got {args.copies}")
    data = json.loads(Path(args.target).read_text(encoding="utf-8"))
    explicit = isinstance(data, dict) and "terms" in data
    if explicit:
        q = FormalProjection.from_json_dict(data)
        maximum, witness = max_trivial_multiple(q)
        witness_json = witness.to_json_dict()
    elif isinstance(data, dict) and "groups" in data:
        summary = DisjointFamilySummary.from_json_dict(data)
        maximum = closed_form_max_trivial(summary)
        witness_json = None
    else:
        raise ParameterError("target JSON must carry either 'terms' or 'groups'")
    result = args.copies <= maximum
    output = {"result": result, "max_trivial": maximum, "witness": witness_json}
    if args.paranoid:
        cross = {}
        if explicit:
            cross["brute_force"] = brute_force_max_trivial(q)
            cross["euler"] = max_trivial_by_euler(q)
        else:
            if summary.rank > _PARANOID_EXPANSION_LIMIT:
                raise SizeExceededError(
                    f"rank {summary.rank} too large to expand for cross-checking"
                )
            cross["matching_on_expansion"] = max_trivial_multiple(summary.expand())[0]
        if any(value != maximum for value in cross.values()):
            raise BottcertError(f"cross-check disagreement: {cross} vs {maximum}")
        cross["agreement"] = True
        output["cross_checks"] = cross
    print(json.dumps(output, indent=2))
    return 0 if result else 1


def _cmd_stage(args) -> int:
    tower = Tower(_params_from(args))
    print(json.dumps(tower.stage(args.j).to_json_dict(), indent=2))
    return 0


def _cmd_counts(args) -> int:
    tower = Tower(_params_from(args))
    out = tower.map_counts(args.i, args.j).to_json_dict()
    out["unit_multiplicity_target"] = tower.unit_multiplicity(args.i)
    out["n"] = args.n
    out["trivial_capacity_n"] = tower.trivial_copy_capacity(args.i, args.j, args.n)
    out["trivial_capacity_2n"] = tower.trivial_copy_capacity(args.i, args.j, 2 * args.n)
    print(json.dumps(out, indent=2))
    return 0


def _cmd_r_enclosure(args) -> int:
    params = _params_from(args)
    tower = Tower(params)
    depth = args.depth if args.depth is not None else params.truncation_depth
    interval = tower.series_enclosure(depth)
    out = interval.to_json_dict()
    out["depth"] = depth
    out["lo_decimal"] = decimal_approx(interval.lo)
    out["hi_decimal"] = decimal_approx(interval.hi)
    out["width_decimal"] = decimal_approx(interval.width, 18)
    print(json.dumps(out, indent=2))
    return 0


def _cmd_report(args) -> int:
    from .report import write_report

    try:
        depths = tuple(int(part) for part in args.depths.split(","))
    except ValueError:
        raise ParameterError(f"--depths must be comma-separated integers, got {args.depths!r}") from None
    params = _params_from(args)
    written = write_report(args.out_dir, params=params, n=args.n, stages=args.stages, depths=depths)
    for path in written:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", metavar="FILE", help="flat key = value parameter file")
    shared.add_argument("--max-stage", dest="max_stage", type=int, metavar="S",
                        help="stage budget (default 12 or the config value)")
    shared.add_argument("--depth", dest="depth", type=int, metavar="D",
                        help="series truncation depth (default 40 or the config value)")

    parser = _ArgumentParser(
        prog="bottcert",
        description="Exact comparison of Bott line-bundle sums and certified tower verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-simple-example", parents=[shared],
                       help="certify that n times the limit projection is not properly infinite")
    p.add_argument("--n", type=int, required=True, help="the multiple to verify")
    p.add_argument("--json", metavar="OUT", help="write the certificate as canonical JSON")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("trace-growth", parents=[shared], help="report linear trace growth")
    p.add_argument("--mode", choices=("simple", "nonsimple"), default="simple")
    p.add_argument("--stages", type=int, default=10)
    p.add_argument("--json", metavar="OUT", help="write the report as canonical JSON")
    p.set_defaults(func=_cmd_trace_growth)

    p = sub.add_parser("compare", help="how many trivial copies embed in a target projection")
    p.add_argument("--target", required=True, metavar="FILE",
                   help="JSON file with either explicit 'terms' or compressed 'groups'")
    p.add_argument("--copies", type=int, required=True, help="number of trivial copies to test")
    p.add_argument("--paranoid", action="store_true",
                   help="also run the exponential oracles and require agreement")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("stage", parents=[shared], help="exact data of one tower stage")
    p.add_argument("--j", type=int, required=True)
    p.set_defaults(func=_cmd_stage)

    p = sub.add_parser("counts", parents=[shared], help="connecting-map counts and capacities")
    p.add_argument("--i", type=int, required=True, help="target stage")
    p.add_argument("--j", type=int, required=True, help="source stage")
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=_cmd_counts)

    p = sub.add_parser("r-enclosure", parents=[shared], help="certified enclosure of the fan-out series")
    p.set_defaults(func=_cmd_r_enclosure)

    p = sub.add_parser("report", parents=[shared], help="write CSV tables and figures")
    p.add_argument("--out-dir", required=True, metavar="DIR")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--stages", type=int, default=8)
    p.add_argument("--depths", default="10,20,30,40", metavar="D1,D2,...")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except BudgetExhaustedError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    except (BottcertError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
