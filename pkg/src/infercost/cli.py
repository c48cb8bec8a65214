"""Command-line interface.

Exit contract: 0 success, 1 validation error, 2 I/O or endpoint error.
Machine-readable output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import socket
import sys
from datetime import datetime, timezone
from pathlib import Path

from .api import create_app, evaluate_whatif, fixture_document
from .bench import (
    MockTiming,
    RunConfig,
    load_workload,
    run_sweep,
    write_trace_log,
)
from .bench import mock_server as mock_server_mod
from .cost_model import (
    A800_BASELINE,
    ClusterSpec,
    GpuCostParams,
    PRESETS,
    break_even_utilization,
    cluster_hourly,
    effective_hourly,
    hourly_breakdown,
    load_params,
    params_from_dict,
    reference_cluster_rate,
)
from .dataset import (
    cost_crosschecks,
    parse_dataset,
    parse_model_cards,
    serialize_dataset,
    serialize_runs,
)
from .errors import EndpointError, ValidationError
from .fixture import FIXTURE_DATASET_ID, FIXTURE_HOURLY_USD, canonical_fixture
from .reporting import (
    PlotOptions,
    build_report,
    fmt_usd,
    render_frontier_plot,
    render_table,
)
from .selection import ParetoPoint, PerfThresholds, pareto_frontier, select_optimal, what_if


class _Parser(argparse.ArgumentParser):
    # argparse exits with its own code 2 on usage errors; route them
    # through the validation path so bad flags exit 1 per the contract.
    def error(self, message):
        raise ValidationError(message)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(obj) -> None:
    _emit(json.dumps(obj, indent=2))


def _write_or_emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        _emit(text)


# ---------------------------------------------------------------- parameters

_PARAM_FLAGS = {
    "price": "purchase_price",
    "years": "depreciation_years",
    "utilization": "utilization",
    "power_kw": "avg_power_kw",
    "pue": "pue",
    "electricity": "electricity_price",
    "maintenance_rate": "maintenance_rate",
    "fx": "fx_cny_per_usd",
}


def _add_param_flags(parser) -> None:
    parser.add_argument("--preset", choices=sorted(PRESETS), help="named parameter preset")
    parser.add_argument("--params-file", help="JSON or TOML cost-parameter file")
    parser.add_argument("--price", type=float, help="GPU purchase price (CNY)")
    parser.add_argument("--years", type=float, help="depreciation period (years)")
    parser.add_argument("--utilization", type=float, help="utilization fraction in (0, 1]")
    parser.add_argument("--power-kw", type=float, help="average power draw (kW)")
    parser.add_argument("--pue", type=float, help="power usage effectiveness (>= 1)")
    parser.add_argument("--electricity", type=float, help="electricity price (CNY/kWh)")
    parser.add_argument("--maintenance-rate", type=float, help="annual maintenance fraction")
    parser.add_argument("--fx", type=float, help="CNY per USD")


def _resolve_params(args, default: GpuCostParams | None = None) -> GpuCostParams | None:
    base: dict | None = None
    if args.params_file:
        base = load_params(args.params_file).as_dict()
    elif args.preset:
        base = PRESETS[args.preset].as_dict()
    overrides = {
        field: getattr(args, flag)
        for flag, field in _PARAM_FLAGS.items()
        if getattr(args, flag) is not None
    }
    if base is None and not overrides:
        return default
    if base is None:
        # range-check the flags that were given before complaining about missing ones
        params_from_dict({"purchase_price": 0.0, "depreciation_years": 1.0, **overrides})
        base = {
            "utilization": 1.0, "avg_power_kw": 0.0, "pue": 1.0,
            "electricity_price": 0.0, "maintenance_rate": 0.0,
        }
    base.update(overrides)
    return params_from_dict(base)


def _add_threshold_flags(parser) -> None:
    defaults = PerfThresholds()
    parser.add_argument("--max-ttft", type=float, default=defaults.max_ttft_s,
                        help="TTFT ceiling in seconds (strict, default %(default)s)")
    parser.add_argument("--min-throughput", type=float, default=defaults.min_throughput_tok_s,
                        help="per-request throughput floor in tok/s (strict, default %(default)s)")


def _thresholds(args) -> PerfThresholds:
    return PerfThresholds(max_ttft_s=args.max_ttft, min_throughput_tok_s=args.min_throughput)


def _add_rate_flags(parser) -> None:
    parser.add_argument("--hourly-rate", type=float,
                        help=f"cluster rate in USD/hour (default {FIXTURE_HOURLY_USD})")
    parser.add_argument("--cost-params", help="derive the rate from a cost-parameter file")
    parser.add_argument("--rate-preset", choices=sorted(PRESETS), help="derive the rate from a preset")
    parser.add_argument("--gpus", type=int, default=2, help="GPUs in the cluster (default %(default)s)")


def _resolve_rate(args) -> float:
    if args.hourly_rate is not None:
        if not args.hourly_rate > 0:
            raise ValidationError("--hourly-rate must be > 0", field="hourly_rate")
        return args.hourly_rate
    if args.cost_params:
        return reference_cluster_rate(load_params(args.cost_params), args.gpus)
    if args.rate_preset:
        return reference_cluster_rate(PRESETS[args.rate_preset], args.gpus)
    return FIXTURE_HOURLY_USD


# ------------------------------------------------------------------ datasets

def _add_dataset_flags(parser, with_scores: bool) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--fixture", action="store_true", help="use the embedded dataset")
    source.add_argument("--runs", help="run file (CSV or JSON)")
    parser.add_argument("--runs-format", choices=["csv", "json"],
                        help="run file format (default: by extension)")
    if with_scores:
        parser.add_argument("--scores", help="model cards file (JSON or CSV)")


def _file_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    return "csv" if path.lower().endswith(".csv") else "json"


def _load_dataset(args, need_cards: bool):
    if args.runs:
        text = Path(args.runs).read_text(encoding="utf-8")
        sweeps, cards = parse_dataset(text, _file_format(args.runs, args.runs_format))
        if getattr(args, "scores", None):
            scores_text = Path(args.scores).read_text(encoding="utf-8")
            cards = parse_model_cards(scores_text, _file_format(args.scores, None))
        if need_cards and not cards:
            raise ValidationError("quality scores required: pass --scores or embed model_cards",
                                  field="scores")
        return list(sweeps), list(cards), Path(args.runs).name
    sweeps, cards = canonical_fixture()
    return list(sweeps), list(cards), FIXTURE_DATASET_ID


# ------------------------------------------------------------------ commands

def cmd_cost(args) -> int:
    params = _resolve_params(args)
    if params is None:
        raise ValidationError("no parameters given: use --preset, --params-file, or flags")
    breakdown = hourly_breakdown(params)
    payload: dict = {"params": params.as_dict(), "per_gpu": breakdown.as_dict()}
    if args.gpus > 1:
        payload["cluster"] = {
            "gpu_count": args.gpus,
            "hourly_usd": cluster_hourly(ClusterSpec(gpu_count=args.gpus, params=params)),
            "reference_rate_usd": reference_cluster_rate(params, args.gpus),
        }
    if args.effective_utilization is not None:
        payload["effective_usd_hr"] = effective_hourly(breakdown, args.effective_utilization)
    if args.cloud_rate is not None:
        payload["break_even"] = {
            "cloud_rate_usd_hr": args.cloud_rate,
            "utilization": break_even_utilization(breakdown.total_usd_hr, args.cloud_rate),
        }
    if args.format == "json":
        _emit_json(payload)
        return 0
    lines = [
        f"depreciation  {breakdown.depreciation_usd_hr:.4f} USD/hr  ({fmt_usd(breakdown.depreciation_usd_hr)})",
        f"power         {breakdown.power_usd_hr:.4f} USD/hr  ({fmt_usd(breakdown.power_usd_hr)})",
        f"maintenance   {breakdown.maintenance_usd_hr:.4f} USD/hr  ({fmt_usd(breakdown.maintenance_usd_hr)})",
        f"total         {breakdown.total_usd_hr:.4f} USD/hr  ({fmt_usd(breakdown.total_usd_hr)})",
    ]
    if "cluster" in payload:
        cluster = payload["cluster"]
        lines.append(f"cluster x{cluster['gpu_count']}    {cluster['hourly_usd']:.4f} USD/hr  "
                     f"(reference rate {fmt_usd(cluster['reference_rate_usd'])})")
    if "effective_usd_hr" in payload:
        lines.append(f"effective     {payload['effective_usd_hr']:.4f} USD/hr "
                     f"at u={args.effective_utilization}")
    if "break_even" in payload:
        lines.append(f"break-even    u* = {payload['break_even']['utilization']:.4f} "
                     f"vs cloud {fmt_usd(args.cloud_rate)} USD/hr")
    _emit("\n".join(lines))
    return 0


def _select_rows(sweeps, thresholds, rate):
    return [select_optimal(sweep, thresholds, rate) for sweep in sweeps]


def cmd_select(args) -> int:
    sweeps, _, _ = _load_dataset(args, need_cards=False)
    thresholds = _thresholds(args)
    rate = _resolve_rate(args)
    choices = _select_rows(sweeps, thresholds, rate)
    if args.format == "json":
        _emit_json({"hourly_rate_usd": rate, "thresholds": thresholds.as_dict(),
                    "optima": [c.as_dict() for c in choices]})
        return 0
    lines = ["model\tfeasible\tconc\ttotal_time_s\tcost_usd"]
    for c in choices:
        if c.feasible:
            lines.append(f"{c.model_id}\tyes\t{c.concurrency}\t{c.run.total_time_s}\t{fmt_usd(c.cost_usd)}")
        else:
            lines.append(f"{c.model_id}\tno\t-\t-\t-")
    _emit("\n".join(lines))
    return 0


def cmd_frontier(args) -> int:
    sweeps, cards, _ = _load_dataset(args, need_cards=True)
    thresholds = _thresholds(args)
    rate = _resolve_rate(args)
    cards_by_id = {card.model_id: card for card in cards}
    choices = _select_rows(sweeps, thresholds, rate)
    points = []
    for choice in choices:
        if choice.model_id not in cards_by_id:
            raise ValidationError(f"no quality score for model {choice.model_id!r}", field="model_id")
        if choice.feasible:
            card = cards_by_id[choice.model_id]
            points.append(ParetoPoint(choice.model_id, choice.cost_usd,
                                      card.quality_score, card.params_billion))
    if not points:
        raise ValidationError("no feasible model to place on the frontier", field="points")
    frontier = pareto_frontier(points)
    if args.plot:
        options = PlotOptions(log_x=args.log_x, sweet_spot_usd=args.sweet_spot)
        Path(args.plot).write_text(render_frontier_plot(frontier, points, options), encoding="utf-8")
        print(f"wrote {args.plot}", file=sys.stderr)
    if args.format == "json":
        _emit_json({"hourly_rate_usd": rate, "frontier": frontier.as_dict()})
    else:
        lines = ["model\tcost_usd\tquality\ton_frontier"]
        member_ids = set(frontier.member_ids)
        for point in sorted(points, key=lambda p: p.cost_usd):
            flag = "yes" if point.model_id in member_ids else "no"
            lines.append(f"{point.model_id}\t{fmt_usd(point.cost_usd)}\t{point.quality}\t{flag}")
        _emit("\n".join(lines))
    return 0


def _whatif_body(args) -> dict:
    params = _resolve_params(args, default=A800_BASELINE)
    body: dict = {
        "cost_params": params.as_dict(),
        "gpu_count": args.gpus,
        "thresholds": _thresholds(args).as_dict(),
    }
    if args.runs:
        sweeps, cards, _ = _load_dataset(args, need_cards=True)
        body["dataset"] = json.loads(serialize_dataset(sweeps, cards))
    else:
        body["dataset"] = "fixture"
    if args.cloud_rate is not None:
        body["cloud_rate_usd_hr"] = args.cloud_rate
    return body


def cmd_whatif(args) -> int:
    payload = evaluate_whatif(_whatif_body(args))
    if args.format == "table":
        sweeps, cards, dataset_id = _load_dataset(args, need_cards=True)
        result = what_if(sweeps, cards, _resolve_params(args, default=A800_BASELINE),
                         args.gpus, _thresholds(args))
        report = build_report(result, cards, dataset_id, _thresholds(args))
        _emit(render_table(report, "markdown"))
    else:
        _emit_json(payload)
    return 0


def cmd_report(args) -> int:
    sweeps, cards, dataset_id = _load_dataset(args, need_cards=True)
    params = _resolve_params(args, default=A800_BASELINE)
    thresholds = _thresholds(args)
    result = what_if(sweeps, cards, params, args.gpus, thresholds)
    generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds") if args.stamp else None
    report = build_report(result, cards, dataset_id, thresholds, generated_at=generated_at)
    _write_or_emit(render_table(report, args.format), args.out)
    return 0


def cmd_fixture(args) -> int:
    sweeps, _ = canonical_fixture()
    if args.format == "csv":
        _write_or_emit(serialize_runs(sweeps, "csv"), args.out)
    else:
        _write_or_emit(json.dumps(fixture_document(), indent=2) + "\n", args.out)
    return 0


def cmd_validate(args) -> int:
    text = Path(args.runs).read_text(encoding="utf-8")
    sweeps, cards = parse_dataset(text, _file_format(args.runs, args.runs_format))
    checks = []
    for sweep in sweeps:
        for check in cost_crosschecks(sweep, args.hourly_rate):
            checks.append({
                "model_id": sweep.model_id,
                "concurrency": check.concurrency,
                "published_usd": check.published_usd,
                "recomputed_usd": check.recomputed_usd,
                "abs_error": check.abs_error,
            })
    _emit_json({
        "sweeps": len(sweeps),
        "runs": sum(len(s.runs) for s in sweeps),
        "models": [s.model_id for s in sweeps],
        "model_cards": len(cards),
        "cost_crosschecks": {
            "count": len(checks),
            "max_abs_error": max((c["abs_error"] for c in checks), default=None),
        },
    })
    return 0


def _parse_levels(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ValidationError(f"--levels must be a comma list of integers, got {text!r}",
                              field="levels") from exc


def cmd_sweep(args) -> int:
    config = RunConfig(
        endpoint_url=args.endpoint,
        model_name=args.model,
        concurrency_levels=_parse_levels(args.levels),
        request_timeout_s=args.timeout,
        warmup_requests=args.warmup,
        api_key_env=args.api_key_env,
        shuffle_seed=args.seed,
    )
    workload = load_workload(Path(args.workload).read_text(encoding="utf-8"))
    result = run_sweep(config, workload)
    if not result.sweep.runs:
        notes = "; ".join(f"c{o.concurrency}: {o.note}" for o in result.levels if o.note)
        raise EndpointError(f"no level completed successfully ({notes})")
    if args.out:
        fmt = _file_format(args.out, None)
        Path(args.out).write_text(serialize_runs([result.sweep], fmt), encoding="utf-8")
        print(f"wrote {args.out}", file=sys.stderr)
    if args.trace_log:
        write_trace_log(args.trace_log, result.levels)
        print(f"wrote {args.trace_log}", file=sys.stderr)
    _emit_json({
        "model": config.model_name,
        "workload": workload.name,
        "levels": [
            {
                "concurrency": o.concurrency,
                "in_sweep": o.in_sweep,
                "note": o.note,
                "aggregate": o.aggregate.as_dict() if o.aggregate else None,
            }
            for o in result.levels
        ],
    })
    return 0


def _parse_listen(listen: str) -> tuple[str, int]:
    host, sep, port = listen.rpartition(":")
    if not sep or not port.isdigit():
        raise ValidationError(f"--listen must be host:port, got {listen!r}", field="listen")
    return host or "127.0.0.1", int(port)


def cmd_serve(args) -> int:
    import uvicorn

    try:
        host, port = _parse_listen(args.listen)
    except ValidationError as exc:
        # the listen address is an endpoint concern: bad address exits 2, like a failed bind
        raise EndpointError(str(exc)) from exc
    default_dataset = None
    if args.runs:
        sweeps, cards, _ = _load_dataset(args, need_cards=True)
        default_dataset = (tuple(sweeps), tuple(cards))
    ui_dir = args.ui_dir or _default_ui_dir()
    # Fail fast on unbindable addresses instead of letting the server loop exit.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except (OSError, socket.gaierror) as exc:
        raise EndpointError(f"cannot bind {args.listen}: {exc}") from exc
    finally:
        probe.close()
    app = create_app(static_dir=ui_dir, default_dataset=default_dataset)
    print(f"serving on http://{host}:{port}", file=sys.stderr)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def _default_ui_dir() -> str | None:
    for candidate in (Path.cwd() / "frontend" / "dist",
                      Path(__file__).resolve().parents[2] / "frontend" / "dist"):
        if candidate.is_dir():
            return str(candidate)
    return None


def cmd_mock_server(args) -> int:
    host, port = _parse_listen(args.listen)
    timing = MockTiming(
        first_token_delay_s=args.first_token_delay,
        inter_token_gap_s=args.inter_token_gap,
        output_tokens=args.tokens,
    )
    print(f"mock endpoint on http://{host}:{port}", file=sys.stderr)
    mock_server_mod.main(f"{host}:{port}", timing=timing, api_key=args.api_key)
    return 0


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="infercost",
                     description="economics of LLM inference: costs, optimal concurrency, frontier")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cost", help="hourly GPU cost breakdown")
    _add_param_flags(p)
    p.add_argument("--gpus", type=int, default=1)
    p.add_argument("--effective-utilization", type=float,
                   help="also report effective cost at this utilization")
    p.add_argument("--cloud-rate", type=float, help="also report break-even vs this USD/hr rate")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("select", help="optimal concurrency per model under thresholds")
    _add_dataset_flags(p, with_scores=False)
    _add_threshold_flags(p)
    _add_rate_flags(p)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("frontier", help="cost-quality Pareto frontier over optimal configurations")
    _add_dataset_flags(p, with_scores=True)
    _add_threshold_flags(p)
    _add_rate_flags(p)
    p.add_argument("--plot", help="write an SVG frontier plot to this path")
    p.add_argument("--log-x", action="store_true", help="log-scale cost axis")
    p.add_argument("--sweet-spot", type=float, default=1.40,
                   help="sweet-spot cost annotation in USD (default %(default)s)")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("whatif", help="recompute rate, optima, and frontier for given parameters")
    _add_dataset_flags(p, with_scores=True)
    _add_param_flags(p)
    _add_threshold_flags(p)
    p.add_argument("--gpus", type=int, default=2)
    p.add_argument("--cloud-rate", type=float, help="include break-even vs this USD/hr rate")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("report", help="render the comparison table")
    _add_dataset_flags(p, with_scores=True)
    _add_param_flags(p)
    _add_threshold_flags(p)
    p.add_argument("--gpus", type=int, default=2)
    p.add_argument("--format", choices=["markdown", "csv", "json"], default="markdown")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--stamp", action="store_true", help="include a generation timestamp")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("fixture", help="export the embedded dataset")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("validate", help="validate a run file and cross-check published costs")
    p.add_argument("--runs", required=True)
    p.add_argument("--runs-format", choices=["csv", "json"])
    p.add_argument("--hourly-rate", type=float, default=FIXTURE_HOURLY_USD)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="run a live concurrency sweep against an endpoint")
    p.add_argument("--endpoint", required=True, help="base URL of an OpenAI-compatible server")
    p.add_argument("--model", required=True)
    p.add_argument("--workload", required=True, help="workload JSON file")
    p.add_argument("--levels", default="8,16,32,48,64", help="comma list, strictly increasing")
    p.add_argument("--timeout", type=float, default=120.0, help="per-request timeout (s)")
    p.add_argument("--warmup", type=int, default=8, help="warmup requests per level")
    p.add_argument("--api-key-env", default="OPENAI_API_KEY",
                   help="environment variable holding the bearer token")
    p.add_argument("--seed", type=int, help="seeded dispatch shuffle (default: workload order)")
    p.add_argument("--out", help="write the run file here (.csv or .json)")
    p.add_argument("--trace-log", help="write the JSONL trace log here")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="serve the HTTP API and explorer UI")
    p.add_argument("--listen", default="127.0.0.1:8000")
    _add_dataset_flags(p, with_scores=True)
    p.add_argument("--ui-dir", help="directory with the built UI bundle")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("mock-server", help="run the deterministic mock endpoint")
    p.add_argument("--listen", default="127.0.0.1:8080")
    p.add_argument("--first-token-delay", type=float, default=0.05)
    p.add_argument("--inter-token-gap", type=float, default=0.01)
    p.add_argument("--tokens", type=int, default=10)
    p.add_argument("--api-key", help="require this bearer token")
    p.set_defaults(func=cmd_mock_server)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EndpointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
