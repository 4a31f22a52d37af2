"""Command-line surface.

Subcommands: eval (sweep a cue channel over a theta grid to CSV), simulate
(script -> trace), suite (plan -> traces + metrics summary), metrics
(traces -> summary). Machine-readable output goes to stdout, diagnostics to
stderr. Exit codes: 0 success, 1 validation failure, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .configio import load_simulation, load_suite, parse_config
from .config import GuidanceConfig
from .errors import GuidanceError
from .geometry import AngularRange, Vec3, normalized_progress
from .lights import env_light_intensity, point_light_color
from .audio import sound_source_position
from .metrics import extract_metrics, metrics_to_csv
from .scenario import run_scenario, run_suite
from .trace import read_trace, write_trace

_CHANNELS = ("env", "point", "spot", "sound")


def _fmt(x: float) -> str:
    return format(x, ".9g")


def _eval_rows(channel: str, rng: AngularRange, gamma: float, steps: int, config: GuidanceConfig) -> list[str]:
    if steps < 1:
        raise GuidanceError(f"steps={steps} must be >= 1")
    thetas = [
        rng.theta_min + i * (rng.theta_max - rng.theta_min) / steps for i in range(steps + 1)
    ]
    if channel == "env":
        rows = ["theta,intensity"]
        for th in thetas:
            rows.append(f"{_fmt(th)},{_fmt(env_light_intensity(th, rng, config.env_levels, gamma))}")
    elif channel == "point":
        rows = ["theta,r,g,b"]
        for th in thetas:
            c = point_light_color(th, rng, config.warm, config.cold, gamma)
            rows.append(f"{_fmt(th)},{_fmt(c.r)},{_fmt(c.g)},{_fmt(c.b)}")
    elif channel == "spot":
        rows = ["theta,intensity,cone_angle"]
        geo = config.spot_geometry
        for th in thetas:
            p = normalized_progress(th, rng, gamma)
            intensity = config.spot_levels.l_min + (config.spot_levels.l_max - config.spot_levels.l_min) * p
            cone = geo.a_min + (geo.a_max - geo.a_min) * p
            rows.append(f"{_fmt(th)},{_fmt(intensity)},{_fmt(cone)}")
    else:
        rows = ["theta,x,y,z"]
        u, t = Vec3(0.0, 0.0, 0.0), Vec3(1.0, 0.0, 0.0)
        for th in thetas:
            p = sound_source_position(u, t, th, rng, config.sound_easing)
            rows.append(f"{_fmt(th)},{_fmt(p.x)},{_fmt(p.y)},{_fmt(p.z)}")
    return rows


def _cmd_eval(args) -> int:
    config = GuidanceConfig()
    if args.config:
        parsed = parse_config(Path(args.config).read_text())
        if not isinstance(parsed, GuidanceConfig):
            raise GuidanceError(f"{args.config} does not define a guidance config")
        config = parsed
    gamma = args.gamma if args.gamma is not None else {
        "env": config.gamma_env,
        "point": config.gamma_point,
        "spot": config.gamma_spot,
        "sound": 1.0,
    }[args.channel]
    rng = AngularRange(args.theta_min, args.theta_max)
    for row in _eval_rows(args.channel, rng, gamma, args.steps, config):
        print(row)
    return 0


def _cmd_simulate(args) -> int:
    script, agent, config = load_simulation(Path(args.script).read_text())
    trace = run_scenario(script, agent, config, dt=args.dt, seed=args.seed, participant=args.participant)
    text = write_trace(trace.records, trace.meta)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {len(trace.records)} ticks to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_suite(args) -> int:
    plan, agent, config = load_suite(Path(args.plan).read_text())
    if args.participants is not None:
        from dataclasses import replace

        plan = replace(plan, participants=args.participants, trials=())
    result = run_suite(plan, agent, config, dt=args.dt, seed=args.seed, jobs=args.jobs)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, trace in enumerate(result.traces):
            meta = trace.meta
            name = f"trace_p{meta.participant:03d}_{i % 8:02d}_{meta.method}_{meta.role}.jsonl"
            (out_dir / name).write_text(write_trace(trace.records, meta))
        print(f"wrote {len(result.traces)} traces to {args.out_dir}", file=sys.stderr)
    sys.stdout.write(metrics_to_csv(result.summary))
    return 0


def _cmd_metrics(args) -> int:
    traces = [read_trace(Path(p).read_text()) for p in args.traces]
    sys.stdout.write(metrics_to_csv(extract_metrics(traces)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="turncue", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="sweep a cue channel over a theta grid, CSV to stdout")
    p_eval.add_argument("--channel", choices=_CHANNELS, required=True)
    p_eval.add_argument("--theta-max", type=float, required=True)
    p_eval.add_argument("--theta-min", type=float, default=0.0)
    p_eval.add_argument("--gamma", type=float, default=None)
    p_eval.add_argument("--steps", type=int, default=10)
    p_eval.add_argument("--config", default=None)
    p_eval.set_defaults(func=_cmd_eval)

    p_sim = sub.add_parser("simulate", help="run one scripted trial to a trace")
    p_sim.add_argument("--script", required=True)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--dt", type=float, default=1.0 / 72.0)
    p_sim.add_argument("--participant", type=int, default=0)
    p_sim.add_argument("--out", default=None)
    p_sim.set_defaults(func=_cmd_simulate)

    p_suite = sub.add_parser("suite", help="run a full study plan; summary CSV to stdout")
    p_suite.add_argument("--plan", required=True)
    p_suite.add_argument("--participants", type=int, default=None)
    p_suite.add_argument("--seed", type=int, default=0)
    p_suite.add_argument("--dt", type=float, default=1.0 / 72.0)
    p_suite.add_argument("--out-dir", default=None)
    p_suite.add_argument("--jobs", type=int, default=1)
    p_suite.set_defaults(func=_cmd_suite)

    p_met = sub.add_parser("metrics", help="summarize trace files; CSV to stdout")
    p_met.add_argument("traces", nargs="+")
    p_met.set_defaults(func=_cmd_metrics)

    return parser


def cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors; our contract reserves
        # 2 for I/O failures.
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except GuidanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        name = getattr(exc, "filename", None)
        where = f" ({name})" if name else ""
        print(f"i/o error{where}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
