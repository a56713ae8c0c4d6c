"""Command-line entry points for running, replaying, and inspecting sessions.

Subcommands:

  run      serve a live session on a TCP port for interactive clients
  script   run a headless session (scripted user or autonomy) to a log
  replay   stream a saved log to stdout or to connected clients
  metrics  recompute the metrics report from a saved log
  check    validate a scenario file and plan without running anything

Exit codes: 0 success, 1 session finished without task success,
2 bad configuration or unreadable log, 3 scene out of reach.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import default_config, load_config, session_id, validate_config
from .errors import ConfigError, Infeasible, ParseError, Unreachable, VersionError
from .kinematics import MotionLimits
from .metrics import compute_metrics
from .planning import plan_pick_place
from .server import DEFAULT_PORT, SessionServer
from .session import replay_log, run_session, scripted_driver

_FEEDBACK = {
    "both": (True, True),
    "visual": (True, False),
    "haptic": (False, True),
    "none": (False, False),
}


def _add_config_flags(p):
    p.add_argument("--config", metavar="FILE",
                   help="scenario TOML file (default: built-in scenario)")
    p.add_argument("--scheme", choices=("adaptive", "cardinal"),
                   help="input mapping scheme override")
    p.add_argument("--autonomy", action="store_true",
                   help="let the planner drive instead of the user")
    p.add_argument("--feedback", choices=sorted(_FEEDBACK),
                   help="which feedback channels to emit")
    p.add_argument("--seed", type=int, help="session seed override")


def _build_config(args):
    cfg = load_config(args.config) if args.config else default_config()
    overrides = {}
    if args.scheme:
        overrides["scheme"] = args.scheme
    if args.autonomy:
        overrides["autonomy"] = True
    if args.feedback:
        visual, haptic = _FEEDBACK[args.feedback]
        overrides["feedback_visual"] = visual
        overrides["feedback_haptic"] = haptic
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        cfg = replace(cfg, **overrides)
        validate_config(cfg)
    return cfg


def _report_text(report):
    lines = [
        f"scheme: {report.scheme}",
        f"success: {'true' if report.success else 'false'}",
        f"switch_count: {report.switch_count}",
        f"elapsed_s: {report.elapsed_s:.3f}",
        f"path_length_m: {report.path_length_m:.4f}",
        "duty_cycles: " + " ".join(f"{d:.4f}" for d in report.duty_cycles),
    ]
    return "\n".join(lines) + "\n"


def _write_report(report, log_path):
    path = Path(log_path).with_suffix(".report.txt")
    path.write_text(_report_text(report))
    return path


def _cmd_check(args):
    cfg = _build_config(args)
    plan = plan_pick_place(cfg.scene, cfg.model, MotionLimits())
    print(f"scenario: {cfg.name}")
    print(f"session_id: {session_id(cfg)}")
    print(f"plan_duration_s: {plan.duration:.3f}")
    print(f"segments: {len(plan.segments)}")
    print("ok")
    return 0


def _cmd_script(args):
    cfg = _build_config(args)
    out = Path(args.out) if args.out else Path(
        f"{cfg.name}-{session_id(cfg)}.cobotlog")
    driver = None if cfg.autonomy else scripted_driver(cfg)
    result = run_session(cfg, driver=driver, log_path=out)
    report_path = _write_report(result.report, out)
    sys.stdout.write(_report_text(result.report))
    print(f"log: {out}")
    print(f"report: {report_path}")
    return 0 if result.report.success else 1


def _cmd_run(args):
    cfg = _build_config(args)
    with SessionServer(port=args.port, static_dir=args.static) as server:
        print(f"listening on port {server.port} (session {session_id(cfg)})",
              flush=True)
        if not args.no_wait:
            server.wait_for_client()
        driver = None if cfg.autonomy else server.driver
        result = server.serve_session(cfg, pace=args.pace,
                                      log_path=args.out, driver=driver)
    if args.out:
        report_path = _write_report(result.report, args.out)
        print(f"report: {report_path}")
    sys.stdout.write(_report_text(result.report))
    return 0 if result.report.success else 1


def _cmd_replay(args):
    if args.port is not None:
        with SessionServer(port=args.port, static_dir=args.static) as server:
            print(f"listening on port {server.port}", flush=True)
            server.wait_for_client()
            count = server.serve_replay(args.log, pace=args.pace)
        print(f"replayed {count} messages")
        return 0
    from . import protocol
    for message in replay_log(args.log, pace=args.pace):
        sys.stdout.write(protocol.encode(message) + "\n")
    return 0


def _cmd_metrics(args):
    report = compute_metrics(args.log)
    sys.stdout.write(_report_text(report))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cobot-intent",
        description="Simulated cobot sessions with motion-intent feedback.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="serve a live interactive session")
    _add_config_flags(p)
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--pace", type=float, default=1.0,
                   help="wall-clock speed multiplier (0 = unpaced)")
    p.add_argument("--out", metavar="FILE", help="also write a .cobotlog")
    p.add_argument("--static", metavar="DIR",
                   help="serve this directory over plain HTTP")
    p.add_argument("--no-wait", action="store_true",
                   help="start without waiting for a client")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("script", help="run a headless session to a log")
    _add_config_flags(p)
    p.add_argument("--out", metavar="FILE", help="log file path")
    p.set_defaults(func=_cmd_script)

    p = sub.add_parser("replay", help="stream a saved log")
    p.add_argument("log", help=".cobotlog file to replay")
    p.add_argument("--port", type=int, nargs="?", const=DEFAULT_PORT,
                   default=None, help="serve on a port instead of stdout")
    p.add_argument("--pace", type=float, default=0.0,
                   help="wall-clock speed multiplier (0 = unpaced)")
    p.add_argument("--static", metavar="DIR",
                   help="serve this directory over plain HTTP")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("metrics", help="recompute metrics from a log")
    p.add_argument("log", help=".cobotlog file to fold")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("check", help="validate a scenario without running")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParseError, VersionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (Unreachable, Infeasible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
