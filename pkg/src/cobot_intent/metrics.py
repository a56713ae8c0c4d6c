"""Session metrics: one fold over a message stream.

The same fold produces the live report at the end of a session and the
recomputed report from a saved log, so the two agree field for field by
construction.
"""

from dataclasses import dataclass

import numpy as np

from . import protocol
from .errors import ParseError

N_ACTUATORS = 6


@dataclass(frozen=True)
class MetricsReport:
    scheme: str
    switch_count: int
    elapsed_s: float
    path_length_m: float
    duty_cycles: tuple         # per-actuator fraction of frames active
    success: bool


def fold_metrics(messages):
    """Report folded from a message sequence (Metrics/Bye lines ignored)."""
    hello = None
    last_pos = None
    path = 0.0
    switches = 0
    frames = 0
    active = np.zeros(N_ACTUATORS)
    success = False
    last_tick = 0
    for m in messages:
        if hello is None:
            if not isinstance(m, protocol.Hello):
                raise ParseError("log must start with a hello message")
            hello = m
        last_tick = max(last_tick, m.tick)
        if isinstance(m, protocol.SceneState):
            pos = np.asarray(m.ee_pos)
            if last_pos is not None:
                path += float(np.linalg.norm(pos - last_pos))
            last_pos = pos
        elif isinstance(m, protocol.ModeSwitch):
            switches += 1
        elif isinstance(m, protocol.Actuators):
            frames += 1
            active += np.asarray(m.intensities) > 0.0
        elif isinstance(m, protocol.TaskEvent) and m.name == "done":
            success = True
    if hello is None:
        raise ParseError("empty stream: missing hello message")
    duty = tuple(float(a) / frames if frames else 0.0 for a in active)
    return MetricsReport(
        scheme=hello.scheme,
        switch_count=switches,
        elapsed_s=last_tick * hello.dt,
        path_length_m=path,
        duty_cycles=duty,
        success=success,
    )


def compute_metrics(log_path):
    """Recompute the report purely from a saved log file."""
    messages = []
    with open(log_path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                messages.append(protocol.decode(line))
    return fold_metrics(messages)


def report_to_message(report, sid, seq, tick):
    return protocol.Metrics(
        sid=sid, seq=seq, tick=tick, scheme=report.scheme,
        switch_count=report.switch_count, elapsed_s=float(report.elapsed_s),
        path_length_m=float(report.path_length_m),
        duty_cycles=tuple(float(d) for d in report.duty_cycles),
        success=report.success,
    )


def report_from_message(m):
    return MetricsReport(
        scheme=m.scheme, switch_count=m.switch_count, elapsed_s=m.elapsed_s,
        path_length_m=m.path_length_m, duty_cycles=tuple(m.duty_cycles),
        success=m.success,
    )
