"""
Headless session: run, log, and fold metrics
============================================

Runs the default scenario under autonomy, writes the newline-delimited
session log, and shows that folding the log reproduces the live report.
"""

import tempfile
from pathlib import Path

from cobot_intent import compute_metrics, default_config, run_session

cfg = default_config(autonomy=True)
log = Path(tempfile.mkdtemp()) / "autonomy.cobotlog"

result = run_session(cfg, log_path=log)
r = result.report
print(f"finished: {result.reason} after {result.ticks} ticks")
print(f"scheme={r.scheme}  success={r.success}  switches={r.switch_count}")
print(f"simulated {r.elapsed_s:.2f} s, EE path {r.path_length_m:.3f} m")
print("actuator duty cycles: "
      + " ".join(f"{d:.3f}" for d in r.duty_cycles))

# every emitted message is one JSON line; the log is the whole session
lines = log.read_text().strip().split("\n")
print(f"\nlog: {len(lines)} lines at {log}")
for line in lines[:3]:
    print(f"  {line[:100]}{'...' if len(line) > 100 else ''}")

# the metrics fold is pure: recomputing from the log gives the exact
# report the session emitted, field for field
folded = compute_metrics(log)
print(f"\nfolded report == live report: {folded == r}")
