"""CSV and JSON emission.

All numeric fields are written with ``repr(float(x))``, the shortest
decimal that parses back to the identical double, so emitted files
round-trip exactly and reruns with the same inputs are byte-identical.
Failure rows in sweep files leave their numeric fields empty; NaN never
appears in a success row.
"""

from __future__ import annotations

import json
from pathlib import Path

from .model import MEAN_ORDER

TRAJECTORY_COLUMNS = ("t",) + MEAN_ORDER + tuple(
    f"v_{i + 1}{j + 1}" for i in range(8) for j in range(i, 8))

MEASURE_COLUMNS = ("t", "s_q", "s_phi", "s_p", "s_anti", "s_c",
                   "phi1", "phi2", "phi",
                   "avg_s_q", "avg_s_phi", "avg_s_p", "avg_s_anti")

SWEEP_COLUMNS = ("param_name", "param_value", "avg_s_q", "avg_s_phi", "avg_s_p",
                 "avg_s_anti", "avg_s_c", "phi", "steady_reached",
                 "max_real_eig", "status")


def fmt(value) -> str:
    """Full-precision decimal form of one float."""
    return repr(float(value))


def _write_lines(path, lines):
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_trajectory_csv(path, traj):
    """One row per sample: time, means, upper-triangular covariance."""
    lines = [",".join(TRAJECTORY_COLUMNS)]
    upper = [(i, j) for i in range(8) for j in range(i, 8)]
    for k in range(len(traj)):
        row = [fmt(traj.times[k])]
        row += [fmt(x) for x in traj.means[k]]
        cov = traj.covs[k]
        row += [fmt(cov[i, j]) for i, j in upper]
        lines.append(",".join(row))
    _write_lines(path, lines)


def write_measures_csv(path, series):
    lines = [",".join(MEASURE_COLUMNS)]
    columns = [getattr(series, name if name != "t" else "times")
               for name in MEASURE_COLUMNS]
    for k in range(len(series.times)):
        lines.append(",".join(fmt(col[k]) for col in columns))
    _write_lines(path, lines)


def write_sweep_csv(path, rows):
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        if row.ok:
            s = row.summary
            fields = [row.param_name, fmt(row.param_value),
                      fmt(s.avg_s_q), fmt(s.avg_s_phi), fmt(s.avg_s_p),
                      fmt(s.avg_s_anti), fmt(s.avg_s_c), fmt(s.phi),
                      "true" if s.steady_reached else "false",
                      fmt(s.max_real_eig), row.status]
        else:
            fields = [row.param_name, fmt(row.param_value),
                      "", "", "", "", "", "", "", "", row.status]
        lines.append(",".join(fields))
    _write_lines(path, lines)


def steady_document(steady, summary) -> dict:
    """Steady-state verdict plus the steady-window run summary."""
    return {
        "reached": steady.reached,
        "onset_time": steady.onset_time,
        "period_used": steady.period_used,
        "period_multiple": steady.period_multiple,
        "residual": steady.residual,
        "phi": summary.phi,
        "phi1": summary.phi1,
        "phi2": summary.phi2,
        "avg_s_q": summary.avg_s_q,
        "avg_s_phi": summary.avg_s_phi,
        "avg_s_p": summary.avg_s_p,
        "avg_s_anti": summary.avg_s_anti,
        "avg_s_c": summary.avg_s_c,
        "max_real_eig": summary.max_real_eig,
    }


def write_json(path, document):
    Path(path).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")


def manifest_document(version, command, config, outputs, started, finished) -> dict:
    return {
        "tool": "optosync",
        "version": version,
        "command": list(command),
        "started": started,
        "finished": finished,
        "config": config,
        "outputs": list(outputs),
    }
