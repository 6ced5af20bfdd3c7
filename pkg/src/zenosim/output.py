"""CSV / JSON / manifest emission for the command-line front end.

Contracts kept here so downstream figure tooling can rely on them:
CSV is UTF-8, comma-separated, LF line endings, one header row, floats at
17 significant digits.  JSON is UTF-8 with sorted keys.  Every output
directory receives a manifest.json sufficient to reproduce its contents.
"""
from __future__ import annotations

import datetime
import json
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import Trajectory
from .pauli import COORD_NAMES

TRAJECTORY_HEADER = ("time",) + COORD_NAMES
ENTROPY_HEADER = ("time", "S")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory_csv(path, traj: Trajectory, with_entropy: bool = False) -> Path:
    path = Path(path)
    header = TRAJECTORY_HEADER + (("S",) if with_entropy else ())
    if with_entropy and traj.entropy is None:
        raise ValueError("trajectory carries no entropy series")
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(len(traj)):
            row = [_fmt(traj.times[i])] + [_fmt(v) for v in traj.states[i]]
            if with_entropy:
                row.append(_fmt(traj.entropy[i]))
            fh.write(",".join(row) + "\n")
    return path


def write_entropy_csv(path, times, entropy) -> Path:
    path = Path(path)
    times = np.asarray(times)
    entropy = np.asarray(entropy)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(ENTROPY_HEADER) + "\n")
        for t, s in zip(times, entropy):
            fh.write(f"{_fmt(t)},{_fmt(s)}\n")
    return path


def write_json(path, payload) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def write_manifest(out_dir, command: str, config: dict, outputs,
                   integrator: dict | None = None, note: str | None = None) -> Path:
    out_dir = Path(out_dir)
    payload = {
        "command": command,
        "config": config,
        "integrator": integrator or {"method": "rk4", "fixed_step": True},
        "outputs": [str(Path(p).name) for p in outputs],
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "version": __version__,
    }
    if note:
        payload["note"] = note
    return write_json(out_dir / "manifest.json", payload)
