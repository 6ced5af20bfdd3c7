"""Config-file parsing for the command-line front end.

Files are flat key = value text, optionally organized in [sections];
sections are cosmetic and all keys share one namespace.  Frequencies are
given as Rabi frequencies (rabi = 2*omega) to match the usual quoting
convention; entropy is reported in nats.
"""
from __future__ import annotations

import configparser
import re
from pathlib import Path

from .dynamics import ZenoConfig
from .errors import ConfigError, ValidationError
from .states import GeneralizedState

RUN_KEYS = {"rabi1", "rabi2", "alpha1", "alpha2", "dt", "t_final", "stride",
            "init", "entropy"}

_BLOCH_RE = re.compile(r"^bloch:\(([^)]*)\)$")


def read_flat_config(path) -> dict:
    """Parse a key = value file into one flat dict (sections merged)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    parser = configparser.ConfigParser(interpolation=None, strict=False)
    first_content = next((ln.strip() for ln in text.splitlines()
                          if ln.strip() and not ln.strip().startswith(("#", ";"))), "")
    if not first_content.startswith("["):
        text = "[run]\n" + text
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    flat: dict = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            flat[key.strip()] = value.strip()
    return flat


def _as_float(raw: dict, key: str, default=None) -> float:
    if key not in raw:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return float(raw[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {raw[key]!r} is not a number") from exc


def _as_int(raw: dict, key: str, default: int) -> int:
    if key not in raw:
        return default
    try:
        return int(raw[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {raw[key]!r} is not an integer") from exc


def _as_bool(raw: dict, key: str, default: bool) -> bool:
    if key not in raw:
        return default
    text = raw[key].lower()
    if text in ("true", "yes", "on", "1"):
        return True
    if text in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"key {key!r}: {raw[key]!r} is not a boolean")


def _float_list(raw: dict, key: str) -> list[float]:
    if key not in raw or not raw[key].strip():
        raise ConfigError(f"missing required key {key!r}")
    try:
        return [float(tok) for tok in raw[key].replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected a list of numbers") from exc


def parse_initial_state(text: str) -> GeneralizedState:
    """init = 00|01|10|11 or bloch:(x1,y1,z1,x2,y2,z2); the bloch form
    starts with all correlators zero, which restricts it to r1 + r2 <= 1."""
    text = text.strip()
    if text in ("00", "01", "10", "11"):
        return GeneralizedState.computational(text)
    match = _BLOCH_RE.match(text)
    if match:
        try:
            vals = [float(tok) for tok in match.group(1).split(",")]
        except ValueError:
            vals = []
        if len(vals) != 6:
            raise ConfigError(f"init bloch:(...) needs 6 numbers, got {text!r}")
        state = GeneralizedState(*vals)
        try:
            state.validate()
        except ValidationError as exc:
            raise ConfigError(f"init {text!r} is not a physical state: {exc}") from exc
        return state
    raise ConfigError(f"init must be 00|01|10|11 or bloch:(x1,y1,z1,x2,y2,z2), got {text!r}")


def build_run_config(raw: dict):
    """(ZenoConfig, stride, entropy_flag) from a flat key dict."""
    try:
        cfg = ZenoConfig(
            omega1=_as_float(raw, "rabi1") / 2.0,
            omega2=_as_float(raw, "rabi2") / 2.0,
            alpha1=_as_float(raw, "alpha1"),
            alpha2=_as_float(raw, "alpha2"),
            dt=_as_float(raw, "dt", 1e-4),
            t_final=_as_float(raw, "t_final"),
            initial=parse_initial_state(raw.get("init", "00")),
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
    stride = _as_int(raw, "stride", 1)
    if stride < 1:
        raise ConfigError("stride must be >= 1")
    return cfg, stride, _as_bool(raw, "entropy", False)


def resolved_run_dict(cfg: ZenoConfig, stride: int, entropy: bool) -> dict:
    """Flat, replayable key = value view of a run config."""
    init = cfg.initial
    named = None
    for label in ("00", "01", "10", "11"):
        if init == GeneralizedState.computational(label):
            named = label
            break
    if named is None:
        named = ("bloch:(%r,%r,%r,%r,%r,%r)"
                 % (init.x1, init.y1, init.z1, init.x2, init.y2, init.z2)).replace("'", "")
    return {
        "rabi1": 2.0 * cfg.omega1,
        "rabi2": 2.0 * cfg.omega2,
        "alpha1": cfg.alpha1,
        "alpha2": cfg.alpha2,
        "dt": cfg.dt,
        "t_final": cfg.t_final,
        "stride": stride,
        "init": named,
        "entropy": entropy,
    }
