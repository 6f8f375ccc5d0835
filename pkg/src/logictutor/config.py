"""Service configuration: defaults < config file < environment variables.

The config file is JSON with the same field names as ServiceConfig;
environment overrides use the LOGICTUTOR_ prefix with upper-cased field
names (e.g. LOGICTUTOR_LOG_PATH).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

ENV_PREFIX = "LOGICTUTOR_"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    exercise_dir: str = ""  # empty: the exercises shipped with the package
    log_path: str = "events.log"
    snapshot_path: str = "sessions.json"
    default_language: str = "en"
    search_cap: int = 50_000
    search_max_len: int = 2
    snapshot_every: int = 25  # actions between periodic snapshots
    frontend_dir: str = ""  # optional static frontend to serve under /ui


def load_config(path: str | Path | None = None, env: dict | None = None) -> ServiceConfig:
    env = os.environ if env is None else env
    config = ServiceConfig()
    if path is not None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config file must hold a JSON object")
        for f in fields(ServiceConfig):
            if f.name in data:
                setattr(config, f.name, data[f.name])
    for f in fields(ServiceConfig):
        env_name = ENV_PREFIX + f.name.upper()
        if env_name in env:
            raw = env[env_name]
            current = getattr(config, f.name)
            setattr(config, f.name, raw if isinstance(current, str) else type(current)(raw))
    return config
