"""Service configuration: JSON file with environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

ENV_PREFIX = "RULEGRID_"


@dataclass
class AppConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    data_dir: str = "./rulegrid-data"
    editor_token: str = ""
    frontend_dir: str | None = None  # static bundle to serve, if built

    def check(self) -> None:
        if not self.editor_token:
            raise ValueError("editor_token must be set and non-empty")
        if not (1 <= self.port <= 65535):
            raise ValueError(f"port {self.port} out of range")


def load_config(path: str | Path | None = None) -> AppConfig:
    """Read config from a JSON file (if given), then apply env overrides."""
    cfg = AppConfig()
    if path is not None:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(doc, dict):
            raise ValueError("config must be a JSON object")
        unknown = set(doc) - {"host", "port", "data_dir", "editor_token", "frontend_dir"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key, value in doc.items():
            setattr(cfg, key, value)
    if ENV_PREFIX + "HOST" in os.environ:
        cfg.host = os.environ[ENV_PREFIX + "HOST"]
    if ENV_PREFIX + "PORT" in os.environ:
        cfg.port = int(os.environ[ENV_PREFIX + "PORT"])
    if ENV_PREFIX + "DATA_DIR" in os.environ:
        cfg.data_dir = os.environ[ENV_PREFIX + "DATA_DIR"]
    if ENV_PREFIX + "EDITOR_TOKEN" in os.environ:
        cfg.editor_token = os.environ[ENV_PREFIX + "EDITOR_TOKEN"]
    if ENV_PREFIX + "FRONTEND_DIR" in os.environ:
        cfg.frontend_dir = os.environ[ENV_PREFIX + "FRONTEND_DIR"]
    cfg.port = int(cfg.port)
    return cfg
