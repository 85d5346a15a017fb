"""Service configuration: one JSON file, environment-variable overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path


@dataclass
class Config:
    port: int = 8765
    data_dir: str = "imlab-data"
    workers: int = 1

    @classmethod
    def load(cls, path: str | Path | None = None) -> "Config":
        cfg = cls()
        if path is not None:
            d = json.loads(Path(path).read_text())
            cfg.port = int(d.get("port", cfg.port))
            cfg.data_dir = str(d.get("data_dir", cfg.data_dir))
            cfg.workers = int(d.get("workers", cfg.workers))
        if "IMLAB_PORT" in os.environ:
            cfg.port = int(os.environ["IMLAB_PORT"])
        if "IMLAB_DATA_DIR" in os.environ:
            cfg.data_dir = os.environ["IMLAB_DATA_DIR"]
        if "IMLAB_WORKERS" in os.environ:
            cfg.workers = int(os.environ["IMLAB_WORKERS"])
        return cfg
