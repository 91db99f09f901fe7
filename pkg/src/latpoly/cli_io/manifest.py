"""Run manifests: one immutable JSON record per command invocation."""

from __future__ import annotations

import hashlib
import json
import platform
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path

# Arguments that change how a run executes but not what it computes.
EXECUTION_ONLY = ("threads", "out", "format", "manifest_dir", "table")

LOG_CONVENTION = "natural log; span threshold floor(N / ln^2 N); contact target ln^2 N"


def code_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def manifest_id(command: str, config: dict) -> str:
    """Stable id from the command and the result-relevant configuration."""
    core = {k: v for k, v in config.items() if k not in EXECUTION_ONLY}
    blob = json.dumps({"command": command, "config": core}, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RunManifest:
    command: str
    argv: tuple
    config: dict
    code_version: str
    animal_convention: str | None
    log_convention: str
    seeds: tuple
    rigor: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    python: str = platform.python_version()

    @property
    def id(self) -> str:
        return manifest_id(self.command, self.config)

    def to_json(self) -> str:
        d = asdict(self)
        d["id"] = self.id
        return json.dumps(d, indent=2, sort_keys=True, default=str) + "\n"

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json())
        return path
