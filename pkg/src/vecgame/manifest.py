"""Run manifests tying every output artifact to its exact inputs."""

from __future__ import annotations

import datetime
import hashlib
import json
from dataclasses import asdict, dataclass, field


def config_hash(payload: dict) -> str:
    """Stable digest over everything that affects results."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int
    version: str
    outputs: list[str] = field(default_factory=list)
    created_at: str = ""
    digest: str = ""

    def finalize(self) -> "RunManifest":
        self.digest = config_hash({"command": self.command, "config": self.config, "seed": self.seed})
        self.created_at = datetime.datetime.now(datetime.timezone.utc).isoformat()
        return self

    def write(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")
