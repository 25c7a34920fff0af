"""
Run manifest: what was run, on which inputs, with which seed and budget.

Emitted once per CLI invocation as a single JSON line on stderr (and to a
file on request), never on stdout.
"""

import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, TextIO

from src.adapters.repositories.json_files import dumps, file_digest

logger = logging.getLogger(__name__)

TOOL_NAME = "polytope-orderings"
TOOL_VERSION = "1.0.0"


@dataclass
class RunManifest:
    command: str
    inputs: Dict[str, str] = field(default_factory=dict)
    seed: Optional[int] = None
    budget: Optional[int] = None
    version: str = TOOL_VERSION
    exit_code: Optional[int] = None
    wall_time: float = 0.0
    _started: float = field(default_factory=time.perf_counter, repr=False)

    def add_input(self, path: Optional[str]) -> None:
        """Records the SHA-256 of an input file; unreadable files are left to the loader."""
        if not path:
            return
        try:
            self.inputs[path] = file_digest(path)
        except ValueError as e:
            logger.debug(f"No digest for {path}: {e}")

    def finish(self, exit_code: int) -> None:
        self.exit_code = exit_code
        self.wall_time = round(time.perf_counter() - self._started, 6)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tool": TOOL_NAME,
            "command": self.command,
            "inputs": dict(self.inputs),
            "seed": self.seed,
            "budget": self.budget,
            "version": self.version,
            "exit_code": self.exit_code,
            "wall_time": self.wall_time,
        }

    def emit(self, path: Optional[str] = None, stream: Optional[TextIO] = None) -> None:
        line = dumps({"manifest": self.to_dict()})
        (stream or sys.stderr).write(line + "\n")
        if path:
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(line + "\n")
