"""
JSON file repository for configurations, graphs and results.

This module provides all file I/O of the toolkit:
- Loading point configurations and abstract graphs from JSON documents
- SHA-256 digests of input files for the run manifest
- Writing single JSON documents and JSON-lines streams
"""

import hashlib
import json
import logging
import os
from typing import Any, Dict, Iterable, TextIO

from src.core.oriented_matroid import ConfigurationError, PointConfiguration
from src.core.reconstruction import AbstractGraph

logger = logging.getLogger(__name__)


# ============================================================================
# CONSTANTS
# ============================================================================

ENCODING = "utf-8"
DIGEST_CHUNK_SIZE = 65536


# ============================================================================
# EXCEPTIONS
# ============================================================================

class InputFileError(ValueError):
    """Raised when an input file is missing or is not valid JSON."""
    pass


# ============================================================================
# READING
# ============================================================================

def read_document(path: str) -> Dict[str, Any]:
    """
    Reads one JSON object from `path`.

    Raises:
        InputFileError: If the file is missing, unreadable or not a JSON object.
    """
    if not os.path.exists(path):
        raise InputFileError(f"Input file not found: {path}")
    try:
        with open(path, "r", encoding=ENCODING) as handle:
            data = json.load(handle)
    except json.JSONDecodeError as e:
        raise InputFileError(f"{path}: invalid JSON ({e})") from e
    except OSError as e:
        raise InputFileError(f"{path}: cannot read ({e})") from e
    if not isinstance(data, dict):
        raise InputFileError(f"{path}: expected a JSON object")
    logger.debug(f"Read {path}")
    return data


def load_configuration(path: str) -> PointConfiguration:
    """
    Loads {"name": ..., "dim": d, "points": [[...], ...], "labels": [...]}.

    Raises:
        InputFileError: On I/O or JSON errors.
        ConfigurationError: On malformed or degenerate point data.
    """
    data = read_document(path)
    data.setdefault("name", os.path.splitext(os.path.basename(path))[0])
    config = PointConfiguration.from_dict(data)
    logger.info(f"[OK] Loaded configuration {config.name}: {config.n} points in dimension {config.dim}")
    return config


def load_graph(path: str) -> AbstractGraph:
    """
    Loads {"vertices": [...], "edges": [[u, v], ...], "rank": r?}.

    Raises:
        InputFileError: On I/O or JSON errors.
        GraphValidationError: If the graph is malformed, disconnected or irregular.
    """
    data = read_document(path)
    data.setdefault("name", os.path.splitext(os.path.basename(path))[0])
    graph = AbstractGraph.from_dict(data)
    logger.info(f"[OK] Loaded graph {data['name']}: {graph.n} vertices, rank {graph.claimed_rank}")
    return graph


def file_digest(path: str) -> str:
    """Hex SHA-256 of the file contents."""
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as handle:
            for chunk in iter(lambda: handle.read(DIGEST_CHUNK_SIZE), b""):
                digest.update(chunk)
    except OSError as e:
        raise InputFileError(f"{path}: cannot read ({e})") from e
    return digest.hexdigest()


# ============================================================================
# WRITING
# ============================================================================

def dumps(document: Any) -> str:
    """Canonical single-line JSON: sorted keys, no spaces."""
    return json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_json(document: Any, stream: TextIO) -> None:
    stream.write(dumps(document) + "\n")


def write_json_lines(documents: Iterable[Any], stream: TextIO) -> int:
    count = 0
    for document in documents:
        stream.write(dumps(document) + "\n")
        count += 1
    return count


def save_configuration(config: PointConfiguration, path: str) -> None:
    """Writes a configuration in the input format."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding=ENCODING) as handle:
        json.dump(config.to_dict(), handle, indent=2)
        handle.write("\n")
    logger.info(f"[OK] Saved {config.name} to {path}")


__all__ = [
    "ConfigurationError",
    "InputFileError",
    "dumps",
    "file_digest",
    "load_configuration",
    "load_graph",
    "read_document",
    "save_configuration",
    "write_json",
    "write_json_lines",
]
