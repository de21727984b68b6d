"""
Artifact Storage
Atomic persistence for models, reports, predictions and corpora
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Union

from ..exceptions import ArtifactNotFound, DataError

logger = logging.getLogger(__name__)


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """
    Write text so readers see either the old file or the complete new one

    Args:
        path: Destination file; parent directories are created
        text: Content, written as UTF-8 with LF newlines

    Returns:
        The destination path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug(f"Wrote {path}")
    return path


def atomic_write_json(path: Union[str, Path], data: Any) -> Path:
    return atomic_write_text(path, json.dumps(data, ensure_ascii=False, indent=2) + "\n")


def read_json(path: Union[str, Path], role: str = "artifact") -> Any:
    """Parse a JSON file; missing files and syntax errors are data errors"""
    path = Path(path)
    if not path.exists():
        raise ArtifactNotFound(str(path), role=role)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise DataError(f"{path}: not a valid JSON {role}: {e}") from e
