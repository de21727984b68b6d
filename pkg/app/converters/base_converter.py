"""
Base Converter
Abstract base class for all orthography converters
"""

from abc import ABC, abstractmethod
from datetime import datetime
from typing import Any, Dict, Iterable, List
import logging

from ..exceptions import ConversionError, DataError

logger = logging.getLogger(__name__)


class BaseConverter(ABC):
    """
    Abstract base class for sentence converters

    All converters follow a common pattern:
    1. Receive decomposed source sentences
    2. Convert each with rules, tags or a trained model
    3. Return target sentences in input order
    4. Keep a run log
    """

    converter_name: str = "base_converter"

    def __init__(self):
        self.logs: List[str] = []

    def log(self, message: str, level: str = "info"):
        """Add to the converter's run log"""
        timestamp = datetime.now().isoformat()
        log_entry = f"[{timestamp}] [{self.converter_name}] [{level.upper()}] {message}"
        self.logs.append(log_entry)

        if level == "error":
            logger.error(log_entry)
        elif level == "warning":
            logger.warning(log_entry)
        else:
            logger.info(log_entry)

    def clear_logs(self):
        self.logs = []

    def get_logs(self) -> List[str]:
        return self.logs.copy()

    @abstractmethod
    def convert_sentence(self, sentence: str) -> str:
        """
        Convert one sentence

        Args:
            sentence: Decomposed source sentence

        Returns:
            Decomposed target sentence
        """
        pass

    def convert_lines(self, lines: Iterable[str]) -> List[str]:
        """Convert sentences in order; a data error names its 1-based position"""
        out = []
        for position, line in enumerate(lines, start=1):
            try:
                out.append(self.convert_sentence(line))
            except ConversionError:
                raise
            except DataError as e:
                raise ConversionError(position, e) from e
        return out

    def safe_convert(self, lines: Iterable[str]) -> Dict[str, Any]:
        """
        Convert with error handling

        Returns:
            {"success", "data" or "error", "logs"}
        """
        lines = list(lines)
        try:
            self.log(f"Converting {len(lines)} sentences")
            result = self.convert_lines(lines)
            self.log("Conversion complete")
            return {"success": True, "data": result, "logs": self.get_logs()}
        except Exception as e:
            self.log(f"Conversion failed: {e}", level="error")
            return {"success": False, "error": str(e), "logs": self.get_logs()}
