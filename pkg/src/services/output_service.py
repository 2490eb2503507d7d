"""
Result writing service

Writes experiment tables as CSV with fixed 17-significant-digit floats and
run manifests as JSON.
"""
from typing import Iterable, List, Optional, Sequence
from pathlib import Path
import csv
import io
import logging
import math
import numbers

from ..liouville.constants import CSV_PRECISION
from .config import RunManifest

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


class OutputError(Exception):
    """Raised when results cannot be written"""
    pass


def format_value(value, precision: int = CSV_PRECISION) -> str:
    """Integers verbatim, floats with ``precision`` significant digits, nan for undefined"""
    if isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral) and not isinstance(value, bool):
        return str(int(value))
    number = float(value)
    if math.isnan(number):
        return "nan"
    return f"{number:.{precision}g}"


def format_csv(header: Sequence[str], rows: Iterable[Sequence], precision: int = CSV_PRECISION) -> str:
    """CSV text with a header line and one line per row"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([format_value(value, precision) for value in row] for row in rows)
    return buffer.getvalue()


class OutputService:
    """Service for writing experiment results to a directory"""

    def __init__(self, output_dir: str | Path, precision: int = CSV_PRECISION):
        """
        Initialize the output service.

        Args:
            output_dir: Directory receiving CSV files and the manifest
            precision: Significant digits of floats (default: 17)
        """
        self.output_dir = Path(output_dir)
        self.precision = precision
        logger.info(f"OutputService initialized with directory: {self.output_dir}")

    def _prepare(self) -> None:
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            logger.error(f"Cannot create output directory {self.output_dir}: {e}")
            raise OutputError(f"Cannot create output directory {self.output_dir}: {e}") from e

    def write_csv(
        self,
        name: str,
        header: Sequence[str],
        rows: Iterable[Sequence],
    ) -> Path:
        """
        Write a table.

        Args:
            name: File name inside the output directory
            header: Column names
            rows: Row values (ints, floats or strings)

        Returns:
            Path of the written file

        Raises:
            OutputError: If the file cannot be written
        """
        self._prepare()
        path = self.output_dir / name
        text = format_csv(header, rows, self.precision)
        try:
            with open(path, "w", newline="") as handle:
                handle.write(text)
        except OSError as e:
            logger.error(f"Writing {path} failed: {e}")
            raise OutputError(f"Failed to write {path}: {e}") from e
        logger.info(f"Saved {text.count(chr(10)) - 1} row(s) to {path}")
        return path

    def write_manifest(self, manifest: RunManifest, name: Optional[str] = None) -> Path:
        """
        Write the run manifest as JSON.

        Raises:
            OutputError: If the file cannot be written
        """
        self._prepare()
        path = self.output_dir / (name or MANIFEST_NAME)
        try:
            return manifest.save(path)
        except (OSError, TypeError, ValueError) as e:
            logger.error(f"Writing manifest {path} failed: {e}")
            raise OutputError(f"Failed to write manifest {path}: {e}") from e

    def list_outputs(self) -> List[Path]:
        """Files currently in the output directory"""
        if not self.output_dir.exists():
            return []
        return sorted(p for p in self.output_dir.iterdir() if p.is_file())
